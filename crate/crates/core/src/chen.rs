//! Formal power series connections on finite-dimensional DGAs, built word
//! by word from a splitting `Ω = H ⊕ B ⊕ W`, in the form of a twisting
//! cochain `ω: (T^c(V*), δ) → Ω`.
//!
//! `V*` has one generator `s·h` of degree `|h| + 1` per non-unit harmonic
//! representative `h`. The twisting identity checked on every word `c` is
//!
//! `d ω(c) + ω(δc) = Σ (-1)^{|c'|} ω(c') ω(c'')`
//!
//! over the deconcatenations `c = c'c''`. At length `n` the only unknowns are
//! `ω_n` and the corestriction `δ_n`; with `Φ` the known part of the right
//! side minus the known part of `ω(δc)`, `Φ` is a cycle and we set
//! `δ_n(c) = [Φ]` and `ω_n(c) = hΦ ∈ W`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coalgebra::{coderivation_from_corestrictions, tensor_coalgebra, TensorCoalgebra};
use crate::dga::DgAlgebra;
use crate::graded::{koszul_sign, BasisElement, ChainComplex, ComplexSplitting, GradedMap, GradedModule, Vector};
use crate::Error;

/// A splitting of the underlying complex of a DGA in which the unit is one
/// of the harmonic representatives.
#[derive(Clone, Debug)]
pub struct DgaSplitting {
    algebra: DgAlgebra,
    splitting: ComplexSplitting,
    unit_class: usize,
}

/// Builds the splitting by deterministic elimination with the unit as the
/// preferred representative of its class.
pub fn splitting_from_dga(a: &DgAlgebra) -> Result<DgaSplitting, Error> {
    let complex = ChainComplex::new(a.differential().clone())?;
    let splitting = ComplexSplitting::new(complex, std::slice::from_ref(a.unit()))?;
    let unit_class = splitting
        .harmonic()
        .iter()
        .position(|h| h == a.unit())
        .ok_or_else(|| Error::Incompatible("the unit is not a nonzero homology class".into()))?;
    Ok(DgaSplitting { algebra: a.clone(), splitting, unit_class })
}

impl DgaSplitting {
    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn splitting(&self) -> &ComplexSplitting {
        &self.splitting
    }

    /// Position of the unit among the harmonic representatives.
    pub fn unit_class(&self) -> usize {
        self.unit_class
    }

    /// Positions of the other harmonic representatives.
    pub fn reduced_classes(&self) -> Vec<usize> {
        (0..self.splitting.harmonic().len()).filter(|&j| j != self.unit_class).collect()
    }

    /// Harmonic representatives other than the unit.
    pub fn reduced(&self) -> Vec<Vector> {
        self.reduced_classes().into_iter().map(|j| self.splitting.harmonic()[j].clone()).collect()
    }
}

/// `ω` and `δ` on the words of length at most `N` in `V*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConnection {
    tensor: TensorCoalgebra,
    reps: Vec<Vector>,
    omega: Vec<Vector>,
    corestrictions: Vec<Vector>,
}

fn generator_name(m: &GradedModule, rep: &Vector) -> String {
    let mut support = rep.support();
    match (support.next(), support.next()) {
        (Some((i, c)), None) if c.is_one() => format!("s{}", m.name(i)),
        _ => format!("s[{}]", m.format(rep)),
    }
}

impl FormalConnection {
    pub fn tensor(&self) -> &TensorCoalgebra {
        &self.tensor
    }

    /// `V*`.
    pub fn generators(&self) -> &Arc<GradedModule> {
        self.tensor.generators()
    }

    pub fn max_length(&self) -> usize {
        self.tensor.max_length()
    }

    /// `ω` on the word with the given index.
    pub fn omega(&self, word: usize) -> &Vector {
        &self.omega[word]
    }

    /// `δ_n` on the word with the given index, in `V*` coordinates.
    pub fn corestriction(&self, word: usize) -> &Vector {
        &self.corestrictions[word]
    }

    pub fn set_omega(&mut self, word: usize, value: Vector) {
        self.omega[word] = value;
    }

    pub fn set_corestriction(&mut self, word: usize, value: Vector) {
        self.corestrictions[word] = value;
    }

    /// The representatives `ω₁` was built from, one per generator of `V*`.
    pub fn representatives(&self) -> &[Vector] {
        &self.reps
    }

    /// The coderivation on `T^c(V*)` with the stored corestrictions.
    pub fn delta(&self) -> Result<GradedMap, Error> {
        coderivation_from_corestrictions(&self.tensor, &self.corestrictions)
    }

    /// `ω` as a degree -1 map `T^c(V*) → Ω`.
    pub fn omega_map(&self, target: &Arc<GradedModule>) -> Result<GradedMap, Error> {
        GradedMap::from_images(self.tensor.coalgebra().module().clone(), target.clone(), -1, self.omega.clone())
    }

    pub fn word_name(&self, word: usize) -> &str {
        self.tensor.coalgebra().module().name(word)
    }
}

/// Solves for `(ω_n, δ_n)` for `n = 1..=N`.
pub fn build_formal_connection(s: &DgaSplitting, n: usize) -> Result<FormalConnection, Error> {
    let a = &s.algebra;
    let m = a.module();
    let ring = a.ring();
    let sp = &s.splitting;
    let classes = s.reduced_classes();
    let reps = s.reduced();
    let basis = reps
        .iter()
        .zip(&classes)
        .map(|(r, &j)| BasisElement::new(generator_name(m, r), sp.harmonic_degrees()[j] + 1))
        .collect();
    let vstar = Arc::new(GradedModule::new(ring.clone(), basis)?);
    let tensor = tensor_coalgebra(vstar.clone(), n)?;
    let words = tensor.words().to_vec();
    let mut omega = vec![m.zero(); words.len()];
    let mut corestrictions = vec![vstar.zero(); words.len()];
    let index = |w: &[usize]| tensor.word_index(w).expect("subwords are stored");
    // Words are stored by increasing length.
    for (idx, w) in words.iter().enumerate() {
        let len = w.len();
        if len == 0 {
            continue;
        }
        if len == 1 {
            omega[idx] = reps[w[0]].clone();
            continue;
        }
        let mut phi = m.zero();
        for i in 1..len {
            let sign = ring.sign(koszul_sign(1, tensor.word_degree(&w[..i])));
            phi.add_scaled(&sign, &a.mul(&omega[index(&w[..i])], &omega[index(&w[i..])]));
        }
        for k in 2..len {
            for start in 0..=len - k {
                let comp = &corestrictions[index(&w[start..start + k])];
                let sign = ring.sign(koszul_sign(-1, tensor.word_degree(&w[..start])));
                for (g, c) in comp.support() {
                    let mut word = w[..start].to_vec();
                    word.push(g);
                    word.extend_from_slice(&w[start + k..]);
                    phi.add_scaled(&-&(&sign * c), &omega[index(&word)]);
                }
            }
        }
        let name = tensor.coalgebra().module().name(idx);
        if !a.d(&phi).is_zero() {
            return Err(Error::Internal(format!("defect at word {name} is not closed")));
        }
        let coords = sp.harmonic_coordinates(&phi);
        if !coords[s.unit_class].is_zero() {
            return Err(Error::Incompatible(format!("defect at word {name} meets the unit class")));
        }
        corestrictions[idx] = Vector::from_coeffs(classes.iter().map(|&j| coords[j].clone()).collect());
        omega[idx] = sp.homotopy().apply(&phi);
    }
    Ok(FormalConnection { tensor, reps, omega, corestrictions })
}

/// Residual check at one word length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthReport {
    pub length: usize,
    pub words: usize,
    pub violations: usize,
    /// `word: residual` for the first failing word.
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub residuals: Vec<LengthReport>,
    /// Words on which `ω` breaks its normalization.
    pub normalization: Vec<String>,
    pub coderivation: bool,
    pub square_zero: bool,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.residuals.iter().all(|r| r.violations == 0)
            && self.normalization.is_empty()
            && self.coderivation
            && self.square_zero
    }
}

/// Re-evaluates the twisting identity on every word through the coalgebra
/// structure of `T^c(V*)` and the full coderivation `δ`, together with the
/// normalization against a freshly computed splitting.
pub fn verify_formal_connection(a: &DgAlgebra, fc: &FormalConnection) -> Result<VerificationReport, Error> {
    let m = a.module();
    let ring = a.ring();
    let c = fc.tensor.coalgebra();
    let delta = fc.delta()?;
    let omega = fc.omega_map(m)?;
    let mut per_length: BTreeMap<usize, LengthReport> = BTreeMap::new();
    for w in 0..c.dim() {
        let len = fc.tensor.words()[w].len();
        let entry = per_length.entry(len).or_insert(LengthReport {
            length: len,
            words: 0,
            violations: 0,
            first_violation: None,
        });
        entry.words += 1;
        let mut r = &a.d(&omega.image(w)) + &omega.apply(&delta.image(w));
        for (c1, c2, lambda) in c.coproduct_of_basis(w) {
            let sign = ring.sign(koszul_sign(1, c.module().degree(*c1)));
            r.add_scaled(&-&(lambda * &sign), &a.mul(&omega.image(*c1), &omega.image(*c2)));
        }
        if !r.is_zero() {
            entry.violations += 1;
            if entry.first_violation.is_none() {
                entry.first_violation = Some(format!("{}: {}", c.module().name(w), m.format(&r)));
            }
        }
    }
    let fresh = splitting_from_dga(a)?;
    let reduced = fresh.reduced();
    let mut normalization = Vec::new();
    for (w, word) in fc.tensor.words().iter().enumerate() {
        let value = omega.image(w);
        let ok = match word.len() {
            0 => value.is_zero(),
            1 => reduced.get(word[0]) == Some(&value),
            _ => fresh.splitting.project_w().apply(&value) == value,
        };
        if !ok {
            normalization.push(c.module().name(w).to_string());
        }
    }
    Ok(VerificationReport {
        residuals: per_length.into_values().collect(),
        normalization,
        coderivation: c.is_coderivation(&delta),
        square_zero: delta.compose(&delta)?.is_zero(),
    })
}

/// Homology of `(T^c(V*), δ)` on words of length at most `N`, per degree.
/// Degrees reached only by words longer than `N` are missing, so only the
/// low end of the range is reliable.
pub fn bar_model_homology(fc: &FormalConnection) -> Result<BTreeMap<i32, usize>, Error> {
    ChainComplex::new(fc.delta()?)?.homology_dims()
}
