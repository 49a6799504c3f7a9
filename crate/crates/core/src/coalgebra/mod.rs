//! Coaugmented differential graded coalgebras, convolution algebras and
//! twisted tensor products.
//!
//! Every coalgebra here is finite: the symmetric and tensor coalgebras are
//! cut off at a word length `N`, which is the level of the coaugmentation
//! filtration, and all structure below that level is exact.

mod convolution;
mod symmetric;
mod tensor;
mod twisted;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::graded::{koszul_sign, GradedMap, GradedModule, Ring, Scalar, Vector};
use crate::{Error, Identity, Violation};

pub use convolution::{convolution_algebra, convolution_dgl, ConvolutionAlgebra, ConvolutionDgl, HomSpace};
pub use symmetric::{symmetric_coalgebra, SymmetricCoalgebra};
pub use tensor::{coderivation_from_corestrictions, tensor_coalgebra, TensorCoalgebra};
pub use twisted::{twisted_tensor_complex, twisted_tensor_operator, DgModule, DgModuleData};

/// Sparse element of an iterated tensor power, keyed by basis indices.
pub type Tensor = BTreeMap<Vec<usize>, Scalar>;

pub(crate) fn add_term(t: &mut Tensor, key: Vec<usize>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&key) {
        Some(v) => {
            let s = &*v + &c;
            if s.is_zero() {
                t.remove(&key);
            } else {
                *v = s;
            }
        }
        None => {
            t.insert(key, c);
        }
    }
}

/// Unvalidated coalgebra data. `coproduct[i]` lists `(j, k, c)` for the
/// terms `c e_j ⊗ e_k` of `Δ e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebraData {
    pub module: Arc<GradedModule>,
    pub differential: Vec<Vector>,
    pub coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    pub counit: Vec<Scalar>,
    pub coaugmentation: Vector,
    pub cocommutative: bool,
}

/// A validated coaugmented DG coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebra {
    module: Arc<GradedModule>,
    differential: GradedMap,
    coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vec<Scalar>,
    coaugmentation: Vector,
    cocommutative: bool,
}

/// Checks degrees, `d² = 0`, counit laws, coassociativity, the
/// coaugmentation, the coderivation rule and, when flagged, cocommutativity.
pub fn validate_coalgebra(data: &DgCoalgebraData) -> Result<DgCoalgebra, Violation> {
    let m = &data.module;
    let n = m.dim();
    let name = |i: usize| m.name(i);
    for (i, img) in data.differential.iter().enumerate() {
        if let Some((j, _)) = img.support().find(|(j, _)| m.degree(*j) != m.degree(i) - 1) {
            return Err(Violation::new(Identity::DifferentialDegree, &[name(i), name(j)]));
        }
    }
    for (i, terms) in data.coproduct.iter().enumerate() {
        if let Some((j, k, _)) = terms.iter().find(|(j, k, _)| m.degree(*j) + m.degree(*k) != m.degree(i)) {
            return Err(Violation::new(Identity::StructureDegree, &[name(i), name(*j), name(*k)]));
        }
    }
    for (i, c) in data.counit.iter().enumerate() {
        if !c.is_zero() && m.degree(i) != 0 {
            return Err(Violation::new(Identity::UnitDegree, &[name(i)]));
        }
    }
    if m.expect_degree(&data.coaugmentation, 0).is_err() {
        return Err(Violation::new(Identity::UnitDegree, &[]));
    }
    let c = DgCoalgebra::from_data_unchecked(data);
    for i in 0..n {
        if !c.d(&c.d(&m.basis_vector(i))).is_zero() {
            return Err(Violation::new(Identity::DifferentialSquare, &[name(i)]));
        }
    }
    for i in 0..n {
        let e = m.basis_vector(i);
        let (mut left, mut right) = (m.zero(), m.zero());
        for (j, k, a) in &c.coproduct[i] {
            left[*k] = &left[*k] + &(&c.counit[*j] * a);
            right[*j] = &right[*j] + &(&c.counit[*k] * a);
        }
        if left != e || right != e {
            return Err(Violation::new(Identity::Counit, &[name(i)]));
        }
    }
    for i in 0..n {
        let mut lhs = Tensor::new();
        let mut rhs = Tensor::new();
        for (j, k, a) in &c.coproduct[i] {
            for (p, q, b) in &c.coproduct[*j] {
                add_term(&mut lhs, vec![*p, *q, *k], a * b);
            }
            for (p, q, b) in &c.coproduct[*k] {
                add_term(&mut rhs, vec![*j, *p, *q], a * b);
            }
        }
        if lhs != rhs {
            let key = lhs.keys().chain(rhs.keys()).find(|k| lhs.get(*k) != rhs.get(*k)).cloned().unwrap_or_default();
            let mut names = vec![name(i)];
            names.extend(key.iter().map(|&x| name(x)));
            return Err(Violation::new(Identity::Coassociativity, &names));
        }
    }
    let eta = &data.coaugmentation;
    let eps_eta = c.counit(eta);
    let mut eta_eta = Tensor::new();
    for (j, a) in eta.support() {
        for (k, b) in eta.support() {
            add_term(&mut eta_eta, vec![j, k], a * b);
        }
    }
    if !eps_eta.is_one() || c.coproduct(eta) != eta_eta || !c.d(eta).is_zero() {
        return Err(Violation::new(Identity::Coaugmentation, &[]));
    }
    if let Err(i) = c.coderivation_witness(&c.differential) {
        return Err(Violation::new(Identity::Coderivation, &[name(i)]));
    }
    if data.cocommutative {
        for i in 0..n {
            let mut flipped = Tensor::new();
            for (j, k, a) in &c.coproduct[i] {
                let s = m.ring().sign(koszul_sign(m.degree(*j), m.degree(*k)));
                add_term(&mut flipped, vec![*k, *j], a * &s);
            }
            if flipped != c.coproduct(&m.basis_vector(i)) {
                return Err(Violation::new(Identity::Cocommutativity, &[name(i)]));
            }
        }
    }
    Ok(c)
}

impl DgCoalgebra {
    pub(crate) fn from_data_unchecked(data: &DgCoalgebraData) -> Self {
        let m = data.module.clone();
        let differential = GradedMap::from_images(m.clone(), m.clone(), -1, data.differential.clone())
            .unwrap_or_else(|_| GradedMap::zero(m.clone(), m.clone(), -1));
        DgCoalgebra {
            module: m,
            differential,
            coproduct: data.coproduct.clone(),
            counit: data.counit.clone(),
            coaugmentation: data.coaugmentation.clone(),
            cocommutative: data.cocommutative,
        }
    }

    pub fn to_data(&self) -> DgCoalgebraData {
        DgCoalgebraData {
            module: self.module.clone(),
            differential: (0..self.dim()).map(|i| self.differential.image(i)).collect(),
            coproduct: self.coproduct.clone(),
            counit: self.counit.clone(),
            coaugmentation: self.coaugmentation.clone(),
            cocommutative: self.cocommutative,
        }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn d(&self, v: &Vector) -> Vector {
        self.differential.apply(v)
    }

    pub fn is_cocommutative(&self) -> bool {
        self.cocommutative
    }

    pub fn coaugmentation(&self) -> &Vector {
        &self.coaugmentation
    }

    pub fn coproduct_of_basis(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.coproduct[i]
    }

    pub fn coproduct(&self, v: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (i, a) in v.support() {
            for (j, k, b) in &self.coproduct[i] {
                add_term(&mut out, vec![*j, *k], a * b);
            }
        }
        out
    }

    pub fn counit_of_basis(&self, i: usize) -> &Scalar {
        &self.counit[i]
    }

    pub fn counit(&self, v: &Vector) -> Scalar {
        v.support().fold(self.ring().zero(), |acc, (i, a)| &acc + &(a * &self.counit[i]))
    }

    /// Replaces the differential, re-running the full validation.
    pub fn with_differential(&self, d: &GradedMap) -> Result<DgCoalgebra, Error> {
        if d.source() != &self.module || d.target() != &self.module || d.degree() != -1 {
            return Err(Error::Incompatible("differential must be a degree -1 endomorphism".into()));
        }
        let mut data = self.to_data();
        data.differential = (0..self.dim()).map(|i| d.image(i)).collect();
        Ok(validate_coalgebra(&data)?)
    }

    /// Checks `Δδ = (δ⊗1 + 1⊗δ)Δ` and `εδ = 0` for a degree -1 map.
    pub fn is_coderivation(&self, delta: &GradedMap) -> bool {
        self.coderivation_witness(delta).is_ok()
    }

    fn coderivation_witness(&self, delta: &GradedMap) -> Result<(), usize> {
        let m = &self.module;
        for i in 0..self.dim() {
            let di = delta.image(i);
            if !self.counit(&di).is_zero() {
                return Err(i);
            }
            let lhs = self.coproduct(&di);
            let mut rhs = Tensor::new();
            for (j, k, a) in &self.coproduct[i] {
                for (p, b) in delta.column(*j) {
                    add_term(&mut rhs, vec![*p, *k], a * b);
                }
                let s = m.ring().sign(koszul_sign(delta.degree(), m.degree(*j)));
                for (q, b) in delta.column(*k) {
                    add_term(&mut rhs, vec![*j, *q], &(a * b) * &s);
                }
            }
            if lhs != rhs {
                return Err(i);
            }
        }
        Ok(())
    }

    /// `Δ̄` applied to the last factor of an iterated tensor, after
    /// projecting each factor onto the coaugmentation coideal.
    fn reduce_last(&self, t: &Tensor) -> Tensor {
        let eta = &self.coaugmentation;
        let mut out = Tensor::new();
        for (key, a) in t {
            let (&last, prefix) = key.split_last().expect("non-empty key");
            let e = self.module.basis_vector(last);
            let eps = &self.counit[last];
            let bar = &e - &eta.scale(eps);
            for (pair, b) in self.coproduct(&bar) {
                let mut k = prefix.to_vec();
                k.extend(pair);
                add_term(&mut out, k, a * &b);
            }
            // Remove η⊗x̄ and x̄⊗η.
            for (j, c) in eta.support() {
                for (l, d) in bar.support() {
                    let mut k1 = prefix.to_vec();
                    k1.extend([j, l]);
                    add_term(&mut out, k1, -&(&(a * c) * d));
                    let mut k2 = prefix.to_vec();
                    k2.extend([l, j]);
                    add_term(&mut out, k2, -&(&(a * c) * d));
                }
            }
        }
        out
    }

    /// Number of factors in the longest nonzero iterated reduced coproduct
    /// of `v - ε(v)η`; zero exactly on multiples of `η(1)`.
    pub fn filtration_level(&self, v: &Vector) -> Result<usize, Error> {
        let bar = v - &self.coaugmentation.scale(&self.counit(v));
        if bar.is_zero() {
            return Ok(0);
        }
        let mut t: Tensor = bar.support().map(|(i, c)| (vec![i], c.clone())).collect();
        let mut level = 1;
        loop {
            let next = self.reduce_last(&t);
            if next.is_empty() {
                return Ok(level);
            }
            if level > self.dim() {
                return Err(Error::Incompatible("coalgebra is not conilpotent".into()));
            }
            t = next;
            level += 1;
        }
    }

    /// Filtration level of every basis element.
    pub fn coaugmentation_filtration(&self) -> Result<Vec<usize>, Error> {
        (0..self.dim()).map(|i| self.filtration_level(&self.module.basis_vector(i))).collect()
    }
}
