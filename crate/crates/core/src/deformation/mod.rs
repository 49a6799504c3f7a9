//! Maurer-Cartan sets over Artinian coefficient rings and their gauge
//! groupoids, order-by-order extension with obstruction classes, and
//! twisting cochains read as formal deformations.
//!
//! The nilpotent Lie algebra `L = g ⊗ m` is built over the base field with
//! basis `x⊗t^a` (one element per basis element of `g` and monomial of the
//! maximal ideal), so every computation is ordinary linear algebra.

mod compare;
mod extend;

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::dga::Orbit;
use crate::dgl::{DgLieAlgebra, DglData};
use crate::enumerate::{vectors_on, with_pool};
use crate::graded::{BaseField, BasisElement, GradedModule, Ring, Scalar, TruncatedRing, Vector};
use crate::{Error, Limits};

pub use compare::{compare_equivalences, CompareReport};
pub use extend::{
    deformation_from_twisting_cochain, kuranishi_family_check, mc_extend, series_mc_residuals,
    twisting_cochain_from_deformation, KuranishiVerdict, McExtension, MultiVariableMcFamily, ObstructionReport,
};

/// Highest nilpotency class with hard-coded Campbell-Baker-Hausdorff terms.
pub const MAX_CLASS: usize = 4;

/// `K[t_1..t_k] / m^{n+1}` with maximal ideal spanned by the non-constant
/// monomials and socle degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinLocalRing(Arc<TruncatedRing>);

impl ArtinLocalRing {
    pub fn new(base: BaseField, vars: &[&str], order: u32) -> Result<Self, Error> {
        let vars = vars.iter().map(|v| v.to_string()).collect();
        Ok(ArtinLocalRing(TruncatedRing::new(base, vars, order)?))
    }

    pub fn from_ring(ring: &Ring) -> Result<Self, Error> {
        match ring {
            Ring::Truncated(t) => Ok(ArtinLocalRing(t.clone())),
            other => Err(Error::InvalidRing(format!("{} is not a truncated polynomial ring", other.descriptor()))),
        }
    }

    pub fn truncated(&self) -> &Arc<TruncatedRing> {
        &self.0
    }

    pub fn ring(&self) -> Ring {
        Ring::Truncated(self.0.clone())
    }

    pub fn base(&self) -> Ring {
        self.0.base().ring()
    }

    pub fn socle_degree(&self) -> usize {
        self.0.order() as usize
    }

    /// Number of monomials spanning the maximal ideal.
    pub fn ideal_dim(&self) -> usize {
        self.0.dim() - 1
    }
}

fn inverse_factorial(ring: &Ring, k: usize) -> Result<Scalar, Error> {
    let f = (1..=k as i64).product::<i64>();
    ring.from_i64(f).inverse().ok_or_else(|| Error::NotInvertible(format!("{k}!")))
}

fn check_class(class: usize) -> Result<(), Error> {
    if class > MAX_CLASS {
        Err(Error::ClassTooLarge(class))
    } else {
        Ok(())
    }
}

/// Campbell-Baker-Hausdorff product of two degree-zero elements in a Lie
/// algebra nilpotent of class at most `class`:
/// `X + Y + ½[X,Y] + 1/12[X,[X,Y]] - 1/12[Y,[X,Y]] - 1/24[Y,[X,[X,Y]]]`,
/// truncated at `class`.
pub fn bch(l: &DgLieAlgebra, x: &Vector, y: &Vector, class: usize) -> Result<Vector, Error> {
    check_class(class)?;
    l.module().expect_degree(x, 0)?;
    l.module().expect_degree(y, 0)?;
    let ring = l.ring();
    let mut z = x + y;
    if class >= 2 {
        let xy = l.bracket(x, y);
        z.add_scaled(&inverse_factorial(ring, 2)?, &xy);
        if class >= 3 {
            let twelfth = ring.from_i64(12).inverse().ok_or_else(|| Error::NotInvertible("12".into()))?;
            let xxy = l.bracket(x, &xy);
            z.add_scaled(&twelfth, &xxy);
            z.add_scaled(&-&twelfth, &l.bracket(y, &xy));
            if class >= 4 {
                z.add_scaled(&-&inverse_factorial(ring, 4)?, &l.bracket(y, &xxy));
            }
        }
    }
    Ok(z)
}

/// `[ζ, α] - dζ`.
pub fn infinitesimal_action(l: &DgLieAlgebra, zeta: &Vector, alpha: &Vector) -> Result<Vector, Error> {
    l.module().expect_degree(zeta, 0)?;
    l.module().expect_degree(alpha, -1)?;
    Ok(&l.bracket(zeta, alpha) - &l.d(zeta))
}

/// `exp(ζ) · γ = e^{ad ζ} γ - ((e^{ad ζ} - 1)/ad ζ)(dζ)`, a finite sum when
/// `ad ζ` is nilpotent of the given class.
pub fn gauge_action(l: &DgLieAlgebra, zeta: &Vector, gamma: &Vector, class: usize) -> Result<Vector, Error> {
    check_class(class)?;
    l.module().expect_degree(zeta, 0)?;
    l.module().expect_degree(gamma, -1)?;
    let mut out = gamma.clone();
    let mut term = gamma.clone();
    for k in 1..=class {
        term = l.bracket(zeta, &term);
        if term.is_zero() {
            break;
        }
        out.add_scaled(&inverse_factorial(l.ring(), k)?, &term);
    }
    let mut term = l.d(zeta);
    for k in 0..class {
        if term.is_zero() {
            break;
        }
        out.add_scaled(&-&inverse_factorial(l.ring(), k + 1)?, &term);
        term = l.bracket(zeta, &term);
    }
    Ok(out)
}

/// An element `exp(ζ)` of the gauge group, stored by its logarithm.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaugeGroupElement {
    pub log: Vector,
}

/// `g ⊗ span(monomials start..)` over the base field, basis `x⊗t^a`.
fn tensor_lie(g: &DgLieAlgebra, t: &TruncatedRing, start: usize) -> Result<DgLieAlgebra, Error> {
    let md = t.dim() - start;
    let gm = g.module();
    let mut basis = Vec::with_capacity(gm.dim() * md);
    for i in 0..gm.dim() {
        for k in start..t.dim() {
            basis.push(BasisElement::new(format!("{}⊗{}", gm.name(i), t.format_monomial(k)), gm.degree(i)));
        }
    }
    let module = Arc::new(GradedModule::new(g.ring().clone(), basis)?);
    let n = module.dim();
    let mut data = DglData::new(module.clone());
    for p in 0..n {
        let (i, k) = (p / md, p % md + start);
        let mut img = module.zero();
        for (j, c) in g.differential().image(i).support() {
            img[j * md + k - start] = c.clone();
        }
        data.differential[p] = img;
        for q in 0..n {
            let (j, l) = (q / md, q % md + start);
            if let Some(kl) = t.monomial_product(k, l) {
                let mut img = module.zero();
                for (r, c) in g.bracket_of_basis(i, j).support() {
                    img[r * md + kl - start] = c.clone();
                }
                data.bracket[p * n + q] = img;
            }
        }
    }
    Ok(DgLieAlgebra::from_data_unchecked(&data))
}

/// A DGL `g` with Artinian coefficients, realised as `L = g ⊗ m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationProblem {
    g: DgLieAlgebra,
    coefficients: ArtinLocalRing,
    l: DgLieAlgebra,
}

impl DeformationProblem {
    pub fn new(g: &DgLieAlgebra, coefficients: &ArtinLocalRing) -> Result<Self, Error> {
        let base = coefficients.base();
        if g.ring() != &base {
            return Err(Error::Incompatible(format!(
                "DGL over {} with coefficients over {}",
                g.ring().descriptor(),
                base.descriptor()
            )));
        }
        let l = tensor_lie(g, coefficients.truncated(), 1)?;
        Ok(DeformationProblem { g: g.clone(), coefficients: coefficients.clone(), l })
    }

    pub fn g(&self) -> &DgLieAlgebra {
        &self.g
    }

    pub fn coefficients(&self) -> &ArtinLocalRing {
        &self.coefficients
    }

    /// `L = g ⊗ m`.
    pub fn lie(&self) -> &DgLieAlgebra {
        &self.l
    }

    /// `g ⊗ A` including the constant monomial, whose basis `x⊗1` comes
    /// first within each block.
    pub fn extended(&self) -> Result<DgLieAlgebra, Error> {
        tensor_lie(&self.g, self.coefficients.truncated(), 0)
    }

    /// Nilpotency class used for the group law: the socle degree.
    pub fn class(&self) -> usize {
        self.coefficients.socle_degree()
    }

    /// `Σ_a x_a ⊗ t^a` for coefficients indexed by the monomials of `m`
    /// (`coeffs[a - 1]` goes with monomial `a`).
    pub fn from_coefficients(&self, coeffs: &[Vector]) -> Result<Vector, Error> {
        let md = self.coefficients.ideal_dim();
        if coeffs.len() != md {
            return Err(Error::Incompatible(format!("expected {md} coefficients")));
        }
        let mut v = self.l.module().zero();
        for (a, x) in coeffs.iter().enumerate() {
            for (i, c) in x.support() {
                v[i * md + a] = c.clone();
            }
        }
        Ok(v)
    }

    /// Inverse of [`Self::from_coefficients`].
    pub fn coefficients_of(&self, v: &Vector) -> Vec<Vector> {
        let md = self.coefficients.ideal_dim();
        let mut out = vec![self.g.module().zero(); md];
        for (p, c) in v.support() {
            out[p % md][p / md] = c.clone();
        }
        out
    }

    pub fn bch(&self, x: &GaugeGroupElement, y: &GaugeGroupElement) -> Result<GaugeGroupElement, Error> {
        Ok(GaugeGroupElement { log: bch(&self.l, &x.log, &y.log, self.class())? })
    }

    pub fn gauge_action(&self, x: &GaugeGroupElement, gamma: &Vector) -> Result<Vector, Error> {
        gauge_action(&self.l, &x.log, gamma, self.class())
    }

    pub fn infinitesimal_action(&self, zeta: &Vector, alpha: &Vector) -> Result<Vector, Error> {
        infinitesimal_action(&self.l, zeta, alpha)
    }

    pub fn is_mc(&self, gamma: &Vector) -> Result<bool, Error> {
        Ok(self.l.mc_residual(gamma, None)?.is_zero())
    }

    /// All MC elements of `L_{-1}`, lexicographically (finite base field).
    pub fn mc_points(&self, limits: &Limits) -> Result<Vec<Vector>, Error> {
        let ring = self.l.ring();
        if !ring.is_finite() {
            return Err(Error::NotFinite);
        }
        if ring.half().is_none() {
            return Err(Error::DividedSquareRequired);
        }
        let comp = self.l.module().component(-1);
        let mut out = Vec::new();
        for g in vectors_on(ring, self.l.dim(), &comp, limits)? {
            if self.is_mc(&g)? {
                out.push(g);
            }
        }
        Ok(out)
    }

    /// All elements of `L_0`, lexicographically (finite base field).
    pub fn gauge_elements(&self, limits: &Limits) -> Result<Vec<GaugeGroupElement>, Error> {
        let comp = self.l.module().component(0);
        Ok(vectors_on(self.l.ring(), self.l.dim(), &comp, limits)?
            .into_iter()
            .map(|log| GaugeGroupElement { log })
            .collect())
    }
}

/// The MC set of `g ⊗ m` partitioned into gauge orbits, each orbit sorted
/// with its least element as representative.
pub fn def_points(problem: &DeformationProblem, limits: &Limits) -> Result<Vec<Orbit>, Error> {
    check_class(problem.class())?;
    let points = problem.mc_points(limits)?;
    let group = problem.gauge_elements(limits)?;
    limits.check_work("|Γ|·|MC|", (group.len() as u128).checked_mul(points.len() as u128))?;
    let mut seen: BTreeSet<Vector> = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in &points {
        if seen.contains(p) {
            continue;
        }
        let members: BTreeSet<Vector> = with_pool(limits.jobs, || {
            group.par_iter().map(|x| problem.gauge_action(x, p)).collect::<Result<BTreeSet<_>, _>>()
        })?;
        seen.extend(members.iter().cloned());
        let members: Vec<Vector> = members.into_iter().collect();
        orbits.push(Orbit { representative: members[0].clone(), members });
    }
    Ok(orbits)
}
