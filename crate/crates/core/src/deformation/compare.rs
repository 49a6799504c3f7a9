use rayon::prelude::*;

use super::{check_class, gauge_action};
use crate::coalgebra::{convolution_algebra, DgCoalgebra};
use crate::dga::{DgAlgebra, Equivalence};
use crate::dgl::{commutator_dgl, mc_sign_adapter};
use crate::enumerate::{integer_tuples, vectors_on, with_pool};
use crate::graded::{GradedMap, Vector};
use crate::{Error, Limits};

/// The two verdicts on a pair of twisting cochains `C → A`. Witnesses are
/// elements of `Hom(C, A)`: a unit for `unit_group`, the logarithm `ζ` of a
/// gauge transformation vanishing on `η(1)` for `deligne`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompareReport {
    pub unit_group: Equivalence<Vector>,
    pub deligne: Equivalence<Vector>,
}

/// Decides equivalence of `τ₁, τ₂` under the units of the convolution
/// algebra and, separately, under the nilpotent group `exp(L^C_0)` acting on
/// the MC elements `-τ₁, -τ₂` of its commutator DGL.
///
/// `L^C` is the ideal of maps killing `η(1)`; its class is the coradical
/// length of `C`, which must be at most 4.
pub fn compare_equivalences(
    c: &DgCoalgebra,
    a: &DgAlgebra,
    tau1: &GradedMap,
    tau2: &GradedMap,
    limits: &Limits,
) -> Result<CompareReport, Error> {
    let conv = convolution_algebra(c, a)?;
    let hom = conv.hom();
    let alg = conv.algebra();
    let t1 = alg.twisting_element(&hom.element_of(tau1)?)?;
    let t2 = alg.twisting_element(&hom.element_of(tau2)?)?;
    let unit_group = match alg.are_gauge_equivalent(&t1, &t2, limits)? {
        Equivalence::Equivalent(u) => Equivalence::Equivalent(u.element().clone()),
        Equivalence::Inequivalent => Equivalence::Inequivalent,
        Equivalence::Undecided { bound } => Equivalence::Undecided { bound },
    };

    let class = c.coaugmentation_filtration()?.into_iter().max().unwrap_or(0);
    check_class(class)?;
    let unit = (0..c.dim())
        .find(|&i| *c.coaugmentation() == c.module().basis_vector(i))
        .ok_or_else(|| Error::Incompatible("η(1) must be a basis element".into()))?;
    let l = commutator_dgl(alg);
    let (g1, g2) = (mc_sign_adapter(t1.element()), mc_sign_adapter(t2.element()));
    let positions: Vec<usize> =
        hom.module().component(0).into_iter().filter(|&p| p / hom.target().dim() != unit).collect();
    let moves_to = |zeta: &Vector| -> Result<bool, Error> { Ok(gauge_action(&l, zeta, &g1, class)? == g2) };
    let ring = l.ring();
    let deligne = if g1 == g2 {
        Equivalence::Equivalent(l.module().zero())
    } else if ring.is_finite() {
        let candidates = vectors_on(ring, l.dim(), &positions, limits)?;
        let hit = with_pool(limits.jobs, || {
            candidates
                .par_iter()
                .map(|z| moves_to(z).map(|ok| ok.then(|| z.clone())))
                .find_map_first(|r| r.transpose())
                .transpose()
        })?;
        hit.map_or(Equivalence::Inequivalent, Equivalence::Equivalent)
    } else {
        let mut found = None;
        for t in integer_tuples(positions.len(), limits.search_bound) {
            let mut z = l.module().zero();
            for (&p, &x) in positions.iter().zip(&t) {
                z[p] = ring.from_i64(x);
            }
            if moves_to(&z)? {
                found = Some(z);
                break;
            }
        }
        found.map_or(Equivalence::Undecided { bound: limits.search_bound }, Equivalence::Equivalent)
    };
    Ok(CompareReport { unit_group, deligne })
}
