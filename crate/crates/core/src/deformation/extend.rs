use std::collections::BTreeMap;

use crate::coalgebra::ConvolutionDgl;
use crate::dgl::DgLieAlgebra;
use crate::graded::{ChainComplex, ComplexSplitting, Scalar, Vector};
use crate::Error;

/// First order at which a formal MC solution cannot be continued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub order: usize,
    /// `½ Σ_{i+j=k} [γ_i, γ_j]`, a closed element of degree -2; `dγ_k` must
    /// equal its negative.
    pub cocycle: Vector,
    /// Coordinates of its class in the harmonic basis of `H_{-2}(g)`.
    pub class: Vec<Scalar>,
    /// The harmonic representatives those coordinates refer to.
    pub classes: Vec<Vector>,
    /// `γ_1, …, γ_{k-1}`.
    pub partial: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McExtension {
    /// `γ_1, …, γ_N` with `Σ γ_k t^k` MC modulo `t^{N+1}`.
    Solved(Vec<Vector>),
    Obstructed(ObstructionReport),
}

/// `dγ_k + ½ Σ_{i+j=k} [γ_i, γ_j]` for `k = 1..=len`.
pub fn series_mc_residuals(g: &DgLieAlgebra, gammas: &[Vector]) -> Result<Vec<Vector>, Error> {
    let half = g.ring().half().ok_or(Error::DividedSquareRequired)?;
    Ok((1..=gammas.len())
        .map(|k| {
            let mut r = g.d(&gammas[k - 1]);
            for i in 1..k {
                r.add_scaled(&half, &g.bracket(&gammas[i - 1], &gammas[k - i - 1]));
            }
            r
        })
        .collect())
}

/// Solves `dγ_k = -½ Σ_{i+j=k} [γ_i, γ_j]` for `k = 2..=n`, lifting through
/// a fixed splitting of `g`, or reports the first order whose right side is
/// not a boundary.
pub fn mc_extend(g: &DgLieAlgebra, gamma1: &Vector, n: usize) -> Result<McExtension, Error> {
    g.module().expect_degree(gamma1, -1)?;
    if !g.d(gamma1).is_zero() {
        return Err(Error::Incompatible("γ₁ is not a cycle".into()));
    }
    let half = g.ring().half().ok_or(Error::DividedSquareRequired)?;
    let splitting = ComplexSplitting::new(ChainComplex::new(g.differential().clone())?, &[])?;
    let h2: Vec<usize> = (0..splitting.harmonic().len()).filter(|&j| splitting.harmonic_degrees()[j] == -2).collect();
    let mut gammas = vec![gamma1.clone()];
    for k in 2..=n {
        let mut cocycle = g.module().zero();
        for i in 1..k {
            cocycle.add_scaled(&half, &g.bracket(&gammas[i - 1], &gammas[k - i - 1]));
        }
        if !g.d(&cocycle).is_zero() {
            return Err(Error::Internal(format!("order {k} obstruction is not closed")));
        }
        let coords = splitting.harmonic_coordinates(&cocycle);
        if h2.iter().any(|&j| !coords[j].is_zero()) {
            return Ok(McExtension::Obstructed(ObstructionReport {
                order: k,
                cocycle,
                class: h2.iter().map(|&j| coords[j].clone()).collect(),
                classes: h2.iter().map(|&j| splitting.harmonic()[j].clone()).collect(),
                partial: gammas,
            }));
        }
        let target = -&cocycle;
        let gk = splitting
            .lift_boundary(&target)
            .ok_or_else(|| Error::Internal(format!("order {k} right side has zero class but no lift")))?;
        gammas.push(gk);
    }
    Ok(McExtension::Solved(gammas))
}

/// Level of each basis element of the coalgebra of a one-cogenerator
/// symmetric coalgebra, as the index list `[ξ_0, ξ_1, …, ξ_N]`.
fn symmetric_levels(conv: &ConvolutionDgl) -> Result<Vec<usize>, Error> {
    let c = conv.hom().coalgebra();
    let levels = c.coaugmentation_filtration()?;
    let top = levels.iter().copied().max().unwrap_or(0);
    let mut order = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let at: Vec<usize> = (0..levels.len()).filter(|&i| levels[i] == k).collect();
        if at.len() != 1 || c.module().degree(at[0]) != 0 {
            return Err(Error::Incompatible("coalgebra is not a one-cogenerator symmetric coalgebra".into()));
        }
        order.push(at[0]);
    }
    if *c.coaugmentation() != c.module().basis_vector(order[0]) {
        return Err(Error::Incompatible("coaugmentation is not ξ_0".into()));
    }
    Ok(order)
}

/// `(τ(ξ_1), …, τ(ξ_N))` for a degree -1 cochain `τ` (as an element of the
/// convolution DGL) vanishing on `ξ_0`.
pub fn deformation_from_twisting_cochain(conv: &ConvolutionDgl, tau: &Vector) -> Result<Vec<Vector>, Error> {
    let hom = conv.hom();
    hom.module().expect_degree(tau, -1)?;
    let xi = symmetric_levels(conv)?;
    let f = hom.map_of(tau, -1)?;
    if !f.image(xi[0]).is_zero() {
        return Err(Error::Incompatible("τ(ξ_0) must vanish".into()));
    }
    Ok(xi[1..].iter().map(|&i| f.image(i)).collect())
}

/// Inverse of [`deformation_from_twisting_cochain`].
pub fn twisting_cochain_from_deformation(conv: &ConvolutionDgl, gammas: &[Vector]) -> Result<Vector, Error> {
    let hom = conv.hom();
    let xi = symmetric_levels(conv)?;
    if gammas.len() + 1 != xi.len() {
        return Err(Error::Incompatible(format!("expected {} coefficients", xi.len() - 1)));
    }
    let mut v = hom.module().zero();
    for (gk, &c) in gammas.iter().zip(&xi[1..]) {
        conv.coefficients().module().expect_degree(gk, -1)?;
        for (x, a) in gk.support() {
            v[hom.index(c, x)] = a.clone();
        }
    }
    Ok(v)
}

/// `ρ = Σ_α ρ_α t^α`, a truncated power series in several degree-zero
/// variables with coefficients in `L_{-1}`. Missing multi-indices are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVariableMcFamily {
    pub vars: usize,
    pub order: u32,
    pub coefficients: BTreeMap<Vec<u32>, Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KuranishiVerdict {
    Valid,
    /// First failing multi-index in order of total degree.
    Invalid {
        multi_index: Vec<u32>,
        residual: Vector,
    },
}

fn multi_indices(vars: usize, order: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..vars {
        all = all.into_iter().flat_map(|p| (0..=order).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    all.retain(|a| a.iter().sum::<u32>() <= order);
    all.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then(b.cmp(a)));
    all
}

/// Checks `dρ_α + ½ Σ_{β+γ=α} [ρ_β, ρ_γ] = 0` for every `0 < |α| ≤ N`,
/// i.e. that `ρ` read on the symmetric coalgebra of the variables is MC.
pub fn kuranishi_family_check(l: &DgLieAlgebra, family: &MultiVariableMcFamily) -> Result<KuranishiVerdict, Error> {
    let half = l.ring().half().ok_or(Error::DividedSquareRequired)?;
    for (alpha, v) in &family.coefficients {
        if alpha.len() != family.vars || alpha.iter().sum::<u32>() > family.order {
            return Err(Error::Incompatible(format!("multi-index {alpha:?} out of range")));
        }
        l.module().expect_degree(v, -1)?;
        if alpha.iter().all(|&a| a == 0) && !v.is_zero() {
            return Err(Error::Incompatible("ρ(0) must vanish".into()));
        }
    }
    let zero = l.module().zero();
    let rho = |a: &[u32]| family.coefficients.get(a).unwrap_or(&zero);
    for alpha in multi_indices(family.vars, family.order).into_iter().skip(1) {
        let mut r = l.d(rho(&alpha));
        for beta in multi_indices(family.vars, family.order) {
            if beta.iter().zip(&alpha).any(|(b, a)| b > a) || beta == alpha || beta.iter().all(|&b| b == 0) {
                continue;
            }
            let gamma: Vec<u32> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
            r.add_scaled(&half, &l.bracket(rho(&beta), rho(&gamma)));
        }
        if !r.is_zero() {
            return Ok(KuranishiVerdict::Invalid { multi_index: alpha, residual: r });
        }
    }
    Ok(KuranishiVerdict::Valid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{convolution_dgl, symmetric_coalgebra};
    use crate::dgl::commutator_dgl;
    use crate::fixtures;
    use crate::graded::{BasisElement, Ring};

    #[test]
    fn abelian_cycles_extend_trivially() {
        let r = Ring::Rationals;
        let m = fixtures::module(&r, &[("p", -1), ("q", -2)]);
        let g = crate::dgl::validate_dgl(&crate::dgl::DglData::new(m.clone())).unwrap();
        match mc_extend(&g, &fixtures::element(&m, &[("p", 3)]), 4).unwrap() {
            McExtension::Solved(s) => {
                assert_eq!(s.len(), 4);
                assert!(s[1..].iter().all(Vector::is_zero));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn obstructed_at_order_two() {
        let g = fixtures::obstructed_dgl(Ring::Rationals);
        let y = fixtures::element(g.module(), &[("y", 1)]);
        let McExtension::Obstructed(rep) = mc_extend(&g, &y, 3).unwrap() else { panic!() };
        assert_eq!(rep.order, 2);
        let half = g.ring().half().unwrap();
        assert_eq!(rep.cocycle, fixtures::element(g.module(), &[("z", 1)]).scale(&half));
        assert!(g.d(&rep.cocycle).is_zero());
        assert_eq!(rep.class.len(), 1);
        assert!(!rep.class[0].is_zero());
        assert_eq!(rep.partial, vec![y]);
    }

    #[test]
    fn non_cycle_is_refused() {
        let g = fixtures::residual_dgl(Ring::Rationals);
        let f = fixtures::element(g.module(), &[("f", 1)]);
        assert!(matches!(mc_extend(&g, &f, 2), Err(Error::Incompatible(_))));
    }

    #[test]
    fn commutator_extension_satisfies_mc() {
        // y·y = z with z = Dw: [y,y] = 2z is a boundary, so y extends.
        let r = Ring::Rationals;
        let m = fixtures::module(&r, &[("1", 0), ("y", -1), ("w", -1), ("z", -2)]);
        let mut data = crate::dga::DgaData::with_unit_basis(m.clone(), "1").unwrap();
        data.set_product("y", "y", fixtures::element(&m, &[("z", 1)])).unwrap();
        data.set_differential("w", fixtures::element(&m, &[("z", 1)])).unwrap();
        let g = commutator_dgl(&crate::dga::validate_dga(&data).unwrap());
        let y = fixtures::element(g.module(), &[("y", 1)]);
        let McExtension::Solved(s) = mc_extend(&g, &y, 4).unwrap() else { panic!("unexpected obstruction") };
        assert_eq!(s[1], fixtures::element(g.module(), &[("w", -1)]));
        assert!(series_mc_residuals(&g, &s).unwrap().iter().all(Vector::is_zero));
    }

    fn xi_dgl(g: &DgLieAlgebra, n: u32) -> ConvolutionDgl {
        let s = symmetric_coalgebra(g.ring(), &[BasisElement::new("xi", 0)], n).unwrap();
        convolution_dgl(s.coalgebra(), g).unwrap()
    }

    #[test]
    fn twisting_cochain_round_trip() {
        let g = fixtures::g3(Ring::Rationals);
        let conv = xi_dgl(&g, 3);
        let gammas = vec![
            fixtures::element(g.module(), &[("f", 1)]),
            fixtures::element(g.module(), &[("f", -2)]),
            g.module().zero(),
        ];
        let tau = twisting_cochain_from_deformation(&conv, &gammas).unwrap();
        assert_eq!(deformation_from_twisting_cochain(&conv, &tau).unwrap(), gammas);
        let zero = conv.hom().module().zero();
        assert!(deformation_from_twisting_cochain(&conv, &zero).unwrap().iter().all(Vector::is_zero));
    }

    #[test]
    fn kuranishi_zero_and_obstructed() {
        let g = fixtures::obstructed_dgl(Ring::Rationals);
        let fam = MultiVariableMcFamily { vars: 2, order: 2, coefficients: BTreeMap::new() };
        assert_eq!(kuranishi_family_check(&g, &fam).unwrap(), KuranishiVerdict::Valid);
        let y = fixtures::element(g.module(), &[("y", 1)]);
        let mut coefficients = BTreeMap::new();
        coefficients.insert(vec![1, 0], y.clone());
        coefficients.insert(vec![0, 1], y);
        let fam = MultiVariableMcFamily { vars: 2, order: 2, coefficients };
        let KuranishiVerdict::Invalid { multi_index, .. } = kuranishi_family_check(&g, &fam).unwrap() else { panic!() };
        assert_eq!(multi_index.iter().sum::<u32>(), 2);
        let mut bad = fam.clone();
        bad.coefficients.insert(vec![0, 0], fixtures::element(g.module(), &[("y", 1)]));
        assert!(kuranishi_family_check(&g, &bad).is_err());
    }
}
