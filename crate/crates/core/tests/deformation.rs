#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{el, random_of_degree};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twist_core::coalgebra::{convolution_dgl, symmetric_coalgebra};
use twist_core::deformation::{
    bch, def_points, deformation_from_twisting_cochain, gauge_action, infinitesimal_action, kuranishi_family_check,
    mc_extend, series_mc_residuals, twisting_cochain_from_deformation, ArtinLocalRing, DeformationProblem,
    KuranishiVerdict, McExtension, MultiVariableMcFamily,
};
use twist_core::dgl::{validate_dgl, DgLieAlgebra, DglData};
use twist_core::fixtures;
use twist_core::graded::{BaseField, BasisElement, Matrix, Ring, Vector};
use twist_core::{Error, Limits};

fn problem(g: &DgLieAlgebra, base: BaseField, order: u32) -> DeformationProblem {
    DeformationProblem::new(g, &ArtinLocalRing::new(base, &["t"], order).unwrap()).unwrap()
}

/// exp of the affine map `(α, s) ↦ ([ζ, α] - s dζ, 0)` on `L ⊕ k`, applied
/// to `(γ, 1)`, by summing matrix powers.
fn affine_exponential(l: &DgLieAlgebra, zeta: &Vector, gamma: &Vector) -> Vector {
    let ring = l.ring();
    let n = l.dim();
    let mut cols: Vec<Vector> =
        (0..n).map(|j| l.bracket(zeta, &l.module().basis_vector(j)).concat(&Vector::zeros(ring, 1))).collect();
    cols.push((-&l.d(zeta)).concat(&Vector::zeros(ring, 1)));
    let m = Matrix::from_columns(ring, n + 1, &cols);
    let v = gamma.concat(&Vector::from_coeffs(vec![ring.one()]));
    let mut power = Matrix::identity(ring, n + 1);
    let mut out = Vector::zeros(ring, n + 1);
    let mut k = 0i64;
    let mut fact = ring.one();
    while !power.is_zero() {
        out.add_scaled(&fact.inverse().unwrap(), &power.mul_vec(&v));
        power = m.mul(&power);
        k += 1;
        fact = &fact * &ring.from_i64(k);
    }
    Vector::from_coeffs(out.coeffs()[..n].to_vec())
}

/// Orbits as the closure of single moves, via union-find over MC points.
fn brute_force_orbits(p: &DeformationProblem) -> BTreeSet<BTreeSet<Vector>> {
    let limits = Limits::default();
    let points = p.mc_points(&limits).unwrap();
    let index: BTreeMap<Vector, usize> = points.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for z in p.gauge_elements(&limits).unwrap() {
        for (i, g) in points.iter().enumerate() {
            let image = affine_exponential(p.lie(), &z.log, g);
            let j = *index.get(&image).expect("gauge image is MC");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<Vector>> = BTreeMap::new();
    for i in 0..points.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().insert(points[i].clone());
    }
    classes.into_values().collect()
}

fn finite_cases() -> Vec<DeformationProblem> {
    let f5 = Ring::Prime(5);
    vec![
        problem(&fixtures::g3(f5.clone()), BaseField::Prime(5), 1),
        problem(&fixtures::g3(f5.clone()), BaseField::Prime(5), 2),
        problem(&fixtures::obstructed_dgl(f5.clone()), BaseField::Prime(5), 2),
        problem(&fixtures::residual_dgl(f5), BaseField::Prime(5), 2),
    ]
}

#[test]
fn def_points_match_closure_of_single_moves() {
    for p in finite_cases() {
        let orbits = def_points(&p, &Limits::default()).unwrap();
        let got: BTreeSet<BTreeSet<Vector>> = orbits.iter().map(|o| o.members.iter().cloned().collect()).collect();
        assert_eq!(got, brute_force_orbits(&p));
        for o in &orbits {
            assert_eq!(&o.representative, o.members.iter().min().unwrap());
        }
    }
}

#[test]
fn gauge_action_preserves_mc_and_matches_exponential() {
    let limits = Limits::default();
    for p in finite_cases() {
        for z in p.gauge_elements(&limits).unwrap() {
            for g in p.mc_points(&limits).unwrap() {
                let image = p.gauge_action(&z, &g).unwrap();
                assert!(p.is_mc(&image).unwrap());
                assert_eq!(image, affine_exponential(p.lie(), &z.log, &g));
            }
        }
    }
}

#[test]
fn trivial_gauge_group_gives_singleton_orbits() {
    let r = Ring::Prime(3);
    let m = common::module(&r, &[("y", -1), ("z", -2)]);
    let mut data = DglData::new(m.clone());
    data.set_bracket("y", "y", el(&m, &[("z", 1)])).unwrap();
    let g = validate_dgl(&data).unwrap();
    let p = problem(&g, BaseField::Prime(3), 2);
    let orbits = def_points(&p, &Limits::default()).unwrap();
    let points = p.mc_points(&Limits::default()).unwrap();
    assert_eq!(orbits.len(), points.len());
    // y⊗t + b y⊗t^2 needs [y,y] = 0 at t^2: only a = 0 survives.
    assert_eq!(points.len(), 3);
}

#[test]
fn dual_number_derivative() {
    for g in [
        fixtures::g3(Ring::Rationals),
        fixtures::obstructed_dgl(Ring::Rationals),
        fixtures::residual_dgl(Ring::Rationals),
    ] {
        let p = problem(&g, BaseField::Rationals, 1);
        let x = p.extended().unwrap();
        let lift = |v: &Vector, k: usize| {
            let mut w = x.module().zero();
            for (i, c) in v.support() {
                w[2 * i + k] = c.clone();
            }
            w
        };
        for i in g.module().component(0) {
            for j in g.module().component(-1) {
                let (z, a) = (g.module().basis_vector(i), g.module().basis_vector(j));
                let moved = gauge_action(&x, &lift(&z, 1), &lift(&a, 0), p.class()).unwrap();
                let want = &lift(&a, 0) + &lift(&infinitesimal_action(&g, &z, &a).unwrap(), 1);
                assert_eq!(moved, want, "{} on {}", g.module().name(i), g.module().name(j));
            }
        }
    }
}

#[test]
fn infinitesimal_action_is_a_lie_action() {
    for g in [fixtures::g3(Ring::Rationals), fixtures::residual_dgl(Ring::Rationals)] {
        let zero = g.module().component(0);
        for &i in &zero {
            for &j in &zero {
                let (z1, z2) = (g.module().basis_vector(i), g.module().basis_vector(j));
                for a in g.module().component(-1) {
                    let a = g.module().basis_vector(a);
                    let lhs = infinitesimal_action(&g, &g.bracket(&z1, &z2), &a).unwrap();
                    let rhs = &g.bracket(&z1, &infinitesimal_action(&g, &z2, &a).unwrap())
                        - &g.bracket(&z2, &infinitesimal_action(&g, &z1, &a).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn bch_is_associative_on_heisenberg() {
    let r = Ring::Rationals;
    let m = common::module(&r, &[("x", 0), ("y", 0), ("z", 0)]);
    let mut data = DglData::new(m.clone());
    data.set_bracket("x", "y", el(&m, &[("z", 1)])).unwrap();
    let h = validate_dgl(&data).unwrap();
    let values = [-1i64, 0, 1];
    let mut grid = Vec::new();
    for a in values {
        for b in values {
            for c in values {
                grid.push(el(&m, &[("x", a), ("y", b), ("z", c)]));
            }
        }
    }
    for a in &grid {
        assert_eq!(&bch(&h, a, &m.zero(), 2).unwrap(), a);
        assert!(bch(&h, a, &-a, 2).unwrap().is_zero());
        for b in &grid {
            let ab = bch(&h, a, b, 2).unwrap();
            for c in &grid {
                assert_eq!(bch(&h, &ab, c, 2).unwrap(), bch(&h, a, &bch(&h, b, c, 2).unwrap(), 2).unwrap());
            }
        }
    }
}

#[test]
fn bch_is_associative_at_classes_three_and_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for order in [3, 4] {
        let p = problem(&fixtures::g3(Ring::Rationals), BaseField::Rationals, order);
        let l = p.lie();
        for _ in 0..40 {
            let a = random_of_degree(&mut rng, l.module(), 0, 3);
            let b = random_of_degree(&mut rng, l.module(), 0, 3);
            let c = random_of_degree(&mut rng, l.module(), 0, 3);
            let lhs = bch(l, &bch(l, &a, &b, p.class()).unwrap(), &c, p.class()).unwrap();
            let rhs = bch(l, &a, &bch(l, &b, &c, p.class()).unwrap(), p.class()).unwrap();
            assert_eq!(lhs, rhs);
            // Group action: exp(a)·(exp(b)·γ) = exp(bch(a, b))·γ.
            let g = random_of_degree(&mut rng, l.module(), -1, 3);
            let two_steps = gauge_action(l, &a, &gauge_action(l, &b, &g, p.class()).unwrap(), p.class()).unwrap();
            let one_step = gauge_action(l, &bch(l, &a, &b, p.class()).unwrap(), &g, p.class()).unwrap();
            assert_eq!(two_steps, one_step);
        }
    }
}

#[test]
fn class_five_is_refused() {
    let p = problem(&fixtures::g3(Ring::Rationals), BaseField::Rationals, 5);
    let z = p.lie().module().zero();
    assert_eq!(bch(p.lie(), &z, &z, p.class()), Err(Error::ClassTooLarge(5)));
    assert_eq!(gauge_action(p.lie(), &z, &z, p.class()), Err(Error::ClassTooLarge(5)));
}

fn xi_conv(g: &DgLieAlgebra, n: u32) -> twist_core::coalgebra::ConvolutionDgl {
    let s = symmetric_coalgebra(g.ring(), &[BasisElement::new("xi", 0)], n).unwrap();
    convolution_dgl(s.coalgebra(), g).unwrap()
}

#[test]
fn twisting_cochain_mc_is_the_order_by_order_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in [fixtures::obstructed_dgl(Ring::Rationals), fixtures::residual_dgl(Ring::Rationals)] {
        for n in 1..=4u32 {
            let conv = xi_conv(&g, n);
            for _ in 0..10 {
                let gammas: Vec<Vector> = (0..n).map(|_| random_of_degree(&mut rng, g.module(), -1, 2)).collect();
                let tau = twisting_cochain_from_deformation(&conv, &gammas).unwrap();
                assert_eq!(deformation_from_twisting_cochain(&conv, &tau).unwrap(), gammas);
                let residual = conv.hom().map_of(&conv.lie().mc_residual(&tau, None).unwrap(), -2).unwrap();
                let series = series_mc_residuals(&g, &gammas).unwrap();
                assert!(residual.image(0).is_zero());
                for k in 1..=n as usize {
                    assert_eq!(residual.image(k), series[k - 1]);
                }
            }
            // Random cochains vanishing on ξ_0 round-trip the other way.
            for _ in 0..10 {
                let mut tau = random_of_degree(&mut rng, conv.hom().module(), -1, 2);
                for x in 0..g.dim() {
                    tau[conv.hom().index(0, x)] = g.ring().zero();
                }
                let gammas = deformation_from_twisting_cochain(&conv, &tau).unwrap();
                assert_eq!(twisting_cochain_from_deformation(&conv, &gammas).unwrap(), tau);
            }
        }
    }
}

#[test]
fn obstruction_report_and_unobstructed_cycle() {
    let g = fixtures::obstructed_dgl(Ring::Rationals);
    let McExtension::Obstructed(rep) = mc_extend(&g, &el(g.module(), &[("y", 2)]), 4).unwrap() else { panic!() };
    assert_eq!(rep.order, 2);
    assert_eq!(rep.cocycle, el(g.module(), &[("z", 2)]));
    let McExtension::Solved(s) = mc_extend(&g, &el(g.module(), &[("s", 1)]), 4).unwrap() else { panic!() };
    assert!(series_mc_residuals(&g, &s).unwrap().iter().all(Vector::is_zero));
}

fn one_variable(gammas: &[Vector]) -> MultiVariableMcFamily {
    let coefficients = gammas.iter().enumerate().map(|(k, v)| (vec![k as u32 + 1], v.clone())).collect();
    MultiVariableMcFamily { vars: 1, order: gammas.len() as u32, coefficients }
}

#[test]
fn kuranishi_agrees_with_mc_extend() {
    let g = fixtures::obstructed_dgl(Ring::Rationals);
    for (y, s) in [(0, 1), (1, 0), (1, 1), (0, 0)] {
        let g1 = el(g.module(), &[("y", y), ("s", s)]);
        match mc_extend(&g, &g1, 3).unwrap() {
            McExtension::Solved(sol) => {
                assert_eq!(kuranishi_family_check(&g, &one_variable(&sol)).unwrap(), KuranishiVerdict::Valid)
            }
            McExtension::Obstructed(rep) => {
                let mut partial = rep.partial.clone();
                partial.resize(3, g.module().zero());
                let KuranishiVerdict::Invalid { multi_index, .. } =
                    kuranishi_family_check(&g, &one_variable(&partial)).unwrap()
                else {
                    panic!()
                };
                assert_eq!(multi_index, vec![rep.order as u32]);
            }
        }
    }
}

#[test]
fn kuranishi_agrees_with_two_generator_coalgebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = fixtures::obstructed_dgl(Ring::Rationals);
    let s = symmetric_coalgebra(g.ring(), &[BasisElement::new("u", 0), BasisElement::new("v", 0)], 2).unwrap();
    let conv = convolution_dgl(s.coalgebra(), &g).unwrap();
    let mut families = vec![];
    for _ in 0..30 {
        let mut coefficients = BTreeMap::new();
        for alpha in [vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]] {
            // Mostly s-directions so some draws are valid.
            let mut v = random_of_degree(&mut rng, g.module(), -1, 1);
            if alpha.iter().sum::<u32>() == 1 && rng.gen_bool(0.5) {
                v[g.module().lookup("y").unwrap()] = g.ring().zero();
            }
            coefficients.insert(alpha, v);
        }
        families.push(MultiVariableMcFamily { vars: 2, order: 2, coefficients });
    }
    let mut seen = BTreeSet::new();
    for fam in &families {
        let mut tau = conv.hom().module().zero();
        for (alpha, v) in &fam.coefficients {
            let c = s.index_of(alpha).unwrap();
            for (x, a) in v.support() {
                tau[conv.hom().index(c, x)] = a.clone();
            }
        }
        let mc = conv.lie().mc_residual(&tau, None).unwrap().is_zero();
        let valid = kuranishi_family_check(&g, fam).unwrap() == KuranishiVerdict::Valid;
        assert_eq!(mc, valid);
        seen.insert(valid);
    }
    assert_eq!(seen.len(), 2, "both verdicts occur");
}
