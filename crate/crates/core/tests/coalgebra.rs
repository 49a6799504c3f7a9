mod common;

use std::collections::BTreeMap;

use twist_core::coalgebra::{
    coderivation_from_corestrictions, convolution_algebra, convolution_dgl, symmetric_coalgebra, tensor_coalgebra,
    twisted_tensor_operator, DgCoalgebra, DgModule,
};
use twist_core::fixtures;
use twist_core::graded::{BaseField, BasisElement, Ring, Scalar, TruncatedRing};

type Triple = BTreeMap<(usize, usize, usize), Scalar>;

fn add(t: &mut Triple, k: (usize, usize, usize), c: Scalar) {
    let e = t.entry(k).or_insert_with(|| c.ring().zero());
    *e = &*e + &c;
    if e.is_zero() {
        t.remove(&k);
    }
}

/// `(Δ⊗1)Δ` and `(1⊗Δ)Δ` on one basis element, by brute-force expansion.
fn both_sides(c: &DgCoalgebra, i: usize) -> (Triple, Triple) {
    let (mut l, mut r) = (Triple::new(), Triple::new());
    for (a, b, x) in c.coproduct_of_basis(i) {
        for (a1, a2, y) in c.coproduct_of_basis(*a) {
            add(&mut l, (*a1, *a2, *b), x * y);
        }
        for (b1, b2, y) in c.coproduct_of_basis(*b) {
            add(&mut r, (*a, *b1, *b2), x * y);
        }
    }
    (l, r)
}

#[test]
fn tensor_coalgebra_is_coassociative_and_counital_to_length_4() {
    let r = Ring::Prime(3);
    let v = common::module(&r, &[("v", 0), ("w", -1)]);
    let t = tensor_coalgebra(v, 4).unwrap();
    let c = t.coalgebra();
    assert_eq!(c.dim(), 31);
    for i in 0..c.dim() {
        let (l, rr) = both_sides(c, i);
        assert_eq!(l, rr, "word {}", c.module().name(i));
        let mut left = c.module().zero();
        let mut right = c.module().zero();
        for (a, b, x) in c.coproduct_of_basis(i) {
            left[*b] = &left[*b] + &(x * c.counit_of_basis(*a));
            right[*a] = &right[*a] + &(x * c.counit_of_basis(*b));
        }
        assert_eq!(left, c.module().basis_vector(i));
        assert_eq!(right, c.module().basis_vector(i));
        assert_eq!(c.coproduct_of_basis(i).len(), t.words()[i].len() + 1);
    }
    assert!(!c.is_cocommutative());
}

#[test]
fn two_generator_symmetric_coalgebra_is_coassociative_at_level_3() {
    let r = Ring::Rationals;
    let s = symmetric_coalgebra(&r, &[BasisElement::new("x", 0), BasisElement::new("y", 0)], 3).unwrap();
    let c = s.coalgebra();
    for i in 0..c.dim() {
        let (l, rr) = both_sides(c, i);
        assert_eq!(l, rr);
    }
    assert!(c.is_cocommutative());
}

#[test]
fn hom_into_ground_ring_is_truncated_polynomials() {
    for n in 1..=8u32 {
        let r = Ring::Rationals;
        let s = symmetric_coalgebra(&r, &[BasisElement::new("xi", 0)], n).unwrap();
        let conv = convolution_algebra(s.coalgebra(), &fixtures::ground(r.clone())).unwrap();
        let alg = conv.algebra();
        let t = Ring::Truncated(TruncatedRing::univariate(BaseField::Rationals, "t", n).unwrap());
        let poly = |v: &twist_core::Vector| {
            let mut p = t.zero();
            for k in 0..=n as usize {
                let c = &v[conv.hom().index(s.index_of(&[k as u32]).unwrap(), 0)];
                p = &p + &t.monomial(k, c);
            }
            p
        };
        assert_eq!(alg.dim(), n as usize + 1);
        let images: Vec<Scalar> = (0..alg.dim()).map(|i| poly(&alg.module().basis_vector(i))).collect();
        for i in 0..alg.dim() {
            for j in 0..i {
                assert_ne!(images[i], images[j]);
            }
        }
        assert_eq!(poly(alg.unit()), t.one());
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let prod = alg.mul(&alg.module().basis_vector(i), &alg.module().basis_vector(j));
                assert_eq!(poly(&prod), &images[i] * &images[j]);
            }
        }
    }
}

#[test]
fn convolution_is_commutative_exactly_when_the_target_is() {
    let r = Ring::Prime(3);
    let s = symmetric_coalgebra(&r, &[BasisElement::new("xi", 0)], 2).unwrap();
    for (a, commutative) in [
        (fixtures::e1(r.clone()), true),
        (fixtures::torus_cohomology(r.clone()), true),
        (fixtures::square_extension(r.clone()), false),
        (fixtures::path_algebra(r.clone()), false),
        (fixtures::two_by_two(r.clone()), false),
    ] {
        assert_eq!(a.is_graded_commutative(), commutative);
        let conv = convolution_algebra(s.coalgebra(), &a).unwrap();
        assert_eq!(conv.algebra().is_graded_commutative(), commutative);
    }
}

#[test]
fn twisted_tensor_square_vanishes_exactly_for_twisting_cochains() {
    let mut verdicts = [0usize; 2];
    for r in [Ring::Prime(2), Ring::Prime(3)] {
        let s = symmetric_coalgebra(&r, &[BasisElement::new("xi", 0)], 2).unwrap();
        for a in [fixtures::e1(r.clone()), fixtures::square_extension(r.clone()), fixtures::two_by_two(r.clone())] {
            let conv = convolution_algebra(s.coalgebra(), &a).unwrap();
            let hom = conv.hom();
            let m = DgModule::regular(&a);
            for v in common::all_on(hom.module(), &hom.module().component(-1)) {
                let tau = hom.map_of(&v, -1).unwrap();
                let d = twisted_tensor_operator(s.coalgebra(), &tau, &m).unwrap();
                let square_zero = d.compose(&d).unwrap().is_zero();
                let twisting = conv.algebra().twisting_residual(&v).is_zero();
                assert_eq!(square_zero, twisting);
                verdicts[usize::from(twisting)] += 1;
            }
        }
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0);
}

#[test]
fn filtration_is_multiplicative() {
    let r = Ring::Prime(5);
    let s = symmetric_coalgebra(&r, &[BasisElement::new("x", 0), BasisElement::new("y", -1)], 3).unwrap();
    let c = s.coalgebra();
    let level = c.coaugmentation_filtration().unwrap();
    let conv = convolution_algebra(c, &fixtures::two_by_two(r.clone())).unwrap();
    let lie = convolution_dgl(c, &fixtures::g3(r.clone())).unwrap();
    let check = |dim_target: usize, op: &dyn Fn(usize, usize) -> twist_core::Vector| {
        for i in 0..c.dim() * dim_target {
            for j in 0..c.dim() * dim_target {
                let (li, lj) = (level[i / dim_target], level[j / dim_target]);
                for (k, _) in op(i, j).support() {
                    assert!(level[k / dim_target] >= li + lj);
                }
            }
        }
    };
    let alg = conv.algebra();
    check(4, &|i, j| alg.mul(&alg.module().basis_vector(i), &alg.module().basis_vector(j)));
    let l = lie.lie();
    check(3, &|i, j| l.bracket_of_basis(i, j));
    assert_eq!(level[s.index_of(&[2, 1]).unwrap()], 3);
}

/// `V*` spanned by `sp, sq` in degree 1 and `δ₂(sa|sb) = s(ab)` for a
/// product on a 2-dimensional space. Then `δ²(sa|sb|sc) = s((ab)c - a(bc))`.
#[test]
fn dual_product_squares_to_zero_iff_associative() {
    let r = Ring::Prime(3);
    let v = common::module(&r, &[("sp", 1), ("sq", 1)]);
    let t = tensor_coalgebra(v.clone(), 4).unwrap();
    let elems = r.elements().unwrap();
    let mut verdicts = [0usize; 2];
    for code in 0..3usize.pow(8) {
        let c: Vec<Scalar> = (0..8).map(|k| elems[code / 3usize.pow(k) % 3].clone()).collect();
        // Structure constants: e_i e_j = c[4i+2j] e_0 + c[4i+2j+1] e_1.
        let mul = |x: &[Scalar; 2], y: &[Scalar; 2]| -> [Scalar; 2] {
            let mut out = [r.zero(), r.zero()];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        out[k] = &out[k] + &(&(&x[i] * &y[j]) * &c[4 * i + 2 * j + k]);
                    }
                }
            }
            out
        };
        let basis = [[r.one(), r.zero()], [r.zero(), r.one()]];
        let associative = (0..8).all(|n| {
            let (a, b, cc) = (&basis[n >> 2 & 1], &basis[n >> 1 & 1], &basis[n & 1]);
            mul(&mul(a, b), cc) == mul(a, &mul(b, cc))
        });
        let components: Vec<_> = t
            .words()
            .iter()
            .map(|w| {
                let mut out = v.zero();
                if w.len() == 2 {
                    out[0] = c[4 * w[0] + 2 * w[1]].clone();
                    out[1] = c[4 * w[0] + 2 * w[1] + 1].clone();
                }
                out
            })
            .collect();
        let delta = coderivation_from_corestrictions(&t, &components).unwrap();
        assert!(t.coalgebra().is_coderivation(&delta));
        assert_eq!(delta.compose(&delta).unwrap().is_zero(), associative, "structure {code}");
        verdicts[usize::from(associative)] += 1;
    }
    assert!(verdicts[0] > 0 && verdicts[1] > 0, "{verdicts:?}");
}
