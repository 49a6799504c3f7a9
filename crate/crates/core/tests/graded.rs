mod common;

use std::sync::Arc;

use proptest::prelude::*;
use twist_core::graded::{
    koszul_sign, solve_linear, tensor_of_maps, BaseField, GradedMap, GradedModule, LinearSolution, Matrix, Ring,
    TruncatedRing, Vector,
};

/// A graded map of the given degree whose nonzero entries are read off
/// `coeffs` in order.
fn map_from(source: &Arc<GradedModule>, target: &Arc<GradedModule>, degree: i32, coeffs: &[i64]) -> GradedMap {
    let ring = source.ring().clone();
    let mut it = coeffs.iter().cycle();
    let images = (0..source.dim())
        .map(|i| {
            let mut v = target.zero();
            for j in target.component(source.degree(i) + degree) {
                v[j] = ring.from_i64(*it.next().unwrap());
            }
            v
        })
        .collect();
    GradedMap::from_images(source.clone(), target.clone(), degree, images).unwrap()
}

fn two_element_module(ring: &Ring, d: (i32, i32)) -> Arc<GradedModule> {
    common::module(ring, &[("p", d.0), ("q", d.1)])
}

proptest! {
    #[test]
    fn tensor_composition_picks_up_koszul_sign(
        dm in (-2i32..=1, -2i32..=1),
        dn in (-2i32..=1, -2i32..=1),
        deg in (-1i32..=1, -1i32..=1, -1i32..=1, -1i32..=1),
        coeffs in prop::collection::vec(-3i64..=3, 1..16),
    ) {
        let r = Ring::Prime(7);
        let (m, n) = (two_element_module(&r, dm), two_element_module(&r, dn));
        let (df, dg, df2, dg2) = deg;
        let f = map_from(&m, &m, df, &coeffs);
        let g = map_from(&n, &n, dg, &coeffs[1..].iter().chain(&coeffs).copied().collect::<Vec<_>>());
        let f2 = map_from(&m, &m, df2, &coeffs.iter().rev().copied().collect::<Vec<_>>());
        let g2 = map_from(&n, &n, dg2, &coeffs.iter().map(|c| c + 1).collect::<Vec<_>>());
        let lhs = tensor_of_maps(&f, &g).unwrap().compose(&tensor_of_maps(&f2, &g2).unwrap()).unwrap();
        let rhs = tensor_of_maps(&f.compose(&f2).unwrap(), &g.compose(&g2).unwrap()).unwrap();
        let s = r.sign(koszul_sign(dg, df2));
        for i in 0..lhs.source().dim() {
            prop_assert_eq!(lhs.image(i), rhs.image(i).scale(&s));
        }
    }

    #[test]
    fn rational_round_trips(a in (-50i64..50, 1i64..30), b in (-50i64..50, 1i64..30)) {
        let r = Ring::Rationals;
        let x = r.from_rational(a.0, a.1).unwrap();
        let y = r.from_rational(b.0, b.1).unwrap();
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) * &y.inverse().unwrap(), x);
        }
    }

    #[test]
    fn truncated_round_trips(a in prop::collection::vec(-9i64..9, 6), b in prop::collection::vec(-9i64..9, 6)) {
        let t = TruncatedRing::new(BaseField::Rationals, vec!["s".into(), "t".into()], 2).unwrap();
        let r = Ring::Truncated(t.clone());
        let build = |c: &[i64]| {
            let mut s = r.zero();
            for (i, &k) in c.iter().enumerate().take(t.dim()) {
                s = &s + &r.monomial(i, &Ring::Rationals.from_i64(k));
            }
            s
        };
        let (x, y) = (build(&a), build(&b));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        // Units are exactly the elements with a nonzero constant term.
        prop_assert_eq!(y.is_unit(), b[0] != 0);
        if let Some(inv) = y.inverse() {
            prop_assert_eq!(&(&x * &y) * &inv, x);
        }
    }

    #[test]
    fn solve_linear_is_exact(
        entries in prop::collection::vec(-2i64..=2, 12),
        rhs in prop::collection::vec(-2i64..=2, 3),
        prime in prop::sample::select(vec![0u64, 2, 3, 5]),
    ) {
        let r = if prime == 0 { Ring::Rationals } else { Ring::Prime(prime) };
        let rows = entries.chunks(4).map(|row| row.iter().map(|&c| r.from_i64(c)).collect()).collect();
        let m = Matrix::from_rows(&r, 4, rows);
        let b = Vector::from_coeffs(rhs.iter().map(|&c| r.from_i64(c)).collect());
        match solve_linear(&m, &b).unwrap() {
            LinearSolution::Solved { particular, kernel } => {
                prop_assert_eq!(m.mul_vec(&particular), b);
                prop_assert_eq!(kernel.len(), 4 - m.rank().unwrap());
                for k in kernel {
                    prop_assert!(m.mul_vec(&k).is_zero());
                }
            }
            LinearSolution::Inconsistent => {
                let mut cols: Vec<Vector> = (0..4).map(|j| m.column(j)).collect();
                cols.push(b);
                prop_assert!(Matrix::from_columns(&r, 3, &cols).rank().unwrap() > m.rank().unwrap());
            }
        }
    }
}
