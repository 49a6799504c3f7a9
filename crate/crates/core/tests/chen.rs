#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use twist_core::chen::{
    bar_model_homology, build_formal_connection, splitting_from_dga, verify_formal_connection, FormalConnection,
};
use twist_core::dga::DgAlgebra;
use twist_core::fixtures;
use twist_core::graded::{koszul_sign, GradedMap, Ring, Scalar, Vector};

/// Rank by plain row reduction on a dense copy.
fn rank(cols: &[Vector], rows: usize) -> usize {
    let mut m: Vec<Vec<Scalar>> = (0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inverse().unwrap();
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] * &inv;
                for c in col..cols.len() {
                    let sub = &f * &m[rank][c];
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology ranks per degree from the blocks of `d`.
fn oracle_homology(d: &GradedMap) -> BTreeMap<i32, usize> {
    let m = d.source();
    let block_rank = |k: i32| {
        let cols: Vec<Vector> = m.component(k).iter().map(|&i| d.image(i)).collect();
        rank(&cols, m.dim())
    };
    let mut out = BTreeMap::new();
    for k in m.degrees() {
        let dim = m.component(k).len();
        let h = dim - block_rank(k) - block_rank(k + 1);
        if h > 0 {
            out.insert(k, h);
        }
    }
    out
}

/// Residual of the twisting identity on one word, by explicit expansion of
/// the coderivation and of the deconcatenation coproduct.
fn residual(a: &DgAlgebra, fc: &FormalConnection, w: &[usize]) -> Vector {
    let t = fc.tensor();
    let ring = a.ring();
    let idx = |v: &[usize]| t.word_index(v).unwrap();
    let mut r = a.d(fc.omega(idx(w)));
    for start in 0..w.len() {
        for end in start + 1..=w.len() {
            let sign = ring.sign(koszul_sign(-1, t.word_degree(&w[..start])));
            for (g, c) in fc.corestriction(idx(&w[start..end])).support() {
                let mut word = w[..start].to_vec();
                word.push(g);
                word.extend_from_slice(&w[end..]);
                r.add_scaled(&(&sign * c), fc.omega(idx(&word)));
            }
        }
    }
    for i in 1..w.len() {
        let sign = ring.sign(koszul_sign(1, t.word_degree(&w[..i])));
        r.add_scaled(&-&sign, &a.mul(fc.omega(idx(&w[..i])), fc.omega(idx(&w[i..]))));
    }
    r
}

#[test]
fn heisenberg_cohomology_has_ranks_1_2_2_1() {
    let a = fixtures::heisenberg(Ring::Rationals);
    let h = oracle_homology(a.differential());
    assert_eq!(h, BTreeMap::from([(0, 1), (-1, 2), (-2, 2), (-3, 1)]));
    let s = splitting_from_dga(&a).unwrap();
    assert_eq!(s.splitting().harmonic().len(), 6);
}

#[test]
fn splitting_identities() {
    for a in [
        fixtures::heisenberg(Ring::Rationals),
        fixtures::e1(Ring::Rationals),
        fixtures::path_algebra(Ring::Prime(5)),
        fixtures::torus_cohomology(Ring::Prime(3)),
    ] {
        let sp = splitting_from_dga(&a).unwrap();
        let sp = sp.splitting();
        let (d, h) = (a.differential(), sp.homotopy());
        let id = GradedMap::identity(a.module().clone());
        let sum = sp.project_h().add(sp.project_b()).unwrap().add(sp.project_w()).unwrap();
        assert_eq!(sum, id);
        let dh_hd = d.compose(h).unwrap().add(&h.compose(d).unwrap()).unwrap().add(sp.project_h()).unwrap();
        assert_eq!(dh_hd, id);
        assert!(h.compose(h).unwrap().is_zero());
        assert!(h.compose(sp.project_h()).unwrap().is_zero());
        assert!(sp.project_h().compose(h).unwrap().is_zero());
    }
}

#[test]
fn heisenberg_residuals_vanish_on_every_word_to_length_4() {
    let a = fixtures::heisenberg(Ring::Rationals);
    let fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 4).unwrap();
    assert_eq!(fc.generators().dim(), 5);
    assert_eq!(fc.tensor().words().len(), 781);
    for w in fc.tensor().words() {
        assert!(residual(&a, &fc, w).is_zero(), "word {w:?}");
    }
    let report = verify_formal_connection(&a, &fc).unwrap();
    assert!(report.ok(), "{report:?}");
    assert_eq!(report.residuals.iter().map(|r| r.words).sum::<usize>(), 781);
    // |sx| = 0, so dω₂(sx|sy) = ω₁(sx)ω₁(sy) = xy, a boundary.
    let (sx, sy) = (fc.generators().lookup("sx").unwrap(), fc.generators().lookup("sy").unwrap());
    let xy = fc.tensor().word_index(&[sx, sy]).unwrap();
    assert_eq!(a.d(fc.omega(xy)), common::el(a.module(), &[("xy", 1)]));
}

#[test]
fn heisenberg_over_f5() {
    let a = fixtures::heisenberg(Ring::Prime(5));
    let fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 3).unwrap();
    for w in fc.tensor().words() {
        assert!(residual(&a, &fc, w).is_zero());
    }
    assert!(verify_formal_connection(&a, &fc).unwrap().ok());
}

#[test]
fn construction_is_deterministic() {
    let a = fixtures::heisenberg(Ring::Rationals);
    let s = splitting_from_dga(&a).unwrap();
    assert_eq!(build_formal_connection(&s, 3).unwrap(), build_formal_connection(&s, 3).unwrap());
}

#[test]
fn perturbed_omega_is_flagged() {
    let a = fixtures::heisenberg(Ring::Rationals);
    let mut fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 3).unwrap();
    let (sx, sy) = (fc.generators().lookup("sx").unwrap(), fc.generators().lookup("sy").unwrap());
    let xy = fc.tensor().word_index(&[sx, sy]).unwrap();
    let z = common::el(a.module(), &[("z", 1)]);
    let bumped = fc.omega(xy) + &z;
    fc.set_omega(xy, bumped);
    let report = verify_formal_connection(&a, &fc).unwrap();
    assert!(!report.ok());
    let len2 = report.residuals.iter().find(|r| r.length == 2).unwrap();
    assert_eq!(len2.violations, 1);
    assert!(len2.first_violation.as_deref().unwrap().starts_with(fc.word_name(xy)));
    assert!(report.coderivation && report.square_zero);
}

#[test]
fn zeroed_corestriction_is_flagged() {
    let a = fixtures::torus_cohomology(Ring::Rationals);
    let mut fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 3).unwrap();
    let v = fc.generators().clone();
    let ab = fc.tensor().word_index(&[v.lookup("sa").unwrap(), v.lookup("sb").unwrap()]).unwrap();
    fc.set_corestriction(ab, v.zero());
    let report = verify_formal_connection(&a, &fc).unwrap();
    assert!(!report.ok());
    assert!(report.residuals.iter().find(|r| r.length == 2).unwrap().violations > 0);
}

#[test]
fn normalization_is_checked() {
    let a = fixtures::heisenberg(Ring::Rationals);
    let mut fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 2).unwrap();
    let sx = fc.generators().lookup("sx").unwrap();
    let w = fc.tensor().word_index(&[sx]).unwrap();
    fc.set_omega(w, common::el(a.module(), &[("x", 2)]));
    let report = verify_formal_connection(&a, &fc).unwrap();
    assert_eq!(report.normalization, vec![fc.word_name(w).to_string()]);
}

#[test]
fn bar_model_homology_matches_oracle() {
    for (a, n) in [
        (fixtures::heisenberg(Ring::Rationals), 3),
        (fixtures::torus_cohomology(Ring::Rationals), 4),
        (fixtures::sphere_cohomology(Ring::Rationals, 3), 4),
    ] {
        let fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), n).unwrap();
        assert_eq!(bar_model_homology(&fc).unwrap(), oracle_homology(&fc.delta().unwrap()));
    }
}

#[test]
fn odd_sphere_bar_model_is_one_class_per_length() {
    // u in degree -3: generators of degree -2, no products, so δ = 0.
    let a = fixtures::sphere_cohomology(Ring::Rationals, 3);
    let fc = build_formal_connection(&splitting_from_dga(&a).unwrap(), 4).unwrap();
    let h = bar_model_homology(&fc).unwrap();
    assert_eq!(h, (0..=4).map(|k| (-2 * k, 1)).collect());
}
