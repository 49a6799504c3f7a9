#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng as _;
use rand_chacha::ChaCha8Rng;
use twist_core::graded::{BasisElement, GradedModule, Ring, Scalar, Vector};

pub fn module(ring: &Ring, basis: &[(&str, i32)]) -> Arc<GradedModule> {
    let basis = basis.iter().map(|(n, d)| BasisElement::new(*n, *d)).collect();
    Arc::new(GradedModule::new(ring.clone(), basis).unwrap())
}

pub fn el(m: &GradedModule, terms: &[(&str, i64)]) -> Vector {
    let r = m.ring().clone();
    let t: Vec<(&str, Scalar)> = terms.iter().map(|(n, c)| (*n, r.from_i64(*c))).collect();
    m.element(&t).unwrap()
}

/// Random element supported on the given positions with small integer
/// coefficients.
pub fn random_on(rng: &mut ChaCha8Rng, m: &GradedModule, positions: &[usize], spread: i64) -> Vector {
    let mut v = m.zero();
    for &p in positions {
        v[p] = m.ring().from_i64(rng.gen_range(-spread..=spread));
    }
    v
}

pub fn random_of_degree(rng: &mut ChaCha8Rng, m: &GradedModule, degree: i32, spread: i64) -> Vector {
    random_on(rng, m, &m.component(degree), spread)
}

/// Every element supported on `positions`, over a finite ring.
pub fn all_on(m: &GradedModule, positions: &[usize]) -> Vec<Vector> {
    let elems = m.ring().elements().unwrap();
    let mut out = vec![m.zero()];
    for &p in positions {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |c| {
                    let mut w = v.clone();
                    w[p] = c.clone();
                    w
                })
            })
            .collect();
    }
    out
}
