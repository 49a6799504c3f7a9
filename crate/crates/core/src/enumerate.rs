use crate::graded::{Ring, Scalar, Vector};
use crate::{Error, Limits};

/// All vectors of length `len` supported on `positions`, with coefficients
/// from the finite ring, in lexicographic order.
pub(crate) fn vectors_on(ring: &Ring, len: usize, positions: &[usize], limits: &Limits) -> Result<Vec<Vector>, Error> {
    limits.check_dim("enumerated component", positions.len())?;
    let elements = ring.elements()?;
    let count = (elements.len() as u128).checked_pow(positions.len() as u32);
    limits.check_work("enumeration", count)?;
    Ok(combinations(&elements, positions.len())
        .into_iter()
        .map(|coeffs| {
            let mut v = Vector::zeros(ring, len);
            for (&p, c) in positions.iter().zip(coeffs) {
                v[p] = c;
            }
            v
        })
        .collect())
}

/// All tuples of length `k` over `elements`, last entry varying fastest.
pub(crate) fn combinations(elements: &[Scalar], k: usize) -> Vec<Vec<Scalar>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * elements.len());
        for prefix in &out {
            for e in elements {
                let mut t = prefix.clone();
                t.push(e.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Integer coefficient tuples of length `k` ordered by max-norm, then
/// lexicographically, at most `budget` of them (the zero tuple excluded).
pub(crate) fn integer_tuples(k: usize, budget: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    let mut r = 1i64;
    while (out.len() as u64) < budget {
        let range: Vec<i64> = (-r..=r).collect();
        let mut layer = vec![Vec::new()];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &layer {
                for &x in &range {
                    let mut t: Vec<i64> = p.clone();
                    t.push(x);
                    next.push(t);
                }
            }
            layer = next;
        }
        for t in layer {
            if t.iter().any(|x| x.abs() == r) {
                out.push(t);
                if out.len() as u64 >= budget {
                    break;
                }
            }
        }
        r += 1;
    }
    out
}

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    if jobs <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}
