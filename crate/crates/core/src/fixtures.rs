//! Small named algebras used by the tests, the acceptance suite and the CLI
//! example files.

use std::sync::Arc;

use crate::dga::{validate_dga, DgAlgebra, DgaData};
use crate::dgl::{validate_dgl, DgLieAlgebra, DglData};
use crate::graded::{BasisElement, GradedModule, Ring, Scalar, Vector};

pub(crate) fn module(ring: &Ring, basis: &[(&str, i32)]) -> Arc<GradedModule> {
    let basis = basis.iter().map(|(n, d)| BasisElement::new(*n, *d)).collect();
    Arc::new(GradedModule::new(ring.clone(), basis).expect("fixture basis names are distinct"))
}

pub(crate) fn element(m: &GradedModule, terms: &[(&str, i64)]) -> Vector {
    let r = m.ring().clone();
    let t: Vec<(&str, Scalar)> = terms.iter().map(|(n, c)| (*n, r.from_i64(*c))).collect();
    m.element(&t).expect("fixture names exist")
}

fn validated(data: DgaData) -> DgAlgebra {
    validate_dga(&data).expect("fixture satisfies the axioms")
}

/// The ground ring as a DGA concentrated in degree zero.
pub fn ground(ring: Ring) -> DgAlgebra {
    let m = module(&ring, &[("1", 0)]);
    validated(DgaData::with_unit_basis(m, "1").unwrap())
}

/// Basis `1, u` in degree 0 and `a` in degree -1, with `Du = a` and all
/// products of `u, a` zero.
pub fn e1_data(ring: Ring) -> DgaData {
    let m = module(&ring, &[("1", 0), ("u", 0), ("a", -1)]);
    let mut data = DgaData::with_unit_basis(m.clone(), "1").unwrap();
    data.set_differential("u", element(&m, &[("a", 1)])).unwrap();
    data
}

pub fn e1(ring: Ring) -> DgAlgebra {
    validated(e1_data(ring))
}

/// [`e1`] with the differential set to zero.
pub fn e1_flat(ring: Ring) -> DgAlgebra {
    let mut data = e1_data(ring);
    let zero = data.module.zero();
    data.set_differential("u", zero).unwrap();
    validated(data)
}

/// Basis `1`, `a` in degree -1, `b` in degree -2, zero differential and
/// `a·a = b`. Here `a` is not a twisting element.
pub fn square_extension(ring: Ring) -> DgAlgebra {
    let m = module(&ring, &[("1", 0), ("a", -1), ("b", -2)]);
    let mut data = DgaData::with_unit_basis(m.clone(), "1").unwrap();
    data.set_product("a", "a", element(&m, &[("b", 1)])).unwrap();
    validated(data)
}

/// Path algebra of the quiver with one arrow, as a non-commutative DGA:
/// `1, e` in degree 0, `a` in degree -1, `De = a`, `ee = e`, `ea = a`.
pub fn path_algebra(ring: Ring) -> DgAlgebra {
    let m = module(&ring, &[("1", 0), ("e", 0), ("a", -1)]);
    let mut data = DgaData::with_unit_basis(m.clone(), "1").unwrap();
    data.set_differential("e", element(&m, &[("a", 1)])).unwrap();
    data.set_product("e", "e", element(&m, &[("e", 1)])).unwrap();
    data.set_product("e", "a", element(&m, &[("a", 1)])).unwrap();
    validated(data)
}

/// Matrix units `eij` (sending `v_j` to `v_i`) on a graded space with the
/// given degrees, restricted to `i <= j` when `upper` is set, with the
/// differential `[∂, -]` for the degree -1 operator `∂ = Σ c eij`.
///
/// Returns `None` when `∂` has the wrong degree, is not square-zero, or
/// leaves the chosen subalgebra.
pub fn matrix_dga(ring: &Ring, degrees: &[i32], upper: bool, partial: &[(usize, usize, Scalar)]) -> Option<DgAlgebra> {
    let n = degrees.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !upper || i <= j).collect();
    let names: Vec<String> = pairs.iter().map(|(i, j)| format!("e{i}{j}")).collect();
    let basis: Vec<(&str, i32)> =
        names.iter().zip(&pairs).map(|(s, &(i, j))| (s.as_str(), degrees[i] - degrees[j])).collect();
    let m = module(ring, &basis);
    let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
    let mut op = m.zero();
    for (i, j, c) in partial {
        if degrees[*i] - degrees[*j] != -1 {
            return None;
        }
        op[index(*i, *j)?] = &op[index(*i, *j)?] + c;
    }
    let mut unit = m.zero();
    for i in 0..n {
        unit[index(i, i)?] = ring.one();
    }
    let mut data = DgaData::new(m.clone(), unit);
    for (x, &(i, j)) in pairs.iter().enumerate() {
        for (y, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                data.product[x * m.dim() + y] = m.basis_vector(index(i, l)?);
            }
        }
    }
    let a = DgAlgebra::from_data_unchecked(&data);
    if !a.mul(&op, &op).is_zero() {
        return None;
    }
    for x in 0..m.dim() {
        let e = m.basis_vector(x);
        let s = ring.sign(crate::graded::koszul_sign(m.degree(x), 1));
        data.differential[x] = &a.mul(&op, &e) - &a.mul(&e, &op).scale(&s);
    }
    validate_dga(&data).ok()
}

/// `End(k ⊕ k[-1])` with differential `[e10, -]`.
pub fn two_by_two(ring: Ring) -> DgAlgebra {
    let one = ring.one();
    matrix_dga(&ring, &[0, -1], false, &[(1, 0, one)]).expect("square-zero operator")
}

/// `K[x]/(x²)` with basis `1, x`.
pub fn dual_numbers_algebra(ring: Ring) -> DgAlgebra {
    let m = module(&ring, &[("1", 0), ("x", 0)]);
    validated(DgaData::with_unit_basis(m, "1").unwrap())
}

/// Upper triangular 2×2 matrices, basis `e00, e01, e11`.
pub fn upper_triangular(ring: Ring) -> DgAlgebra {
    matrix_dga(&ring, &[0, 0], true, &[]).expect("no differential")
}

/// Exterior algebra on degree -1 generators, one basis monomial per subset.
fn exterior_data(ring: &Ring, gens: &[&str]) -> DgaData {
    let n = gens.len();
    let name = |mask: usize| -> String {
        if mask == 0 {
            "1".into()
        } else {
            (0..n).filter(|i| mask >> i & 1 == 1).map(|i| gens[i]).collect()
        }
    };
    let basis: Vec<(String, i32)> = (0..1usize << n).map(|s| (name(s), -(s.count_ones() as i32))).collect();
    let basis: Vec<(&str, i32)> = basis.iter().map(|(s, d)| (s.as_str(), *d)).collect();
    let m = module(ring, &basis);
    let mut data = DgaData::with_unit_basis(m.clone(), "1").unwrap();
    for s in 1..1usize << n {
        for t in 1..1usize << n {
            if s & t != 0 {
                continue;
            }
            // Sign of sorting: pairs (i in s, j in t) with i > j.
            let swaps: u32 = (0..n).filter(|j| t >> j & 1 == 1).map(|j| (s >> (j + 1)).count_ones()).sum();
            let c = if swaps.is_multiple_of(2) { 1 } else { -1 };
            data.set_product(&name(s), &name(t), element(&m, &[(&name(s | t), c)])).unwrap();
        }
    }
    data
}

/// Exterior algebra on `x, y, z` in degree -1 with `dz = xy`: the
/// Chevalley–Eilenberg algebra of the Heisenberg Lie algebra. Its
/// cohomology has ranks 1, 2, 2, 1.
pub fn heisenberg(ring: Ring) -> DgAlgebra {
    let mut data = exterior_data(&ring, &["x", "y", "z"]);
    let xy = element(&data.module, &[("xy", 1)]);
    data.set_differential("z", xy).unwrap();
    validated(data)
}

/// Exterior algebra on `a, b` in degree -1, zero differential.
pub fn torus_cohomology(ring: Ring) -> DgAlgebra {
    validated(exterior_data(&ring, &["a", "b"]))
}

/// `1, u` with `u` in degree `-k` and `u² = 0`, zero differential.
pub fn sphere_cohomology(ring: Ring, k: i32) -> DgAlgebra {
    let m = module(&ring, &[("1", 0), ("u", -k)]);
    validated(DgaData::with_unit_basis(m, "1").unwrap())
}

fn validated_lie(data: DglData) -> DgLieAlgebra {
    validate_dgl(&data).expect("fixture satisfies the Lie axioms")
}

/// `e` in degree 0, `f` in degree -1, `z` in degree -2, with `df = z`,
/// `[e,f] = f`, `[e,z] = z`. For `γ = λf` the MC residual is `λz`.
pub fn residual_dgl(ring: Ring) -> DgLieAlgebra {
    let m = module(&ring, &[("e", 0), ("f", -1), ("z", -2)]);
    let mut data = DglData::new(m.clone());
    data.set_differential("f", element(&m, &[("z", 1)])).unwrap();
    data.set_bracket("e", "f", element(&m, &[("f", 1)])).unwrap();
    data.set_bracket("e", "z", element(&m, &[("z", 1)])).unwrap();
    validated_lie(data)
}

/// `e, k` in degree 0 and `f` in degree -1 with `dk = f`, `[e,k] = k`,
/// `[e,f] = f`.
pub fn g3(ring: Ring) -> DgLieAlgebra {
    let m = module(&ring, &[("e", 0), ("k", 0), ("f", -1)]);
    let mut data = DglData::new(m.clone());
    data.set_differential("k", element(&m, &[("f", 1)])).unwrap();
    data.set_bracket("e", "k", element(&m, &[("k", 1)])).unwrap();
    data.set_bracket("e", "f", element(&m, &[("f", 1)])).unwrap();
    validated_lie(data)
}

/// Zero differential; `e` in degree 0, `y, s` in degree -1, `z` in degree
/// -2, with `[e,y] = y`, `[e,z] = 2z`, `[y,y] = z`. The cycle `y` is
/// obstructed at order two, `s` is not.
pub fn obstructed_dgl(ring: Ring) -> DgLieAlgebra {
    let m = module(&ring, &[("e", 0), ("y", -1), ("s", -1), ("z", -2)]);
    let mut data = DglData::new(m.clone());
    data.set_bracket("e", "y", element(&m, &[("y", 1)])).unwrap();
    data.set_bracket("e", "z", element(&m, &[("z", 2)])).unwrap();
    data.set_bracket("y", "y", element(&m, &[("z", 1)])).unwrap();
    validated_lie(data)
}
