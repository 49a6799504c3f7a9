use std::sync::Arc;

use super::{ConvolutionAlgebra, DgCoalgebra};
use crate::dga::DgAlgebra;
use crate::graded::{koszul_sign, ChainComplex, GradedMap, GradedModule, Scalar, Vector};
use crate::{Error, Identity, Violation};

/// Unvalidated left DG module data; `action[i * dim M + j]` is `a_i · m_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModuleData {
    pub algebra: DgAlgebra,
    pub module: Arc<GradedModule>,
    pub differential: Vec<Vector>,
    pub action: Vec<Vector>,
}

/// A validated left DG module over a DGA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgModule {
    algebra: DgAlgebra,
    module: Arc<GradedModule>,
    differential: GradedMap,
    action: Vec<Vec<(usize, Scalar)>>,
}

impl DgModuleData {
    /// Checks degrees, `d² = 0`, `(ab)m = a(bm)`, `1m = m` and
    /// `d(am) = (da)m + (-1)^{|a|} a dm`.
    pub fn validate(&self) -> Result<DgModule, Violation> {
        let a = &self.algebra;
        let m = &self.module;
        let (na, nm) = (a.dim(), m.dim());
        for (i, img) in self.differential.iter().enumerate() {
            if let Some((j, _)) = img.support().find(|(j, _)| m.degree(*j) != m.degree(i) - 1) {
                return Err(Violation::new(Identity::DifferentialDegree, &[m.name(i), m.name(j)]));
            }
        }
        for i in 0..na {
            for j in 0..nm {
                if self.action[i * nm + j].support().any(|(k, _)| m.degree(k) != a.module().degree(i) + m.degree(j)) {
                    return Err(Violation::new(Identity::StructureDegree, &[a.module().name(i), m.name(j)]));
                }
            }
        }
        let differential = GradedMap::from_images(m.clone(), m.clone(), -1, self.differential.clone())
            .map_err(|_| Violation::new(Identity::DifferentialDegree, &[]))?;
        let module = DgModule {
            algebra: a.clone(),
            module: m.clone(),
            differential,
            action: self.action.iter().map(|v| v.support().map(|(k, c)| (k, c.clone())).collect()).collect(),
        };
        for j in 0..nm {
            let e = m.basis_vector(j);
            if !module.d(&module.d(&e)).is_zero() {
                return Err(Violation::new(Identity::DifferentialSquare, &[m.name(j)]));
            }
            if module.act(a.unit(), &e) != e {
                return Err(Violation::new(Identity::ActionUnit, &[m.name(j)]));
            }
        }
        for i in 0..na {
            let ai = a.module().basis_vector(i);
            for j in 0..nm {
                let e = m.basis_vector(j);
                let lhs = module.d(&module.act(&ai, &e));
                let s = m.ring().sign(koszul_sign(a.module().degree(i), 1));
                let rhs = &module.act(&a.d(&ai), &e) + &module.act(&ai, &module.d(&e)).scale(&s);
                if lhs != rhs {
                    return Err(Violation::new(Identity::Leibniz, &[a.module().name(i), m.name(j)]));
                }
                for k in 0..na {
                    let ak = a.module().basis_vector(k);
                    let lhs = module.act(&a.mul(&ai, &ak), &e);
                    let rhs = module.act(&ai, &module.act(&ak, &e));
                    if lhs != rhs {
                        return Err(Violation::new(
                            Identity::ActionAssociativity,
                            &[a.module().name(i), a.module().name(k), m.name(j)],
                        ));
                    }
                }
            }
        }
        Ok(module)
    }
}

impl DgModule {
    /// `A` acting on itself by left multiplication.
    pub fn regular(a: &DgAlgebra) -> DgModule {
        let n = a.dim();
        let data = DgModuleData {
            algebra: a.clone(),
            module: a.module().clone(),
            differential: (0..n).map(|i| a.differential().image(i)).collect(),
            action: (0..n * n).map(|p| a.product_of_basis(p / n, p % n)).collect(),
        };
        data.validate().expect("a DGA is a module over itself")
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn d(&self, v: &Vector) -> Vector {
        self.differential.apply(v)
    }

    pub fn act(&self, a: &Vector, m: &Vector) -> Vector {
        let nm = self.module.dim();
        let mut out = self.module.zero();
        for (i, x) in a.support() {
            for (j, y) in m.support() {
                let xy = x * y;
                for (k, c) in &self.action[i * nm + j] {
                    out[*k] = &out[*k] + &(&xy * c);
                }
            }
        }
        out
    }
}

/// `d_τ(c⊗m) = dc⊗m + (-1)^{|c|} c⊗dm - Σ (-1)^{|c'|} c'⊗τ(c'')m` on `C⊗M`,
/// for any degree -1 map `τ: C → A`, without checking that `τ` twists.
pub fn twisted_tensor_operator(c: &DgCoalgebra, tau: &GradedMap, m: &DgModule) -> Result<GradedMap, Error> {
    if tau.source() != c.module() || tau.target() != m.algebra().module() {
        return Err(Error::Incompatible("τ must map the coalgebra to the module's algebra".into()));
    }
    if tau.degree() != -1 {
        return Err(Error::WrongDegree { expected: -1, found: tau.degree() });
    }
    let total = Arc::new(c.module().tensor(m.module())?);
    let nm = m.module().dim();
    let ring = total.ring().clone();
    GradedMap::from_fn(total.clone(), total.clone(), -1, |p| {
        let (i, j) = (p / nm, p % nm);
        let ci = c.module().basis_vector(i);
        let mj = m.module().basis_vector(j);
        let mut out = total.zero();
        for (k, a) in c.d(&ci).support() {
            out[k * nm + j] = &out[k * nm + j] + a;
        }
        let s = ring.sign(koszul_sign(c.module().degree(i), 1));
        for (l, a) in m.d(&mj).support() {
            out[i * nm + l] = &out[i * nm + l] + &(a * &s);
        }
        for (c1, c2, lambda) in c.coproduct_of_basis(i) {
            let s = ring.sign(-koszul_sign(c.module().degree(*c1), 1));
            let moved = m.act(&tau.image(*c2), &mj);
            for (l, a) in moved.support() {
                out[c1 * nm + l] = &out[c1 * nm + l] + &(&(lambda * &s) * a);
            }
        }
        out
    })
}

/// The twisted tensor product `C ⊗_τ M` as a chain complex. Refuses with the
/// residual when `τ` is not a twisting cochain.
pub fn twisted_tensor_complex(conv: &ConvolutionAlgebra, tau: &GradedMap, m: &DgModule) -> Result<ChainComplex, Error> {
    if m.algebra() != conv.coefficients() {
        return Err(Error::Incompatible("module is over a different algebra".into()));
    }
    let r = conv.twisting_residual(tau)?;
    if !r.is_zero() {
        let v = conv.hom().element_of(&r)?;
        return Err(Error::NotTwisting(conv.hom().module().format(&v)));
    }
    let op = twisted_tensor_operator(conv.hom().coalgebra(), tau, m)?;
    ChainComplex::new(op).map_err(|e| Error::Internal(format!("twisted differential does not square to zero: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{convolution_algebra, symmetric_coalgebra};
    use crate::fixtures;
    use crate::graded::{BasisElement, Ring};

    fn xi(ring: &Ring, n: u32) -> DgCoalgebra {
        symmetric_coalgebra(ring, &[BasisElement::new("xi", 0)], n).unwrap().coalgebra().clone()
    }

    fn tau(conv: &ConvolutionAlgebra, terms: &[(&str, i64)]) -> GradedMap {
        let v = fixtures::element(conv.algebra().module(), terms);
        conv.hom().map_of(&v, -1).unwrap()
    }

    #[test]
    fn zero_twist_gives_tensor_product_homology() {
        let r = Ring::Rationals;
        let a = fixtures::e1(r.clone());
        let conv = convolution_algebra(&xi(&r, 2), &a).unwrap();
        let m = DgModule::regular(&a);
        let cx = twisted_tensor_complex(&conv, &tau(&conv, &[]), &m).unwrap();
        // H(C) is 3-dim in degree 0 and H(E1) is 1-dim in degree 0.
        let h = cx.homology_dims().unwrap();
        assert_eq!(h.get(&0), Some(&3));
        assert_eq!(h.values().sum::<usize>(), 3);
    }

    #[test]
    fn twisting_by_a_squares_to_zero() {
        let r = Ring::Prime(2);
        let a = fixtures::e1(r.clone());
        let conv = convolution_algebra(&xi(&r, 2), &a).unwrap();
        let t = tau(&conv, &[("xi1->a", 1)]);
        assert!(twisted_tensor_complex(&conv, &t, &DgModule::regular(&a)).is_ok());
    }

    #[test]
    fn non_twisting_cochain_is_refused_and_squares_nonzero() {
        let r = Ring::Rationals;
        let a = fixtures::square_extension(r.clone());
        let conv = convolution_algebra(&xi(&r, 2), &a).unwrap();
        let t = tau(&conv, &[("xi1->a", 1)]);
        let m = DgModule::regular(&a);
        assert!(matches!(twisted_tensor_complex(&conv, &t, &m), Err(Error::NotTwisting(_))));
        let op = twisted_tensor_operator(conv.hom().coalgebra(), &t, &m).unwrap();
        let sq = op.compose(&op).unwrap();
        // Witness: xi2⊗1 ↦ ±xi0⊗b.
        let total = op.source().clone();
        let p = total.lookup("xi2⊗1").unwrap();
        let img = sq.image(p);
        assert!(!img[total.lookup("xi0⊗b").unwrap()].is_zero());
    }
}
