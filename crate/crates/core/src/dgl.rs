//! Differential graded Lie algebras and the Maurer-Cartan equation.
//!
//! The Maurer-Cartan convention is fixed once: `γ` is MC when
//! `dγ + ½[γ,γ] = 0`. The other common form `Dτ = ½[τ,τ]` is reached by
//! [`mc_sign_adapter`], `τ = -γ`.

use std::sync::Arc;

use crate::dga::DgAlgebra;
use crate::enumerate::vectors_on;
use crate::graded::{koszul_sign, GradedMap, GradedModule, Ring, Scalar, Vector};
use crate::{Error, Identity, Limits, Violation};

pub use crate::coalgebra::convolution_dgl;

/// Unvalidated DGL data; `bracket[i * dim + j]` is `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglData {
    pub module: Arc<GradedModule>,
    pub differential: Vec<Vector>,
    pub bracket: Vec<Vector>,
}

impl DglData {
    /// Zero differential and zero bracket.
    pub fn new(module: Arc<GradedModule>) -> Self {
        let n = module.dim();
        DglData { differential: vec![module.zero(); n], bracket: vec![module.zero(); n * n], module }
    }

    pub fn set_differential(&mut self, x: &str, image: Vector) -> Result<(), Error> {
        let i = self.module.lookup(x)?;
        self.differential[i] = image;
        Ok(())
    }

    /// Sets `[x,y]` and, by antisymmetry, `[y,x]`.
    pub fn set_bracket(&mut self, x: &str, y: &str, image: Vector) -> Result<(), Error> {
        let (i, j) = (self.module.lookup(x)?, self.module.lookup(y)?);
        let n = self.module.dim();
        let s = self.module.ring().sign(-koszul_sign(self.module.degree(i), self.module.degree(j)));
        self.bracket[j * n + i] = image.scale(&s);
        self.bracket[i * n + j] = image;
        Ok(())
    }
}

/// A validated differential graded Lie algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieAlgebra {
    module: Arc<GradedModule>,
    differential: GradedMap,
    bracket: Vec<Vec<(usize, Scalar)>>,
}

/// Checks degrees, `d² = 0`, antisymmetry, Leibniz and Jacobi on all basis
/// pairs and triples.
pub fn validate_dgl(data: &DglData) -> Result<DgLieAlgebra, Violation> {
    let m = &data.module;
    let n = m.dim();
    let name = |i: usize| m.name(i);
    for (i, img) in data.differential.iter().enumerate() {
        if let Some((j, _)) = img.support().find(|(j, _)| m.degree(*j) != m.degree(i) - 1) {
            return Err(Violation::new(Identity::DifferentialDegree, &[name(i), name(j)]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if data.bracket[i * n + j].support().any(|(k, _)| m.degree(k) != m.degree(i) + m.degree(j)) {
                return Err(Violation::new(Identity::StructureDegree, &[name(i), name(j)]));
            }
        }
    }
    let l = DgLieAlgebra::from_data_unchecked(data);
    let ring = m.ring();
    let deg = |i: usize| m.degree(i);
    for i in 0..n {
        if !l.d(&l.d(&m.basis_vector(i))).is_zero() {
            return Err(Violation::new(Identity::DifferentialSquare, &[name(i)]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let s = ring.sign(-koszul_sign(deg(i), deg(j)));
            if l.bracket_of_basis(i, j) != l.bracket_of_basis(j, i).scale(&s) {
                return Err(Violation::new(Identity::Antisymmetry, &[name(i), name(j)]));
            }
        }
    }
    for i in 0..n {
        let ei = m.basis_vector(i);
        for j in 0..n {
            let ej = m.basis_vector(j);
            let lhs = l.d(&l.bracket_of_basis(i, j));
            let s = ring.sign(koszul_sign(deg(i), 1));
            let rhs = &l.bracket(&l.d(&ei), &ej) + &l.bracket(&ei, &l.d(&ej)).scale(&s);
            if lhs != rhs {
                return Err(Violation::new(Identity::Leibniz, &[name(i), name(j)]));
            }
        }
    }
    for i in 0..n {
        let ei = m.basis_vector(i);
        for j in 0..n {
            let ej = m.basis_vector(j);
            let ij = l.bracket_of_basis(i, j);
            for k in 0..n {
                let ek = m.basis_vector(k);
                // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
                let lhs = l.bracket(&ei, &l.bracket_of_basis(j, k));
                let s = ring.sign(koszul_sign(deg(i), deg(j)));
                let rhs = &l.bracket(&ij, &ek) + &l.bracket(&ej, &l.bracket_of_basis(i, k)).scale(&s);
                if lhs != rhs {
                    return Err(Violation::new(Identity::Jacobi, &[name(i), name(j), name(k)]));
                }
            }
        }
    }
    Ok(l)
}

/// Degree -1 element with `dγ + ½[γ,γ] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct McElement(Vector);

impl McElement {
    pub fn element(&self) -> &Vector {
        &self.0
    }

    pub fn into_element(self) -> Vector {
        self.0
    }
}

/// Result of [`DgLieAlgebra::is_mc`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McCheck {
    Mc(McElement),
    /// `dγ + ½[γ,γ]`, nonzero.
    Residual(Vector),
}

impl DgLieAlgebra {
    /// `bracket[i * dim + j]` lists the nonzero coefficients of `[e_i, e_j]`.
    pub(crate) fn from_sparse_unchecked(
        module: Arc<GradedModule>,
        differential: GradedMap,
        bracket: Vec<Vec<(usize, Scalar)>>,
    ) -> Self {
        DgLieAlgebra { module, differential, bracket }
    }

    pub(crate) fn from_data_unchecked(data: &DglData) -> Self {
        let m = data.module.clone();
        let differential = GradedMap::from_images(m.clone(), m.clone(), -1, data.differential.clone())
            .unwrap_or_else(|_| GradedMap::zero(m.clone(), m.clone(), -1));
        let bracket = data.bracket.iter().map(|v| v.support().map(|(k, c)| (k, c.clone())).collect()).collect();
        DgLieAlgebra { module: m, differential, bracket }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    pub fn to_data(&self) -> DglData {
        let n = self.dim();
        DglData {
            module: self.module.clone(),
            differential: (0..n).map(|i| self.differential.image(i)).collect(),
            bracket: self.bracket.iter().map(|e| Vector::from_sparse(self.ring(), n, e)).collect(),
        }
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.differential.apply(x)
    }

    pub fn bracket_of_basis(&self, i: usize, j: usize) -> Vector {
        Vector::from_sparse(self.ring(), self.dim(), &self.bracket[i * self.dim() + j])
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = self.module.zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for (k, c) in &self.bracket[i * n + j] {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|e| e.is_empty())
    }

    /// `dγ + ½[γ,γ]`. In characteristic 2 a divided square `s` with
    /// `[γ,γ] = 2s` must be supplied and `dγ + s` is returned.
    pub fn mc_residual(&self, gamma: &Vector, divided_square: Option<&Vector>) -> Result<Vector, Error> {
        self.module.expect_degree(gamma, -1)?;
        let sq = self.bracket(gamma, gamma);
        let half_sq = match (self.ring().half(), divided_square) {
            (_, Some(s)) => {
                self.module.expect_degree(s, -2)?;
                if s.scale(&self.ring().from_i64(2)) != sq {
                    return Err(Error::Incompatible("divided square does not halve [γ,γ]".into()));
                }
                s.clone()
            }
            (Some(h), None) => sq.scale(&h),
            (None, None) => return Err(Error::DividedSquareRequired),
        };
        Ok(&self.d(gamma) + &half_sq)
    }

    pub fn is_mc(&self, gamma: &Vector, divided_square: Option<&Vector>) -> Result<McCheck, Error> {
        let r = self.mc_residual(gamma, divided_square)?;
        Ok(if r.is_zero() { McCheck::Mc(McElement(gamma.clone())) } else { McCheck::Residual(r) })
    }

    pub fn mc_element(&self, gamma: &Vector) -> Result<McElement, Error> {
        match self.is_mc(gamma, None)? {
            McCheck::Mc(m) => Ok(m),
            McCheck::Residual(r) => Err(Error::NotTwisting(self.module.format(&r))),
        }
    }

    /// All MC elements, lexicographically (finite rings of odd characteristic).
    pub fn enumerate_mc(&self, limits: &Limits) -> Result<Vec<McElement>, Error> {
        if !self.ring().is_finite() {
            return Err(Error::NotFinite);
        }
        let comp = self.module.component(-1);
        let mut out = Vec::new();
        for g in vectors_on(self.ring(), self.dim(), &comp, limits)? {
            if self.mc_residual(&g, None)?.is_zero() {
                out.push(McElement(g));
            }
        }
        Ok(out)
    }

    /// `a ↦ da + [γ,a]` for an arbitrary degree -1 element. Its square is
    /// `[dγ + ½[γ,γ], -]`.
    pub fn twisted_operator(&self, gamma: &Vector) -> Result<GradedMap, Error> {
        self.module.expect_degree(gamma, -1)?;
        GradedMap::from_fn(self.module.clone(), self.module.clone(), -1, |i| {
            let e = self.module.basis_vector(i);
            &self.d(&e) + &self.bracket(gamma, &e)
        })
    }

    /// `ad_x = [x, -]` as a map of degree `|x|`.
    pub fn ad(&self, x: &Vector) -> Result<GradedMap, Error> {
        let k = self.module.homogeneous_degree(x)?.unwrap_or(0);
        GradedMap::from_fn(self.module.clone(), self.module.clone(), k, |i| {
            self.bracket(x, &self.module.basis_vector(i))
        })
    }
}

/// `-γ`: an MC element in the canonical form becomes a solution of `Dτ = ½[τ,τ]`.
pub fn mc_sign_adapter(gamma: &Vector) -> Vector {
    -gamma
}

/// `d_γ = d + [γ, -]`, which squares to zero.
pub fn twisted_differential_lie(l: &DgLieAlgebra, gamma: &McElement) -> Result<GradedMap, Error> {
    l.twisted_operator(gamma.element())
}

/// Same module and differential, bracket `[a,b] = ab - (-1)^{|a||b|} ba`.
pub fn commutator_dgl(a: &DgAlgebra) -> DgLieAlgebra {
    let m = a.module().clone();
    let n = m.dim();
    let mut data = DglData::new(m.clone());
    data.differential = (0..n).map(|i| a.differential().image(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let s = a.ring().sign(koszul_sign(m.degree(i), m.degree(j)));
            data.bracket[i * n + j] = &a.product_of_basis(i, j) - &a.product_of_basis(j, i).scale(&s);
        }
    }
    DgLieAlgebra::from_data_unchecked(&data)
}
