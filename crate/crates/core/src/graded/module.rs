use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::linalg::{Matrix, Vector};
use super::ring::{Ring, Scalar};
use crate::Error;

/// `(-1)^{pq}` as `+1` or `-1`.
pub fn koszul_sign(p: i32, q: i32) -> i32 {
    if (p & 1 == 1) && (q & 1 == 1) {
        -1
    } else {
        1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i32,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        BasisElement { name: name.into(), degree }
    }
}

/// Finite free graded module over a [`Ring`] with named basis elements.
///
/// Grading is homological: differentials have degree -1.
#[derive(Clone)]
pub struct GradedModule {
    ring: Ring,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.basis == other.basis
    }
}

impl Eq for GradedModule {}

impl fmt::Debug for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedModule").field("ring", &self.ring.descriptor()).field("basis", &self.basis).finish()
    }
}

impl GradedModule {
    pub fn new(ring: Ring, basis: Vec<BasisElement>) -> Result<Self, Error> {
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.name.clone(), i).is_some() {
                return Err(Error::DuplicateBasis(b.name.clone()));
            }
        }
        Ok(GradedModule { ring, basis, index })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, Error> {
        self.find(name).ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.basis.iter().map(|b| b.degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Basis indices of the degree-`k` component, in basis order.
    pub fn component(&self, k: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].degree == k).collect()
    }

    pub fn zero(&self) -> Vector {
        Vector::zeros(&self.ring, self.dim())
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(&self.ring, self.dim(), i)
    }

    /// Builds an element from `(name, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> Result<Vector, Error> {
        let mut v = self.zero();
        for (name, c) in terms {
            let i = self.lookup(name)?;
            v[i] = &v[i] + c;
        }
        Ok(v)
    }

    /// Degree of a homogeneous element; `None` for zero.
    pub fn homogeneous_degree(&self, v: &Vector) -> Result<Option<i32>, Error> {
        let mut deg = None;
        for (i, _) in v.support() {
            let d = self.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Inhomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Checks that `v` is zero or homogeneous of degree `k`.
    pub fn expect_degree(&self, v: &Vector, k: i32) -> Result<(), Error> {
        match self.homogeneous_degree(v)? {
            Some(d) if d != k => Err(Error::WrongDegree { expected: k, found: d }),
            _ => Ok(()),
        }
    }

    /// Splits an element into its homogeneous components.
    pub fn homogeneous_parts(&self, v: &Vector) -> BTreeMap<i32, Vector> {
        let mut out: BTreeMap<i32, Vector> = BTreeMap::new();
        for (i, c) in v.support() {
            out.entry(self.degree(i)).or_insert_with(|| self.zero())[i] = c.clone();
        }
        out
    }

    /// Tensor product module; basis `(i, j)` sits at index `i * other.dim() + j`.
    pub fn tensor(&self, other: &GradedModule) -> Result<GradedModule, Error> {
        if self.ring != other.ring {
            return Err(Error::Incompatible("tensor product of modules over different rings".into()));
        }
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(BasisElement::new(format!("{}⊗{}", a.name, b.name), a.degree + b.degree));
            }
        }
        GradedModule::new(self.ring.clone(), basis)
    }

    pub fn format(&self, v: &Vector) -> String {
        let parts: Vec<String> = v
            .support()
            .map(|(i, c)| if c.is_one() { self.name(i).to_string() } else { format!("({c})*{}", self.name(i)) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Degree-homogeneous linear map stored by sparse columns.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    degree: i32,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedMap").field("degree", &self.degree).field("columns", &self.columns).finish()
    }
}

impl GradedMap {
    /// Builds a map from the images of the source basis vectors; rejects any
    /// image that leaves the degree `deg(source) + degree` component.
    pub fn from_images(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: i32,
        images: Vec<Vector>,
    ) -> Result<Self, Error> {
        if source.ring() != target.ring() {
            return Err(Error::Incompatible("map between modules over different rings".into()));
        }
        if images.len() != source.dim() {
            return Err(Error::Incompatible("one image per source basis element is required".into()));
        }
        let mut columns = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            let mut col = Vec::new();
            for (j, c) in img.support() {
                if target.degree(j) != source.degree(i) + degree {
                    return Err(Error::MapDegree {
                        source_basis: source.name(i).to_string(),
                        target_basis: target.name(j).to_string(),
                        degree,
                    });
                }
                col.push((j, c.clone()));
            }
            columns.push(col);
        }
        Ok(GradedMap { source, target, degree, columns })
    }

    pub fn from_fn(
        source: Arc<GradedModule>,
        target: Arc<GradedModule>,
        degree: i32,
        f: impl Fn(usize) -> Vector,
    ) -> Result<Self, Error> {
        let images = (0..source.dim()).map(f).collect();
        Self::from_images(source, target, degree, images)
    }

    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>, degree: i32) -> Self {
        let columns = vec![Vec::new(); source.dim()];
        GradedMap { source, target, degree, columns }
    }

    pub fn identity(module: Arc<GradedModule>) -> Self {
        let ring = module.ring().clone();
        let columns = (0..module.dim()).map(|i| vec![(i, ring.one())]).collect();
        GradedMap { source: module.clone(), target: module, degree: 0, columns }
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn column(&self, i: usize) -> &[(usize, Scalar)] {
        &self.columns[i]
    }

    pub fn image(&self, i: usize) -> Vector {
        Vector::from_sparse(self.target.ring(), self.target.dim(), &self.columns[i])
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.source.dim(), "vector does not live in the source module");
        let mut out = self.target.zero();
        for (i, c) in v.support() {
            for (j, a) in &self.columns[i] {
                out[*j] = &out[*j] + &(c * a);
            }
        }
        out
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &GradedMap) -> Result<GradedMap, Error> {
        if **inner.target() != *self.source {
            return Err(Error::Incompatible("composition of maps with mismatched modules".into()));
        }
        GradedMap::from_fn(inner.source.clone(), self.target.clone(), self.degree + inner.degree, |i| {
            self.apply(&inner.image(i))
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, Error> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Incompatible("sum of maps with different shapes".into()));
        }
        GradedMap::from_fn(self.source.clone(), self.target.clone(), self.degree, |i| &self.image(i) + &other.image(i))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.iter().all(|(_, a)| a.is_zero()))
    }

    pub fn matrix(&self) -> Matrix {
        let cols: Vec<Vector> = (0..self.source.dim()).map(|i| self.image(i)).collect();
        Matrix::from_columns(self.target.ring(), self.target.dim(), &cols)
    }

    /// Block from the degree-`k` source component to the degree-`k + degree`
    /// target component, as a dense matrix in basis order.
    pub fn block(&self, k: i32) -> Matrix {
        let src = self.source.component(k);
        let tgt = self.target.component(k + self.degree);
        let ring = self.target.ring();
        let mut m = Matrix::zeros(ring, tgt.len(), src.len());
        for (c, &i) in src.iter().enumerate() {
            for (j, a) in &self.columns[i] {
                let r = tgt.iter().position(|t| t == j).expect("degree checked on construction");
                m.set(r, c, a.clone());
            }
        }
        m
    }
}

/// `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`.
pub fn tensor_of_maps(f: &GradedMap, g: &GradedMap) -> Result<GradedMap, Error> {
    let source = Arc::new(f.source.tensor(&g.source)?);
    let target = Arc::new(f.target.tensor(&g.target)?);
    let m = g.source.dim();
    let tm = g.target.dim();
    let ring = target.ring().clone();
    let images = (0..source.dim())
        .map(|idx| {
            let (x, y) = (idx / m, idx % m);
            let sign = ring.sign(koszul_sign(g.degree, f.source.degree(x)));
            let mut v = target.zero();
            for (i, a) in &f.columns[x] {
                for (j, b) in &g.columns[y] {
                    let k = i * tm + j;
                    v[k] = &v[k] + &(&sign * &(a * b));
                }
            }
            v
        })
        .collect();
    GradedMap::from_images(source, target, f.degree + g.degree, images)
}
