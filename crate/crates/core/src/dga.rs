//! Differential graded algebras, twisting elements and the gauge action of
//! the group of degree-zero units.
//!
//! A twisting element is a degree -1 element `τ` with `Dτ = ττ`. A unit `x`
//! of degree zero acts by `x * y = x y x⁻¹ + (Dx) x⁻¹`, and the orbit set of
//! this action is the functor `D(A)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;

use crate::enumerate::{integer_tuples, vectors_on, with_pool};
use crate::graded::{koszul_sign, solve_linear, GradedMap, GradedModule, LinearSolution, Matrix, Ring, Scalar, Vector};
use crate::{Error, Identity, Limits, Violation};

/// Unvalidated DGA data: differential images, product table and unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaData {
    pub module: Arc<GradedModule>,
    /// Image of each basis element under the differential.
    pub differential: Vec<Vector>,
    /// `product[i * dim + j]` is `e_i e_j`.
    pub product: Vec<Vector>,
    pub unit: Vector,
}

impl DgaData {
    /// Zero differential and zero product, with the given unit.
    pub fn new(module: Arc<GradedModule>, unit: Vector) -> Self {
        let n = module.dim();
        DgaData { differential: vec![module.zero(); n], product: vec![module.zero(); n * n], unit, module }
    }

    /// Data whose unit is the basis element `unit` acting as a two-sided identity.
    pub fn with_unit_basis(module: Arc<GradedModule>, unit: &str) -> Result<Self, Error> {
        let u = module.lookup(unit)?;
        let mut data = Self::new(module.clone(), module.basis_vector(u));
        for i in 0..module.dim() {
            data.product[u * module.dim() + i] = module.basis_vector(i);
            data.product[i * module.dim() + u] = module.basis_vector(i);
        }
        Ok(data)
    }

    pub fn set_differential(&mut self, x: &str, image: Vector) -> Result<(), Error> {
        let i = self.module.lookup(x)?;
        self.differential[i] = image;
        Ok(())
    }

    pub fn set_product(&mut self, x: &str, y: &str, image: Vector) -> Result<(), Error> {
        let (i, j) = (self.module.lookup(x)?, self.module.lookup(y)?);
        self.product[i * self.module.dim() + j] = image;
        Ok(())
    }
}

/// A validated differential graded algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    module: Arc<GradedModule>,
    differential: GradedMap,
    product: Vec<Vec<(usize, Scalar)>>,
    unit: Vector,
}

/// Checks the DGA axioms on all basis pairs and triples.
pub fn validate_dga(data: &DgaData) -> Result<DgAlgebra, Violation> {
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
            let img = &data.product[i * n + j];
            if img.support().any(|(k, _)| m.degree(k) != m.degree(i) + m.degree(j)) {
                return Err(Violation::new(Identity::StructureDegree, &[name(i), name(j)]));
            }
        }
    }
    if m.expect_degree(&data.unit, 0).is_err() || data.unit.is_zero() && n > 0 {
        return Err(Violation::new(Identity::UnitDegree, &[]));
    }
    let a = DgAlgebra::from_data_unchecked(data);
    let ring = m.ring();
    for i in 0..n {
        if !a.d(&a.d(&m.basis_vector(i))).is_zero() {
            return Err(Violation::new(Identity::DifferentialSquare, &[name(i)]));
        }
    }
    for i in 0..n {
        let ei = m.basis_vector(i);
        for j in 0..n {
            let ej = m.basis_vector(j);
            let lhs = a.d(&a.mul(&ei, &ej));
            let sign = ring.sign(koszul_sign(m.degree(i), 1));
            let rhs = &a.mul(&a.d(&ei), &ej) + &a.mul(&ei, &a.d(&ej)).scale(&sign);
            if lhs != rhs {
                return Err(Violation::new(Identity::Leibniz, &[name(i), name(j)]));
            }
        }
    }
    for i in 0..n {
        let ei = m.basis_vector(i);
        if a.mul(&a.unit, &ei) != ei || a.mul(&ei, &a.unit) != ei {
            return Err(Violation::new(Identity::Unit, &[name(i)]));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = Vector::from_sparse(ring, n, &a.product[i * n + j]);
            for k in 0..n {
                let jk = Vector::from_sparse(ring, n, &a.product[j * n + k]);
                let lhs = a.mul(&ij, &m.basis_vector(k));
                let rhs = a.mul(&m.basis_vector(i), &jk);
                if lhs != rhs {
                    return Err(Violation::new(Identity::Associativity, &[name(i), name(j), name(k)]));
                }
            }
        }
    }
    Ok(a)
}

/// Result of [`DgAlgebra::is_twisting_element`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistingCheck {
    Twisting(TwistingElement),
    /// `Dτ - ττ`, nonzero.
    Residual(Vector),
}

/// Degree -1 element with `Dτ = ττ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwistingElement(Vector);

impl TwistingElement {
    pub fn element(&self) -> &Vector {
        &self.0
    }

    pub fn into_element(self) -> Vector {
        self.0
    }
}

/// Invertible element of the degree-zero component, with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroupElement {
    element: Vector,
    inverse: Vector,
}

impl UnitGroupElement {
    pub fn element(&self) -> &Vector {
        &self.element
    }

    pub fn inverse(&self) -> &Vector {
        &self.inverse
    }
}

/// One orbit of the gauge action; `representative` is its least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Vector,
    pub members: Vec<Vector>,
}

/// Outcome of a gauge-equivalence decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence<W> {
    Equivalent(W),
    Inequivalent,
    /// No witness among the first `bound` candidates of an infinite search.
    Undecided {
        bound: u64,
    },
}

impl<W> Equivalence<W> {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

impl DgAlgebra {
    pub(crate) fn from_data_unchecked(data: &DgaData) -> Self {
        let m = data.module.clone();
        let differential = GradedMap::from_images(m.clone(), m.clone(), -1, data.differential.clone())
            .unwrap_or_else(|_| GradedMap::zero(m.clone(), m.clone(), -1));
        let product = data.product.iter().map(|v| v.support().map(|(k, c)| (k, c.clone())).collect()).collect();
        DgAlgebra { module: m, differential, product, unit: data.unit.clone() }
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

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn to_data(&self) -> DgaData {
        let n = self.dim();
        DgaData {
            module: self.module.clone(),
            differential: (0..n).map(|i| self.differential.image(i)).collect(),
            product: self.product.iter().map(|e| Vector::from_sparse(self.ring(), n, e)).collect(),
            unit: self.unit.clone(),
        }
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.differential.apply(x)
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let mut out = self.module.zero();
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for (k, c) in &self.product[i * n + j] {
                    out[*k] = &out[*k] + &(&ab * c);
                }
            }
        }
        out
    }

    pub fn product_of_basis(&self, i: usize, j: usize) -> Vector {
        Vector::from_sparse(self.ring(), self.dim(), &self.product[i * self.dim() + j])
    }

    /// Whether `xy = (-1)^{|x||y|} yx` on all basis pairs.
    pub fn is_graded_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s = self.ring().sign(koszul_sign(self.module.degree(i), self.module.degree(j)));
                self.product_of_basis(i, j) == self.product_of_basis(j, i).scale(&s)
            })
        })
    }

    /// `Dτ - ττ`.
    pub fn twisting_residual(&self, tau: &Vector) -> Vector {
        &self.d(tau) - &self.mul(tau, tau)
    }

    pub fn is_twisting_element(&self, tau: &Vector) -> Result<TwistingCheck, Error> {
        self.module.expect_degree(tau, -1)?;
        let r = self.twisting_residual(tau);
        Ok(if r.is_zero() { TwistingCheck::Twisting(TwistingElement(tau.clone())) } else { TwistingCheck::Residual(r) })
    }

    pub fn twisting_element(&self, tau: &Vector) -> Result<TwistingElement, Error> {
        match self.is_twisting_element(tau)? {
            TwistingCheck::Twisting(t) => Ok(t),
            TwistingCheck::Residual(r) => Err(Error::NotTwisting(self.module.format(&r))),
        }
    }

    fn left_multiplication_on(&self, x: &Vector, columns: &[usize]) -> Matrix {
        let cols: Vec<Vector> = columns.iter().map(|&j| self.mul(x, &self.module.basis_vector(j))).collect();
        Matrix::from_columns(self.ring(), self.dim(), &cols)
    }

    /// Returns the unit-group element for `x` if `x` is an invertible
    /// degree-zero element.
    pub fn unit_element(&self, x: &Vector) -> Result<Option<UnitGroupElement>, Error> {
        self.module.expect_degree(x, 0)?;
        let comp = self.module.component(0);
        let lx = self.left_multiplication_on(x, &comp);
        let candidate = match solve_linear(&lx, &self.unit) {
            Ok(LinearSolution::Inconsistent) => return Ok(None),
            Ok(LinearSolution::Solved { particular, kernel }) => {
                // Over a field a right inverse of x is unique when it is two-sided.
                if !kernel.is_empty() {
                    return Ok(None);
                }
                let mut y = self.module.zero();
                for (c, &j) in comp.iter().enumerate() {
                    y[j] = particular[c].clone();
                }
                y
            }
            Err(Error::NonUnitPivot { .. }) if self.ring().is_finite() => {
                let all = vectors_on(self.ring(), self.dim(), &comp, &Limits::default())?;
                match all.into_iter().find(|y| self.mul(x, y) == self.unit) {
                    Some(y) => y,
                    None => return Ok(None),
                }
            }
            Err(e) => return Err(e),
        };
        if self.mul(&candidate, x) != self.unit || self.mul(x, &candidate) != self.unit {
            return Ok(None);
        }
        Ok(Some(UnitGroupElement { element: x.clone(), inverse: candidate }))
    }

    pub fn identity_unit(&self) -> UnitGroupElement {
        UnitGroupElement { element: self.unit.clone(), inverse: self.unit.clone() }
    }

    pub fn unit_product(&self, x: &UnitGroupElement, y: &UnitGroupElement) -> UnitGroupElement {
        UnitGroupElement { element: self.mul(&x.element, &y.element), inverse: self.mul(&y.inverse, &x.inverse) }
    }

    /// `x y x⁻¹ + (Dx) x⁻¹`, computed without checking the inputs.
    pub fn gauge_formula(&self, x: &UnitGroupElement, y: &Vector) -> Vector {
        let conj = self.mul(&self.mul(&x.element, y), &x.inverse);
        &conj + &self.mul(&self.d(&x.element), &x.inverse)
    }

    /// The gauge action `x * y`. The unit identities `(Dx)x⁻¹ + x Dx⁻¹ = 0`
    /// and `(Dx⁻¹)x + x⁻¹Dx = 0` and the twisting equation of the result are
    /// re-checked.
    pub fn gauge_act(&self, x: &UnitGroupElement, y: &TwistingElement) -> Result<TwistingElement, Error> {
        let (u, v) = (&x.element, &x.inverse);
        let id1 = &self.mul(&self.d(u), v) + &self.mul(u, &self.d(v));
        let id2 = &self.mul(&self.d(v), u) + &self.mul(v, &self.d(u));
        if !id1.is_zero() || !id2.is_zero() {
            return Err(Error::Internal("unit identities fail".into()));
        }
        let out = self.gauge_formula(x, &y.0);
        match self.is_twisting_element(&out)? {
            TwistingCheck::Twisting(t) => Ok(t),
            TwistingCheck::Residual(_) => Err(Error::Internal("gauge action left the twisting set".into())),
        }
    }

    /// All twisting elements, in lexicographic order (finite rings only).
    pub fn enumerate_twisting_elements(&self, limits: &Limits) -> Result<Vec<TwistingElement>, Error> {
        if !self.ring().is_finite() {
            return Err(Error::NotFinite);
        }
        let comp = self.module.component(-1);
        let candidates = vectors_on(self.ring(), self.dim(), &comp, limits)?;
        Ok(candidates.into_iter().filter(|t| self.twisting_residual(t).is_zero()).map(TwistingElement).collect())
    }

    /// All units of the degree-zero component (finite rings only).
    pub fn units(&self, limits: &Limits) -> Result<Vec<UnitGroupElement>, Error> {
        if !self.ring().is_finite() {
            return Err(Error::NotFinite);
        }
        let comp = self.module.component(0);
        let candidates = vectors_on(self.ring(), self.dim(), &comp, limits)?;
        let found: Vec<Option<UnitGroupElement>> = with_pool(limits.jobs, || {
            candidates.par_iter().map(|x| self.unit_element(x)).collect::<Result<Vec<_>, _>>()
        })?;
        Ok(found.into_iter().flatten().collect())
    }

    /// `D(A)`: the twisting elements partitioned into gauge orbits.
    pub fn functor_d(&self, limits: &Limits) -> Result<Vec<Orbit>, Error> {
        let twisting = self.enumerate_twisting_elements(limits)?;
        let units = self.units(limits)?;
        limits.check_work("|G|·|T(A)|", (units.len() as u128).checked_mul(twisting.len() as u128))?;
        let mut assigned: BTreeSet<Vector> = BTreeSet::new();
        let mut orbits = Vec::new();
        for y in &twisting {
            if assigned.contains(y.element()) {
                continue;
            }
            let members: BTreeSet<Vector> =
                with_pool(limits.jobs, || units.par_iter().map(|x| self.gauge_formula(x, y.element())).collect());
            assigned.extend(members.iter().cloned());
            let members: Vec<Vector> = members.into_iter().collect();
            orbits.push(Orbit { representative: members[0].clone(), members });
        }
        Ok(orbits)
    }

    /// Decides whether some unit `x` has `x * y = y'`.
    ///
    /// The condition is the linear equation `x y + Dx = y' x` in the
    /// degree-zero unknown `x`; units are then searched for in its solution
    /// space, exhaustively over finite rings and along integer specialisations
    /// of the kernel parameters otherwise.
    pub fn are_gauge_equivalent(
        &self,
        y: &TwistingElement,
        y2: &TwistingElement,
        limits: &Limits,
    ) -> Result<Equivalence<UnitGroupElement>, Error> {
        if y == y2 {
            return Ok(Equivalence::Equivalent(self.identity_unit()));
        }
        let comp = self.module.component(0);
        let cols: Vec<Vector> = comp
            .iter()
            .map(|&i| {
                let e = self.module.basis_vector(i);
                &(&self.mul(&e, y.element()) + &self.d(&e)) - &self.mul(y2.element(), &e)
            })
            .collect();
        let system = Matrix::from_columns(self.ring(), self.dim(), &cols);
        let embed = |coords: &Vector| {
            let mut x = self.module.zero();
            for (c, &i) in comp.iter().enumerate() {
                x[i] = coords[c].clone();
            }
            x
        };
        let kernel = match system.kernel() {
            Ok(k) => k,
            Err(Error::NonUnitPivot { .. }) if self.ring().is_finite() => {
                for x in self.units(limits)? {
                    if self.gauge_formula(&x, y.element()) == *y2.element() {
                        return Ok(Equivalence::Equivalent(x));
                    }
                }
                return Ok(Equivalence::Inequivalent);
            }
            Err(e) => return Err(e),
        };
        if kernel.is_empty() {
            return Ok(Equivalence::Inequivalent);
        }
        let ring = self.ring();
        let combine = |coeffs: &[Scalar]| {
            let mut acc = Vector::zeros(ring, comp.len());
            for (c, k) in coeffs.iter().zip(&kernel) {
                acc.add_scaled(c, k);
            }
            embed(&acc)
        };
        let check = |x: Vector| -> Result<Option<UnitGroupElement>, Error> {
            match self.unit_element(&x)? {
                Some(u) if self.gauge_formula(&u, y.element()) == *y2.element() => Ok(Some(u)),
                _ => Ok(None),
            }
        };
        if ring.is_finite() {
            let elements = ring.elements()?;
            let count = (elements.len() as u128).checked_pow(kernel.len() as u32);
            limits.check_work("unit search in solution space", count)?;
            for coeffs in crate::enumerate::combinations(&elements, kernel.len()) {
                if let Some(u) = check(combine(&coeffs))? {
                    return Ok(Equivalence::Equivalent(u));
                }
            }
            Ok(Equivalence::Inequivalent)
        } else {
            // det(L_x) on the degree-zero part has degree at most dim A_0 in
            // the kernel parameters, so if it is nonzero anywhere it is
            // nonzero somewhere on the grid {0..dim A_0}^k.
            let side = comp.len() as u128 + 1;
            let grid = side.checked_pow(kernel.len() as u32).filter(|&g| g <= limits.search_bound as u128);
            if grid.is_some() {
                let values: Vec<Scalar> = (0..side as i64).map(|c| ring.from_i64(c)).collect();
                for coeffs in crate::enumerate::combinations(&values, kernel.len()) {
                    if let Some(u) = check(combine(&coeffs))? {
                        return Ok(Equivalence::Equivalent(u));
                    }
                }
                return Ok(Equivalence::Inequivalent);
            }
            for t in integer_tuples(kernel.len(), limits.search_bound) {
                let coeffs: Vec<Scalar> = t.iter().map(|&c| ring.from_i64(c)).collect();
                if let Some(u) = check(combine(&coeffs))? {
                    return Ok(Equivalence::Equivalent(u));
                }
            }
            Ok(Equivalence::Undecided { bound: limits.search_bound })
        }
    }

    /// `d_τ(a) = Da - τa` for any degree -1 element `τ`. It squares to zero
    /// exactly when `τ` is a twisting element.
    pub fn twisted_operator(&self, tau: &Vector) -> Result<GradedMap, Error> {
        self.module.expect_degree(tau, -1)?;
        GradedMap::from_fn(self.module.clone(), self.module.clone(), -1, |i| {
            let e = self.module.basis_vector(i);
            &self.d(&e) - &self.mul(tau, &e)
        })
    }
}
