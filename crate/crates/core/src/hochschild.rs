//! Hochschild cochains of a finite-dimensional associative algebra, the
//! Gerstenhaber bracket, and formal deformations of the product.
//!
//! An `n`-cochain sits in degree `1 - n`, so deformation 2-cochains have
//! degree -1 like twisting elements. The differential of the Lie model is
//! `d = [μ, -] = (-1)^{n-1} δ`, which makes `dγ + ½[γ,γ] = 0` the
//! associativity of `μ + γ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::dga::DgAlgebra;
use crate::dgl::DgLieAlgebra;
use crate::graded::{
    independent_subset, BaseField, BasisElement, GradedMap, GradedModule, Matrix, Ring, Scalar, TruncatedRing, Vector,
};
use crate::Error;

/// Default highest stored arity.
pub const DEFAULT_MAX_ARITY: usize = 4;

/// An ungraded unital associative algebra, as a DGA concentrated in degree
/// zero with zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocAlgebra(DgAlgebra);

impl AssocAlgebra {
    pub fn new(a: DgAlgebra) -> Result<Self, Error> {
        if a.module().degrees().iter().any(|&d| d != 0) {
            return Err(Error::Incompatible("associative algebra must sit in degree 0".into()));
        }
        if !a.differential().is_zero() {
            return Err(Error::Incompatible("associative algebra must have zero differential".into()));
        }
        Ok(AssocAlgebra(a))
    }

    pub fn dga(&self) -> &DgAlgebra {
        &self.0
    }

    pub fn ring(&self) -> &Ring {
        self.0.ring()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        self.0.module()
    }

    /// Basis index of the unit, if the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        (0..self.dim()).find(|&i| *self.0.unit() == self.module().basis_vector(i))
    }

    /// The product as a 2-cochain.
    pub fn mu(&self) -> Cochain {
        let d = self.dim();
        let mut c = Cochain::zero(self.ring(), d, 2);
        for i in 0..d {
            for j in 0..d {
                for (k, x) in self.0.product_of_basis(i, j).support() {
                    c.set(&[i, j], k, x.clone());
                }
            }
        }
        c
    }
}

/// A multilinear map `B^{⊗n} → B`, stored densely: the coefficient of
/// output `o` on argument tuple `(a_1..a_n)` is at `(Σ a_i d^{n-i}) d + o`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cochain {
    arity: usize,
    dim: usize,
    values: Vector,
}

fn encode(args: &[usize], d: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * d + a)
}

fn decode(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

impl Cochain {
    pub fn zero(ring: &Ring, dim: usize, arity: usize) -> Cochain {
        Cochain { arity, dim, values: Vector::zeros(ring, dim.pow(arity as u32 + 1)) }
    }

    pub fn from_values(dim: usize, arity: usize, values: Vector) -> Result<Cochain, Error> {
        let len = dim.pow(arity as u32 + 1);
        if values.len() != len {
            return Err(Error::Incompatible(format!("an {arity}-cochain on a {dim}-dim algebra has {len} values")));
        }
        Ok(Cochain { arity, dim, values })
    }

    /// The cochain sending `args` to `e_out` and every other tuple to 0.
    pub fn elementary(ring: &Ring, dim: usize, args: &[usize], out: usize) -> Cochain {
        let mut c = Cochain::zero(ring, dim, args.len());
        c.set(args, out, ring.one());
        c
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &Vector {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    pub fn set(&mut self, args: &[usize], out: usize, value: Scalar) {
        self.values[encode(args, self.dim) * self.dim + out] = value;
    }

    /// `f(e_{a_1}, …, e_{a_n})` in basis coordinates.
    pub fn eval(&self, args: &[usize]) -> Vector {
        let base = encode(args, self.dim) * self.dim;
        Vector::from_coeffs(self.values.coeffs()[base..base + self.dim].to_vec())
    }

    /// `(args, out, coefficient)` for every nonzero value.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, usize, &Scalar)> {
        let (d, n) = (self.dim, self.arity);
        self.values.support().map(move |(p, c)| (decode(p / d, d, n), p % d, c))
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, Error> {
        if (self.arity, self.dim) != (other.arity, other.dim) {
            return Err(Error::Incompatible("cochains of different shape".into()));
        }
        Ok(Cochain { values: &self.values + &other.values, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> Cochain {
        Cochain { values: self.values.scale(c), ..self.clone() }
    }

    /// Vanishes whenever some argument is `e_unit`.
    pub fn is_normalized(&self, unit: usize) -> bool {
        self.terms().all(|(args, _, _)| !args.contains(&unit))
    }

    pub fn format(&self, b: &AssocAlgebra) -> String {
        let terms: Vec<String> =
            self.terms().map(|(args, o, c)| format!("{c}·{}", basis_name(b.module(), &args, o))).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn basis_name(m: &GradedModule, args: &[usize], out: usize) -> String {
    let args: Vec<&str> = args.iter().map(|&a| m.name(a)).collect();
    format!("({})->{}", args.join(","), m.name(out))
}

fn ring_of(c: &Cochain, fallback: &Ring) -> Ring {
    c.values.iter().next().map(|s| s.ring()).unwrap_or_else(|| fallback.clone())
}

/// Adds `sign · f ∘ g` into `acc`, term by term.
fn circle_into(acc: &mut BTreeMap<Vec<usize>, BTreeMap<usize, Scalar>>, f: &Cochain, g: &Cochain, negate: bool) {
    let n = g.arity;
    for (t, o, c) in f.terms() {
        for (s, o2, c2) in g.terms() {
            for i in 0..t.len() {
                if t[i] != o2 {
                    continue;
                }
                let mut args = t[..i].to_vec();
                args.extend_from_slice(&s);
                args.extend_from_slice(&t[i + 1..]);
                let odd = (i % 2 == 1 && n.is_multiple_of(2)) != negate;
                let cc = c * c2;
                let entry = acc.entry(args).or_default().entry(o).or_insert_with(|| cc.ring().zero());
                *entry = if odd { &*entry - &cc } else { &*entry + &cc };
            }
        }
    }
}

fn collect(ring: &Ring, d: usize, arity: usize, acc: BTreeMap<Vec<usize>, BTreeMap<usize, Scalar>>) -> Cochain {
    let mut out = Cochain::zero(ring, d, arity);
    for (args, outs) in acc {
        for (o, c) in outs {
            out.set(&args, o, c);
        }
    }
    out
}

fn check_shapes(f: &Cochain, g: &Cochain) -> Result<usize, Error> {
    if f.dim != g.dim {
        return Err(Error::Incompatible("cochains on different algebras".into()));
    }
    if f.arity + g.arity == 0 {
        return Err(Error::Incompatible("composition of two 0-cochains".into()));
    }
    Ok(f.arity + g.arity - 1)
}

/// `f ∘ g = Σ_i (-1)^{i(n-1)} f(a_1..a_i, g(a_{i+1}..a_{i+n}), …)` for an
/// `m`-cochain `f` and `n`-cochain `g`.
pub fn circle(f: &Cochain, g: &Cochain) -> Result<Cochain, Error> {
    let arity = check_shapes(f, g)?;
    let ring = ring_of(f, &ring_of(g, &Ring::Rationals));
    let mut acc = BTreeMap::new();
    circle_into(&mut acc, f, g, false);
    Ok(collect(&ring, f.dim, arity, acc))
}

/// `[f, g] = f ∘ g - (-1)^{(m-1)(n-1)} g ∘ f`.
pub fn bracket_unbounded(f: &Cochain, g: &Cochain) -> Result<Cochain, Error> {
    let arity = check_shapes(f, g)?;
    let ring = ring_of(f, &ring_of(g, &Ring::Rationals));
    let mut acc = BTreeMap::new();
    circle_into(&mut acc, f, g, false);
    let both_even_shift = (f.arity + 1) % 2 == 1 && (g.arity + 1) % 2 == 1;
    circle_into(&mut acc, g, f, !both_even_shift);
    Ok(collect(&ring, f.dim, arity, acc))
}

fn delta(b: &AssocAlgebra, f: &Cochain) -> Cochain {
    let (d, n) = (b.dim(), f.arity);
    let ring = b.ring();
    let a = b.dga();
    let m = b.module();
    let mut out = Cochain::zero(ring, d, n + 1);
    for p in 0..d.pow(n as u32 + 1) {
        let args = decode(p, d, n + 1);
        let mut v = a.mul(&m.basis_vector(args[0]), &f.eval(&args[1..]));
        for i in 0..n {
            let s = ring.sign(if i % 2 == 0 { -1 } else { 1 });
            for (k, c) in a.product_of_basis(args[i], args[i + 1]).support() {
                let mut inner = args[..i].to_vec();
                inner.push(k);
                inner.extend_from_slice(&args[i + 2..]);
                v.add_scaled(&(&s * c), &f.eval(&inner));
            }
        }
        let s = ring.sign(if n % 2 == 0 { -1 } else { 1 });
        v.add_scaled(&s, &a.mul(&f.eval(&args[..n]), &m.basis_vector(args[n])));
        for (o, c) in v.support() {
            out.values[p * d + o] = c.clone();
        }
    }
    out
}

/// Dimension and chosen representatives of `HH^n(B, B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HhCohomology {
    pub degree: usize,
    pub dim: usize,
    pub basis: Vec<Cochain>,
}

/// `C^n(B, B)` for `n ≤ max_arity`, with differential and bracket.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildComplex {
    algebra: AssocAlgebra,
    max_arity: usize,
}

impl HochschildComplex {
    pub fn new(algebra: &AssocAlgebra, max_arity: usize) -> Result<Self, Error> {
        if max_arity < 2 {
            return Err(Error::Truncation("the product needs arity 2".into()));
        }
        Ok(HochschildComplex { algebra: algebra.clone(), max_arity })
    }

    pub fn algebra(&self) -> &AssocAlgebra {
        &self.algebra
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn check(&self, f: &Cochain) -> Result<(), Error> {
        if f.dim != self.algebra.dim() {
            return Err(Error::Incompatible("cochain on a different algebra".into()));
        }
        if f.arity > self.max_arity {
            return Err(Error::Truncation(format!("arity {} exceeds {}", f.arity, self.max_arity)));
        }
        Ok(())
    }

    /// `(δf)(a_0..a_n) = a_0 f(a_1..) + Σ (-1)^{i+1} f(.., a_i a_{i+1}, ..) + (-1)^{n+1} f(..a_{n-1}) a_n`.
    pub fn differential(&self, f: &Cochain) -> Result<Cochain, Error> {
        self.check(f)?;
        if f.arity + 1 > self.max_arity {
            return Err(Error::Truncation(format!("δ of an {}-cochain exceeds arity {}", f.arity, self.max_arity)));
        }
        Ok(delta(&self.algebra, f))
    }

    pub fn bracket(&self, f: &Cochain, g: &Cochain) -> Result<Cochain, Error> {
        self.check(f)?;
        self.check(g)?;
        if f.arity + g.arity > self.max_arity + 1 {
            return Err(Error::Truncation(format!("bracket lands in arity {}", f.arity + g.arity - 1)));
        }
        bracket_unbounded(f, g)
    }

    /// Positions of `C^n` coordinates, all or only those of normalized
    /// cochains.
    fn coordinates(&self, n: usize, normalized: bool) -> Result<Vec<usize>, Error> {
        let d = self.algebra.dim();
        let unit = if normalized {
            Some(self.algebra.unit_index().ok_or_else(|| Error::Incompatible("unit is not a basis vector".into()))?)
        } else {
            None
        };
        Ok((0..d.pow(n as u32 + 1)).filter(|p| unit.is_none_or(|u| !decode(p / d, d, n).contains(&u))).collect())
    }

    /// Matrix of `δ: C^n → C^{n+1}` in the chosen coordinates.
    fn delta_matrix(&self, n: usize, normalized: bool) -> Result<Matrix, Error> {
        let d = self.algebra.dim();
        let ring = self.algebra.ring();
        let src = self.coordinates(n, normalized)?;
        let tgt = self.coordinates(n + 1, normalized)?;
        let cols: Vec<Vector> = src
            .iter()
            .map(|&p| {
                let mut f = Cochain::zero(ring, d, n);
                f.values[p] = ring.one();
                let df = delta(&self.algebra, &f);
                Vector::from_coeffs(tgt.iter().map(|&q| df.values[q].clone()).collect())
            })
            .collect();
        Ok(Matrix::from_columns(ring, tgt.len(), &cols))
    }

    /// `HH^n` as cycles modulo boundaries, on normalized or full cochains.
    pub fn cohomology(&self, n: usize, normalized: bool) -> Result<HhCohomology, Error> {
        if n > self.max_arity {
            return Err(Error::Truncation(format!("HH^{n} beyond arity {}", self.max_arity)));
        }
        let ring = self.algebra.ring();
        if !ring.is_field() {
            return Err(Error::NotAField(ring.descriptor()));
        }
        let d = self.algebra.dim();
        let coords = self.coordinates(n, normalized)?;
        let cycles = self.delta_matrix(n, normalized)?.kernel()?;
        let mut family: Vec<Vector> = if n == 0 {
            Vec::new()
        } else {
            let m = self.delta_matrix(n - 1, normalized)?;
            (0..m.cols()).map(|j| m.column(j)).collect()
        };
        let boundaries = family.len();
        family.extend(cycles.iter().cloned());
        let chosen = independent_subset(ring, coords.len(), &family)?;
        let basis: Vec<Cochain> = chosen
            .into_iter()
            .filter(|&i| i >= boundaries)
            .map(|i| {
                let mut f = Cochain::zero(ring, d, n);
                for (k, c) in family[i].support() {
                    f.values[coords[k]] = c.clone();
                }
                f
            })
            .collect();
        Ok(HhCohomology { degree: n, dim: basis.len(), basis })
    }

    /// The truncated Lie model `C^{1..=N}` with `C^n` in degree `1 - n`,
    /// bracket and `d = [μ, -]`, both set to zero beyond arity `N`.
    ///
    /// Arity-0 cochains are left out: without them arities never drop under
    /// the bracket, so the discarded part is an ideal and the truncation is
    /// again a DGL.
    pub fn dgl(&self) -> Result<HochschildDgl, Error> {
        let b = &self.algebra;
        let (d, top) = (b.dim(), self.max_arity);
        let ring = b.ring().clone();
        let mut offsets = vec![0; top + 2];
        let mut basis = Vec::new();
        for (n, offset) in offsets.iter_mut().enumerate().take(top + 1).skip(1) {
            *offset = basis.len();
            for p in 0..d.pow(n as u32) {
                let args = decode(p, d, n);
                for o in 0..d {
                    basis.push(BasisElement::new(basis_name(b.module(), &args, o), 1 - n as i32));
                }
            }
        }
        offsets[top + 1] = basis.len();
        let module = Arc::new(GradedModule::new(ring.clone(), basis)?);
        let total = module.dim();
        let arity_of = |q: usize| (1..=top).find(|&n| q < offsets[n + 1]).expect("index in range");
        let elementary = |q: usize| {
            let n = arity_of(q);
            let local = q - offsets[n];
            Cochain::elementary(&ring, d, &decode(local / d, d, n), local % d)
        };
        let embed = |c: &Cochain| -> Vec<(usize, Scalar)> {
            c.values.support().map(|(p, x)| (offsets[c.arity] + p, x.clone())).collect()
        };
        let elems: Vec<Cochain> = (0..total).map(elementary).collect();
        let mut bracket = vec![Vec::new(); total * total];
        for p in 0..total {
            for q in 0..total {
                if elems[p].arity + elems[q].arity - 1 <= top {
                    bracket[p * total + q] = embed(&bracket_unbounded(&elems[p], &elems[q])?);
                }
            }
        }
        let mu = b.mu();
        let images: Vec<Vector> = elems
            .iter()
            .map(|e| {
                let mut v = module.zero();
                if e.arity < top {
                    for (i, c) in embed(&bracket_unbounded(&mu, e).expect("shapes agree")) {
                        v[i] = c;
                    }
                }
                v
            })
            .collect();
        let differential = GradedMap::from_images(module.clone(), module.clone(), -1, images)?;
        let lie = DgLieAlgebra::from_sparse_unchecked(module, differential, bracket);
        Ok(HochschildDgl { lie, offsets, dim: d })
    }
}

/// The truncated Hochschild DGL with conversions to and from cochains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildDgl {
    lie: DgLieAlgebra,
    offsets: Vec<usize>,
    dim: usize,
}

impl HochschildDgl {
    pub fn lie(&self) -> &DgLieAlgebra {
        &self.lie
    }

    pub fn max_arity(&self) -> usize {
        self.offsets.len() - 2
    }

    pub fn element(&self, c: &Cochain) -> Result<Vector, Error> {
        if c.arity == 0 || c.arity > self.max_arity() || c.dim != self.dim {
            return Err(Error::Truncation(format!("arity {} is not stored", c.arity)));
        }
        let mut v = self.lie.module().zero();
        for (p, x) in c.values.support() {
            v[self.offsets[c.arity] + p] = x.clone();
        }
        Ok(v)
    }

    /// The arity-`n` component of an element.
    pub fn cochain(&self, v: &Vector, n: usize) -> Result<Cochain, Error> {
        if n == 0 || n > self.max_arity() {
            return Err(Error::Truncation(format!("arity {n} is not stored")));
        }
        let range = self.offsets[n]..self.offsets[n + 1];
        Cochain::from_values(self.dim, n, Vector::from_coeffs(v.coeffs()[range].to_vec()))
    }
}

/// Associativity of `μ + Σ γ_k t^k` at one order, computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderReport {
    pub order: usize,
    pub associative: bool,
    /// First basis triple whose associator has a nonzero `t^k` coefficient.
    pub failing_triple: Option<[usize; 3]>,
    /// `[μ, γ_k] + ½ Σ_{i+j=k} [γ_i, γ_j]`.
    pub mc_residual: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedProduct {
    /// `K[t]/(t^{N+1})`.
    pub ring: Ring,
    /// `μ_t(e_i, e_j)` at `i * dim + j`.
    pub structure: Vec<Vector>,
    pub orders: Vec<OrderReport>,
}

impl DeformedProduct {
    /// Associative modulo `t^{N+1}`.
    pub fn associative(&self) -> bool {
        self.orders.iter().all(|o| o.associative)
    }
}

fn base_field(ring: &Ring) -> Result<BaseField, Error> {
    match ring {
        Ring::Rationals => Ok(BaseField::Rationals),
        Ring::Prime(p) => Ok(BaseField::Prime(*p)),
        other => Err(Error::NotAField(other.descriptor())),
    }
}

/// Builds `μ_t = μ + Σ γ_k t^k` over `K[t]/(t^{N+1})` and decides
/// associativity order by order, by expanding associators in that ring and,
/// independently, from the MC residual of the Hochschild DGL. The two must
/// agree coefficient by coefficient.
pub fn deform_product(b: &AssocAlgebra, gammas: &[Cochain]) -> Result<DeformedProduct, Error> {
    let d = b.dim();
    let order = gammas.len();
    if order == 0 {
        return Err(Error::Truncation("at least one order is needed".into()));
    }
    for g in gammas {
        if g.arity != 2 || g.dim != d {
            return Err(Error::Incompatible("deformation terms are 2-cochains".into()));
        }
    }
    let half = b.ring().half().ok_or(Error::DividedSquareRequired)?;
    let truncated = TruncatedRing::new(base_field(b.ring())?, vec!["t".into()], order as u32)?;
    let rt = Ring::Truncated(truncated);
    let mut series = vec![b.mu()];
    series.extend(gammas.iter().cloned());
    let mut structure = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut v = Vector::zeros(&rt, d);
            for (k, g) in series.iter().enumerate() {
                for (o, c) in g.eval(&[i, j]).support() {
                    v[o] = &v[o] + &rt.monomial(k, c);
                }
            }
            structure.push(v);
        }
    }
    let mul = |x: &Vector, y: &Vector| {
        let mut out = Vector::zeros(&rt, d);
        for (i, a) in x.support() {
            for (j, c) in y.support() {
                out.add_scaled(&(a * c), &structure[i * d + j]);
            }
        }
        out
    };
    let e = |i: usize| Vector::unit(&rt, d, i);
    let mut associators = Vec::with_capacity(d * d * d);
    for a in 0..d {
        for bb in 0..d {
            for c in 0..d {
                associators.push(&mul(&structure[a * d + bb], &e(c)) - &mul(&e(a), &structure[bb * d + c]));
            }
        }
    }
    let hc = HochschildComplex::new(b, 3)?;
    let mut orders = Vec::with_capacity(order);
    for k in 1..=order {
        let mut residual = hc.bracket(&series[0], &series[k])?;
        for i in 1..k {
            residual = residual.add(&hc.bracket(&series[i], &series[k - i])?.scale(&half))?;
        }
        let mut failing = None;
        for (p, assoc) in associators.iter().enumerate() {
            let args = decode(p, d, 3);
            let coeff = Vector::from_coeffs(assoc.iter().map(|s| s.coefficient(k)).collect());
            if coeff != residual.eval(&args) {
                return Err(Error::Internal(format!("associator and MC residual disagree at order {k}")));
            }
            if failing.is_none() && !coeff.is_zero() {
                failing = Some([args[0], args[1], args[2]]);
            }
        }
        orders.push(OrderReport {
            order: k,
            associative: failing.is_none(),
            failing_triple: failing,
            mc_residual: residual,
        });
    }
    Ok(DeformedProduct { ring: rt, structure, orders })
}

/// Dimension and basis of `HH^n(B, B)`, on normalized cochains when the
/// unit is a basis vector.
pub fn hh_cohomology(hc: &HochschildComplex, n: usize) -> Result<HhCohomology, Error> {
    hc.cohomology(n, hc.algebra().unit_index().is_some())
}

pub fn hochschild_differential(hc: &HochschildComplex, f: &Cochain) -> Result<Cochain, Error> {
    hc.differential(f)
}

pub fn gerstenhaber_bracket(hc: &HochschildComplex, f: &Cochain, g: &Cochain) -> Result<Cochain, Error> {
    hc.bracket(f, g)
}
