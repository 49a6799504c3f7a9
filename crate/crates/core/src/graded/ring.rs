//! Exact coefficient rings.
//!
//! Four families are supported: the rationals (arbitrary precision), prime
//! fields `F_p`, and truncated polynomial rings `K[t_1..t_k]/m^{n+1}` over
//! either of those, where every monomial of total degree `n + 1` vanishes.
//! Dual numbers are the one-variable, order-one case.
//!
//! A [`Scalar`] carries enough of its ring to do arithmetic on its own, so the
//! usual operators work directly. Mixing scalars from different rings is a
//! programming error and panics.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Ground field of a truncated polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    pub fn ring(&self) -> Ring {
        match self {
            BaseField::Rationals => Ring::Rationals,
            BaseField::Prime(p) => Ring::Prime(*p),
        }
    }
}

/// `K[t_1..t_k]` modulo all monomials of total degree `order + 1`.
///
/// Monomials are stored graded-lexicographically; index 0 is the constant
/// monomial.
pub struct TruncatedRing {
    base: BaseField,
    vars: Vec<String>,
    order: u32,
    monomials: Vec<Vec<u32>>,
    products: Vec<Vec<Option<usize>>>,
}

impl TruncatedRing {
    pub fn new(base: BaseField, vars: Vec<String>, order: u32) -> Result<Arc<Self>, Error> {
        if vars.is_empty() {
            return Err(Error::InvalidRing("truncated ring needs at least one variable".into()));
        }
        if let BaseField::Prime(p) = base {
            if !is_prime(p) {
                return Err(Error::InvalidRing(format!("{p} is not prime")));
            }
        }
        let k = vars.len();
        let mut monomials = Vec::new();
        for total in 0..=order {
            let mut layer = Vec::new();
            exponent_vectors(k, total, &mut vec![0; k], 0, &mut layer);
            layer.sort_by(|a, b| b.cmp(a));
            monomials.extend(layer);
        }
        let index: HashMap<Vec<u32>, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let products = monomials
            .iter()
            .map(|a| {
                monomials
                    .iter()
                    .map(|b| {
                        let m: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&m).copied()
                    })
                    .collect()
            })
            .collect();
        Ok(Arc::new(TruncatedRing { base, vars, order, monomials, products }))
    }

    /// `K[t]/(t^{order+1})`.
    pub fn univariate(base: BaseField, var: &str, order: u32) -> Result<Arc<Self>, Error> {
        Self::new(base, vec![var.to_string()], order)
    }

    /// `Q[eps]/(eps^2)`.
    pub fn dual_numbers() -> Arc<Self> {
        Self::new(BaseField::Rationals, vec!["eps".into()], 1).expect("valid ring")
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Socle degree: the largest surviving total degree.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn monomial_degree(&self, i: usize) -> u32 {
        self.monomials[i].iter().sum()
    }

    pub fn monomial_product(&self, i: usize, j: usize) -> Option<usize> {
        self.products[i][j]
    }

    pub fn monomial_index(&self, exponents: &[u32]) -> Option<usize> {
        self.monomials.iter().position(|m| m == exponents)
    }

    pub fn format_monomial(&self, i: usize) -> String {
        let parts: Vec<String> = self.monomials[i]
            .iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn descriptor(&self) -> String {
        let base = BaseField::ring(&self.base).descriptor();
        if self.vars.len() == 1 {
            format!("{base}[{v}]/{v}^{}", self.order + 1, v = self.vars[0])
        } else {
            format!("{base}[{}]/m^{}", self.vars.join(","), self.order + 1)
        }
    }
}

fn exponent_vectors(k: usize, remaining: u32, cur: &mut Vec<u32>, pos: usize, out: &mut Vec<Vec<u32>>) {
    if pos + 1 == k {
        cur[pos] = remaining;
        out.push(cur.clone());
        return;
    }
    for e in 0..=remaining {
        cur[pos] = e;
        exponent_vectors(k, remaining - e, cur, pos + 1, out);
    }
}

impl PartialEq for TruncatedRing {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.vars == other.vars && self.order == other.order
    }
}

impl Eq for TruncatedRing {}

impl Hash for TruncatedRing {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.vars.hash(state);
        self.order.hash(state);
    }
}

impl fmt::Debug for TruncatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

/// Ring tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rationals,
    Prime(u64),
    Truncated(Arc<TruncatedRing>),
}

impl Ring {
    pub fn prime(p: u64) -> Result<Ring, Error> {
        if is_prime(p) {
            Ok(Ring::Prime(p))
        } else {
            Err(Error::InvalidRing(format!("{p} is not prime")))
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Ring::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Ring::Prime(p) => Scalar::Mod { value: n.rem_euclid(*p as i64) as u64, modulus: *p },
            Ring::Truncated(t) => {
                let base = t.base.ring();
                let mut coeffs = vec![base.zero(); t.dim()];
                coeffs[0] = base.from_i64(n);
                Scalar::Series { ring: t.clone(), coeffs }
            }
        }
    }

    /// `(-1)^parity` as a ring element.
    pub fn sign(&self, s: i32) -> Scalar {
        self.from_i64(s as i64)
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Option<Scalar> {
        self.from_i64(den).inverse().map(|inv| self.from_i64(num) * inv)
    }

    /// The element `c * monomial` of a truncated ring.
    pub fn monomial(&self, index: usize, c: &Scalar) -> Scalar {
        match self {
            Ring::Truncated(t) => {
                let base = t.base.ring();
                let mut coeffs = vec![base.zero(); t.dim()];
                coeffs[index] = c.clone();
                Scalar::Series { ring: t.clone(), coeffs }
            }
            _ => {
                assert_eq!(index, 0, "only the constant monomial exists");
                c.clone()
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Ring::Rationals => 0,
            Ring::Prime(p) => *p,
            Ring::Truncated(t) => t.base.ring().characteristic(),
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Truncated(_))
    }

    pub fn is_finite(&self) -> bool {
        self.characteristic() != 0
    }

    pub fn cardinality(&self) -> Option<u128> {
        match self {
            Ring::Rationals => None,
            Ring::Prime(p) => Some(*p as u128),
            Ring::Truncated(t) => {
                let p = t.base.ring().cardinality()?;
                p.checked_pow(t.dim() as u32)
            }
        }
    }

    /// Every element, in the order used for deterministic representatives.
    pub fn elements(&self) -> Result<Vec<Scalar>, Error> {
        match self {
            Ring::Rationals => Err(Error::NotFinite),
            Ring::Prime(p) => Ok((0..*p).map(|v| Scalar::Mod { value: v, modulus: *p }).collect()),
            Ring::Truncated(t) => {
                let base = t.base.ring().elements()?;
                let n = t.dim();
                let total = self.cardinality().ok_or(Error::NotFinite)?;
                let mut out = Vec::with_capacity(total as usize);
                let mut digits = vec![0usize; n];
                loop {
                    let coeffs = digits.iter().map(|&d| base[d].clone()).collect();
                    out.push(Scalar::Series { ring: t.clone(), coeffs });
                    let mut i = n;
                    loop {
                        if i == 0 {
                            return Ok(out);
                        }
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < base.len() {
                            break;
                        }
                        digits[i] = 0;
                    }
                }
            }
        }
    }

    /// `1/2`, when it exists.
    pub fn half(&self) -> Option<Scalar> {
        self.from_i64(2).inverse()
    }

    /// Descriptor string as used in presentation files.
    pub fn descriptor(&self) -> String {
        match self {
            Ring::Rationals => "Q".into(),
            Ring::Prime(p) => format!("Fp:{p}"),
            Ring::Truncated(t) => t.descriptor(),
        }
    }

    /// Parses descriptors such as `Q`, `Fp:5`, `Q[t]/t^3`, `Q[eps]/eps^2`,
    /// `Fp:5[t]/t^2` and `Q[t1,t2]/m^3`.
    pub fn parse_descriptor(s: &str) -> Result<Ring, Error> {
        let s = s.trim();
        let bad = || Error::InvalidRing(format!("unrecognised scalar ring descriptor `{s}`"));
        let (base_part, rest) = match s.find('[') {
            Some(i) => (&s[..i], Some(&s[i..])),
            None => (s, None),
        };
        let base = if base_part == "Q" {
            BaseField::Rationals
        } else if let Some(p) = base_part.strip_prefix("Fp:") {
            let p: u64 = p.parse().map_err(|_| bad())?;
            if !is_prime(p) {
                return Err(Error::InvalidRing(format!("Fp:{p}: {p} is not prime")));
            }
            BaseField::Prime(p)
        } else {
            return Err(bad());
        };
        let Some(rest) = rest else {
            return Ok(base.ring());
        };
        let close = rest.find(']').ok_or_else(bad)?;
        let vars: Vec<String> = rest[1..close].split(',').map(|v| v.trim().to_string()).collect();
        if vars.iter().any(|v| v.is_empty() || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')) {
            return Err(bad());
        }
        let quotient = rest[close + 1..].strip_prefix('/').ok_or_else(bad)?;
        let (name, power) = quotient.split_once('^').ok_or_else(bad)?;
        let power: u32 = power.parse().map_err(|_| bad())?;
        let name_ok = if vars.len() == 1 { name == vars[0] || name == "m" } else { name == "m" };
        if !name_ok || power == 0 {
            return Err(bad());
        }
        Ok(Ring::Truncated(TruncatedRing::new(base, vars, power - 1)?))
    }

    /// Parses a coefficient written in this ring: integers, `p/q`, or for
    /// truncated rings a sum such as `1 - 2*t + 1/3*t^2`.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, Error> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("`{s}` is not an element of {}", self.descriptor()));
        if text.is_empty() {
            return Err(bad());
        }
        match self {
            Ring::Rationals | Ring::Prime(_) => parse_number(self, &text).ok_or_else(bad),
            Ring::Truncated(t) => {
                let base = t.base.ring();
                let mut acc = self.zero();
                for (negative, term) in split_terms(&text).ok_or_else(bad)? {
                    let mut coeff = base.one();
                    let mut exps = vec![0u32; t.vars.len()];
                    for factor in term.split('*') {
                        let (name, e) = match factor.split_once('^') {
                            Some((n, e)) => (n, e.parse::<u32>().map_err(|_| bad())?),
                            None => (factor, 1),
                        };
                        if let Some(v) = t.vars.iter().position(|v| v == name) {
                            exps[v] += e;
                        } else if e == 1 {
                            coeff = coeff * parse_number(&base, name).ok_or_else(bad)?;
                        } else {
                            return Err(bad());
                        }
                    }
                    if negative {
                        coeff = -coeff;
                    }
                    let total: u32 = exps.iter().sum();
                    if total > t.order {
                        continue;
                    }
                    let idx = t.monomial_index(&exps).ok_or_else(bad)?;
                    acc = acc + self.monomial(idx, &coeff);
                }
                Ok(acc)
            }
        }
    }
}

fn split_terms(text: &str) -> Option<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut start = 0;
    let mut negative = false;
    if bytes[0] == b'-' || bytes[0] == b'+' {
        negative = bytes[0] == b'-';
        start = 1;
    }
    let mut i = start;
    while i < bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^' {
            out.push((negative, &text[start..i]));
            negative = bytes[i] == b'-';
            start = i + 1;
        }
        i += 1;
    }
    out.push((negative, &text[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        None
    } else {
        Some(out)
    }
}

fn parse_number(ring: &Ring, s: &str) -> Option<Scalar> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    if num.is_empty() || den.is_empty() || !num.chars().chain(den.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    let value = match ring {
        Ring::Rationals => Scalar::Rational(BigRational::new(num, den)),
        Ring::Prime(p) => {
            let pb = BigInt::from(*p);
            let n = num.mod_floor(&pb).to_u64()?;
            let d = den.mod_floor(&pb).to_u64()?;
            let n = Scalar::Mod { value: n, modulus: *p };
            let d = Scalar::Mod { value: d, modulus: *p };
            n * d.inverse()?
        }
        Ring::Truncated(_) => return None,
    };
    Some(if neg { -value } else { value })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of one of the supported rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, modulus: u64 },
    Series { ring: Arc<TruncatedRing>, coeffs: Vec<Scalar> },
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Rational(_) => Ring::Rationals,
            Scalar::Mod { modulus, .. } => Ring::Prime(*modulus),
            Scalar::Series { ring, .. } => Ring::Truncated(ring.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Series { coeffs, .. } => coeffs.iter().all(Scalar::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Series { coeffs, .. } => coeffs[0].is_one() && coeffs[1..].iter().all(Scalar::is_zero),
        }
    }

    /// Units are the nonzero elements of a field and, in a truncated ring,
    /// the elements with a nonzero constant term.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Series { coeffs, .. } => !coeffs[0].is_zero(),
            _ => !self.is_zero(),
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => (!q.is_zero()).then(|| Scalar::Rational(q.recip())),
            Scalar::Mod { value, modulus } => {
                if *value == 0 {
                    return None;
                }
                let (g, x, _) = ext_gcd(*value as i128, *modulus as i128);
                if g != 1 {
                    return None;
                }
                Some(Scalar::Mod { value: x.rem_euclid(*modulus as i128) as u64, modulus: *modulus })
            }
            Scalar::Series { ring, coeffs } => {
                let c_inv = coeffs[0].inverse()?;
                let r = Ring::Truncated(ring.clone());
                // self = c (1 + n) with n nilpotent
                let normalized = self.clone() * r.monomial(0, &c_inv);
                let n = normalized - r.one();
                let mut term = r.one();
                let mut acc = r.one();
                for _ in 0..ring.order {
                    term = -(term * n.clone());
                    acc = acc + term.clone();
                }
                Some(acc * r.monomial(0, &c_inv))
            }
        }
    }

    /// Coefficient of the given monomial in a truncated ring element; for
    /// field elements only index 0 is meaningful.
    pub fn coefficient(&self, monomial: usize) -> Scalar {
        match self {
            Scalar::Series { coeffs, .. } => coeffs[monomial].clone(),
            _ => {
                if monomial == 0 {
                    self.clone()
                } else {
                    self.ring().zero()
                }
            }
        }
    }

    /// Integer representative used for enumeration order over prime fields.
    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            _ => None,
        }
    }

    fn variant(&self) -> u8 {
        match self {
            Scalar::Rational(_) => 0,
            Scalar::Mod { .. } => 1,
            Scalar::Series { .. } => 2,
        }
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Mod { value: a, .. }, Scalar::Mod { value: b, .. }) => a.cmp(b),
            (Scalar::Series { coeffs: a, .. }, Scalar::Series { coeffs: b, .. }) => a.cmp(b),
            _ => self.variant().cmp(&other.variant()),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar ring mismatch: {} vs {}", a.ring().descriptor(), b.ring().descriptor())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Series { ring, coeffs: a }, Scalar::Series { ring: r2, coeffs: b })
                if Arc::ptr_eq(ring, r2) || ring == r2 =>
            {
                Scalar::Series { ring: ring.clone(), coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect() }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) if p == q => {
                Scalar::Mod { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            (Scalar::Series { ring, coeffs: a }, Scalar::Series { ring: r2, coeffs: b })
                if Arc::ptr_eq(ring, r2) || ring == r2 =>
            {
                let base = ring.base.ring();
                let mut out = vec![base.zero(); ring.dim()];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        if let Some(k) = ring.products[i][j] {
                            out[k] = &out[k] + &(x * y);
                        }
                    }
                }
                Scalar::Series { ring: ring.clone(), coeffs: out }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, modulus } => {
                Scalar::Mod { value: if *value == 0 { 0 } else { modulus - value }, modulus: *modulus }
            }
            Scalar::Series { ring, coeffs } => {
                Scalar::Series { ring: ring.clone(), coeffs: coeffs.iter().map(|c| -c).collect() }
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", fmt_rational(q)),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Series { ring, coeffs } => {
                let mut first = true;
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (negative, mag) = match c {
                        Scalar::Rational(q) if q.is_negative() => (true, Scalar::Rational(-q)),
                        _ => (false, c.clone()),
                    };
                    let body = if i == 0 {
                        mag.to_string()
                    } else if mag.is_one() {
                        ring.format_monomial(i)
                    } else {
                        format!("{}*{}", mag, ring.format_monomial(i))
                    };
                    match (first, negative) {
                        (true, false) => write!(f, "{body}")?,
                        (true, true) => write!(f, "-{body}")?,
                        (false, false) => write!(f, " + {body}")?,
                        (false, true) => write!(f, " - {body}")?,
                    }
                    first = false;
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}
