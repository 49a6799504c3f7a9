use std::sync::Arc;

use super::{validate_coalgebra, DgCoalgebra, DgCoalgebraData};
use crate::graded::{BasisElement, GradedModule, Ring};
use crate::Error;

/// Symmetric coalgebra on a graded space, in the divided-power basis
/// `x^(α)`, truncated at total word length `N`.
///
/// `Δ x^(α) = Σ_{β+γ=α} ± x^(β) ⊗ x^(γ)` with no binomial coefficients;
/// the sign is the Koszul sign of moving odd generators past each other.
/// Odd generators appear with exponent at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCoalgebra {
    generators: Vec<BasisElement>,
    exponents: Vec<Vec<u32>>,
    coalgebra: DgCoalgebra,
}

fn monomial_name(generators: &[BasisElement], alpha: &[u32]) -> String {
    if generators.len() == 1 {
        return format!("{}{}", generators[0].name, alpha[0]);
    }
    let parts: Vec<String> = generators
        .iter()
        .zip(alpha)
        .filter(|(_, &a)| a > 0)
        .map(|(g, &a)| if a == 1 { g.name.clone() } else { format!("{}^({a})", g.name) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn exponent_vectors(generators: &[BasisElement], n: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![Vec::new()];
    for g in generators {
        let cap = if g.degree.rem_euclid(2) == 1 { 1.min(n) } else { n };
        all = all.into_iter().flat_map(|p| (0..=cap).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    all.retain(|a| a.iter().sum::<u32>() <= n);
    // Shorter words first; within a length, earlier generators first.
    all.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then(b.cmp(a)));
    all
}

/// Builds the symmetric coalgebra on `generators` up to word length `n`.
///
/// With a single generator `g` the basis is named `g0, g1, …, gN`.
pub fn symmetric_coalgebra(ring: &Ring, generators: &[BasisElement], n: u32) -> Result<SymmetricCoalgebra, Error> {
    if n < 1 {
        return Err(Error::Truncation("word length must be at least 1".into()));
    }
    let exponents = exponent_vectors(generators, n);
    let deg = |alpha: &[u32]| -> i32 { generators.iter().zip(alpha).map(|(g, &a)| g.degree * a as i32).sum() };
    let basis = exponents.iter().map(|a| BasisElement::new(monomial_name(generators, a), deg(a))).collect();
    let module = Arc::new(GradedModule::new(ring.clone(), basis)?);
    let index = |alpha: &[u32]| exponents.iter().position(|a| a == alpha);
    let mut coproduct = Vec::with_capacity(exponents.len());
    for alpha in &exponents {
        let mut terms = Vec::new();
        let splits: Vec<Vec<u32>> = alpha.iter().fold(vec![Vec::new()], |acc, &a| {
            acc.into_iter().flat_map(|p| (0..=a).map(move |b| [p.clone(), vec![b]].concat())).collect()
        });
        for beta in splits {
            let gamma: Vec<u32> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
            // Right part of factor i passes the left parts of factors j > i.
            let mut exponent = 0i64;
            for i in 0..generators.len() {
                for j in i + 1..generators.len() {
                    exponent += (gamma[i] as i64 * generators[i].degree as i64)
                        * (beta[j] as i64 * generators[j].degree as i64);
                }
            }
            let sign = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
            let (b, g) = (index(&beta).expect("split stays in range"), index(&gamma).expect("split stays in range"));
            terms.push((b, g, ring.sign(sign)));
        }
        coproduct.push(terms);
    }
    let unit = index(&vec![0; generators.len()]).expect("empty word present");
    let data = DgCoalgebraData {
        differential: vec![module.zero(); module.dim()],
        counit: (0..module.dim()).map(|i| if i == unit { ring.one() } else { ring.zero() }).collect(),
        coaugmentation: module.basis_vector(unit),
        module,
        coproduct,
        cocommutative: true,
    };
    let coalgebra = validate_coalgebra(&data)?;
    Ok(SymmetricCoalgebra { generators: generators.to_vec(), exponents, coalgebra })
}

impl SymmetricCoalgebra {
    pub fn coalgebra(&self) -> &DgCoalgebra {
        &self.coalgebra
    }

    pub fn generators(&self) -> &[BasisElement] {
        &self.generators
    }

    /// Exponent vector of each basis element.
    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    pub fn index_of(&self, alpha: &[u32]) -> Option<usize> {
        self.exponents.iter().position(|a| a == alpha)
    }

    pub fn max_length(&self) -> u32 {
        self.exponents.iter().map(|a| a.iter().sum()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::Tensor;

    fn xi(n: u32) -> SymmetricCoalgebra {
        symmetric_coalgebra(&Ring::Rationals, &[BasisElement::new("xi", 0)], n).unwrap()
    }

    #[test]
    fn one_generator_coproduct() {
        let s = xi(4);
        let c = s.coalgebra();
        let names: Vec<&str> = (0..c.dim()).map(|i| c.module().name(i)).collect();
        assert_eq!(names, vec!["xi0", "xi1", "xi2", "xi3", "xi4"]);
        let d2: Vec<(usize, usize)> = c.coproduct_of_basis(2).iter().map(|(a, b, _)| (*a, *b)).collect();
        let mut sorted = d2.clone();
        sorted.sort();
        assert_eq!(sorted, vec![(0, 2), (1, 1), (2, 0)]);
        assert!(c.coproduct_of_basis(2).iter().all(|(_, _, x)| x.is_one()));
        assert!(c.counit_of_basis(0).is_one());
        assert!(c.counit_of_basis(1).is_zero());
        assert_eq!(c.coaugmentation_filtration().unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn two_generator_coproduct() {
        let r = Ring::Rationals;
        let s = symmetric_coalgebra(&r, &[BasisElement::new("x", 0), BasisElement::new("y", 0)], 3).unwrap();
        let c = s.coalgebra();
        let xy = c.module().lookup("x*y").unwrap();
        let got = c.coproduct(&c.module().basis_vector(xy));
        let mut want = Tensor::new();
        for (a, b) in [("1", "x*y"), ("x", "y"), ("y", "x"), ("x*y", "1")] {
            want.insert(vec![c.module().lookup(a).unwrap(), c.module().lookup(b).unwrap()], r.one());
        }
        assert_eq!(got, want);
        assert_eq!(c.dim(), 10);
    }

    #[test]
    fn odd_generators_carry_signs() {
        let r = Ring::Rationals;
        let s = symmetric_coalgebra(&r, &[BasisElement::new("p", -1), BasisElement::new("q", -1)], 2).unwrap();
        let c = s.coalgebra();
        assert_eq!(c.dim(), 4);
        let pq = c.module().lookup("p*q").unwrap();
        let (p, q) = (c.module().lookup("p").unwrap(), c.module().lookup("q").unwrap());
        let got = c.coproduct(&c.module().basis_vector(pq));
        assert_eq!(got[&vec![p, q]], r.one());
        assert_eq!(got[&vec![q, p]], r.from_i64(-1));
    }

    #[test]
    fn truncation_must_be_positive() {
        assert!(matches!(
            symmetric_coalgebra(&Ring::Rationals, &[BasisElement::new("xi", 0)], 0),
            Err(Error::Truncation(_))
        ));
    }
}
