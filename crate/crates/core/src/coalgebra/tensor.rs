use std::collections::HashMap;
use std::sync::Arc;

use super::{validate_coalgebra, DgCoalgebra, DgCoalgebraData};
use crate::graded::{koszul_sign, BasisElement, GradedMap, GradedModule, Vector};
use crate::Error;

/// Tensor coalgebra `T^c(V)` on words of length at most `N`, with the
/// deconcatenation coproduct. Words are named by joining letters with `|`;
/// the empty word is `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorCoalgebra {
    generators: Arc<GradedModule>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    coalgebra: DgCoalgebra,
    max_length: usize,
}

pub fn tensor_coalgebra(generators: Arc<GradedModule>, n: usize) -> Result<TensorCoalgebra, Error> {
    if n < 1 {
        return Err(Error::Truncation("word length must be at least 1".into()));
    }
    let ring = generators.ring().clone();
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..n {
        layer = layer.iter().flat_map(|w| (0..generators.dim()).map(move |g| [w.clone(), vec![g]].concat())).collect();
        words.extend(layer.iter().cloned());
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let name = |w: &[usize]| {
        if w.is_empty() {
            "1".to_string()
        } else {
            w.iter().map(|&g| generators.name(g)).collect::<Vec<_>>().join("|")
        }
    };
    let basis =
        words.iter().map(|w| BasisElement::new(name(w), w.iter().map(|&g| generators.degree(g)).sum())).collect();
    let module = Arc::new(GradedModule::new(ring.clone(), basis)?);
    let coproduct =
        words.iter().map(|w| (0..=w.len()).map(|k| (index[&w[..k]], index[&w[k..]], ring.one())).collect()).collect();
    let data = DgCoalgebraData {
        differential: vec![module.zero(); module.dim()],
        counit: (0..words.len()).map(|i| if i == 0 { ring.one() } else { ring.zero() }).collect(),
        coaugmentation: module.basis_vector(0),
        module,
        coproduct,
        cocommutative: false,
    };
    let coalgebra = validate_coalgebra(&data)?;
    Ok(TensorCoalgebra { generators, words, index, coalgebra, max_length: n })
}

impl TensorCoalgebra {
    pub fn coalgebra(&self) -> &DgCoalgebra {
        &self.coalgebra
    }

    pub fn generators(&self) -> &Arc<GradedModule> {
        &self.generators
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn word_index(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn word_degree(&self, word: &[usize]) -> i32 {
        word.iter().map(|&g| self.generators.degree(g)).sum()
    }

    /// Indices of the words of the given length.
    pub fn words_of_length(&self, n: usize) -> Vec<usize> {
        (0..self.words.len()).filter(|&i| self.words[i].len() == n).collect()
    }
}

/// The coderivation of degree -1 whose projection to word length one is
/// `components[w]` on each word `w` (given in coordinates of the generator
/// space):
///
/// `δ(v_1…v_n) = Σ (-1)^{|v_1…v_i|} v_1…v_i ⊗ π δ(v_{i+1}…v_{i+k}) ⊗ v_{i+k+1}…v_n`.
pub fn coderivation_from_corestrictions(t: &TensorCoalgebra, components: &[Vector]) -> Result<GradedMap, Error> {
    let module = t.coalgebra.module().clone();
    if components.len() != t.words.len() {
        return Err(Error::Incompatible("one corestriction per word is required".into()));
    }
    if !components[0].is_zero() {
        return Err(Error::Incompatible("a coderivation vanishes on the empty word".into()));
    }
    for (w, comp) in t.words.iter().zip(components) {
        if let Some((g, _)) = comp.support().find(|(g, _)| t.generators.degree(*g) != t.word_degree(w) - 1) {
            return Err(Error::MapDegree {
                source_basis: module.name(t.index[w]).to_string(),
                target_basis: t.generators.name(g).to_string(),
                degree: -1,
            });
        }
    }
    let ring = module.ring().clone();
    GradedMap::from_fn(module.clone(), module.clone(), -1, |i| {
        let w = &t.words[i];
        let mut out = module.zero();
        for start in 0..w.len() {
            let sign = ring.sign(koszul_sign(-1, t.word_degree(&w[..start])));
            for end in start + 1..=w.len() {
                let comp = &components[t.index[&w[start..end]]];
                for (g, c) in comp.support() {
                    let mut word = w[..start].to_vec();
                    word.push(g);
                    word.extend_from_slice(&w[end..]);
                    let j = t.index[&word];
                    out[j] = &out[j] + &(c * &sign);
                }
            }
        }
        out
    })
}
