use std::collections::BTreeMap;
use std::sync::Arc;

use super::linalg::{independent_subset, solve_linear, LinearSolution, Matrix, Vector};
use super::module::{GradedMap, GradedModule};
use crate::Error;

/// Finite chain complex: a graded module with a degree -1 map squaring to zero.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    module: Arc<GradedModule>,
    differential: GradedMap,
}

impl ChainComplex {
    pub fn new(differential: GradedMap) -> Result<Self, Error> {
        if differential.degree() != -1 || differential.source() != differential.target() {
            return Err(Error::Incompatible("a differential is an endomorphism of degree -1".into()));
        }
        let module = differential.source().clone();
        let c = ChainComplex { module, differential };
        if let Some(i) = c.square_witness() {
            return Err(Error::NotAComplex(c.module.name(i).to_string()));
        }
        Ok(c)
    }

    /// Accepts `differential` without checking `d∘d = 0`.
    pub fn new_unchecked(differential: GradedMap) -> Self {
        ChainComplex { module: differential.source().clone(), differential }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn differential(&self) -> &GradedMap {
        &self.differential
    }

    /// First basis element on which `d∘d` is nonzero.
    pub fn square_witness(&self) -> Option<usize> {
        (0..self.module.dim()).find(|&i| !self.differential.apply(&self.differential.image(i)).is_zero())
    }

    /// Homology dimensions per degree (field coefficients only).
    pub fn homology_dims(&self) -> Result<BTreeMap<i32, usize>, Error> {
        if !self.module.ring().is_field() {
            return Err(Error::NotAField(self.module.ring().descriptor()));
        }
        let mut out = BTreeMap::new();
        for k in self.module.degrees() {
            let dim = self.module.component(k).len();
            let rank_out = self.differential.block(k).rank()?;
            let rank_in = self.differential.block(k + 1).rank()?;
            out.insert(k, dim - rank_out - rank_in);
        }
        Ok(out)
    }
}

/// Decomposition `C = H ⊕ B ⊕ W` of a complex over a field, where `B` is the
/// image of `d`, `H ⊕ B` the cycles, and `d : W → B` an isomorphism, together
/// with the homotopy `h` inverting `d` on `B` and vanishing on `H ⊕ W`.
///
/// Then `dh + hd = 1 - π_H`, `hh = 0`, `h π_H = 0` and `π_H h = 0`.
#[derive(Clone, Debug)]
pub struct ComplexSplitting {
    complex: ChainComplex,
    harmonic: Vec<Vector>,
    harmonic_degrees: Vec<i32>,
    boundaries: Vec<Vector>,
    residual: Vec<Vector>,
    /// Coordinates of each basis vector in the H basis.
    harmonic_coords: Vec<Vec<(usize, crate::Scalar)>>,
    proj_h: GradedMap,
    proj_b: GradedMap,
    proj_w: GradedMap,
    homotopy: GradedMap,
}

impl ComplexSplitting {
    /// Builds the splitting by deterministic elimination. Cycles in
    /// `preferred` are taken as harmonic representatives before any others.
    pub fn new(complex: ChainComplex, preferred: &[Vector]) -> Result<Self, Error> {
        let module = complex.module().clone();
        let ring = module.ring().clone();
        if !ring.is_field() {
            return Err(Error::NotAField(ring.descriptor()));
        }
        let n = module.dim();
        let d = complex.differential();
        let degrees = module.degrees();

        // W_k: standard basis vectors completing the cycles Z_k.
        let mut cycles: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        let mut residual: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
        for &k in &degrees {
            let comp = module.component(k);
            let block = d.block(k);
            let z: Vec<Vector> = block.kernel()?.iter().map(|kv| embed(&module, &comp, kv)).collect();
            let mut family = z.clone();
            family.extend(comp.iter().map(|&i| module.basis_vector(i)));
            let chosen = independent_subset(&ring, n, &family)?;
            let w = chosen.iter().filter(|&&i| i >= z.len()).map(|&i| family[i].clone()).collect();
            cycles.insert(k, z);
            residual.insert(k, w);
        }
        // B_k = d(W_{k+1}); H_k from preferred cycles, then Z_k.
        let mut harmonic = Vec::new();
        let mut harmonic_degrees = Vec::new();
        let mut boundaries = Vec::new();
        type Parts = (Vec<Vector>, Vec<Vector>, Vec<Vector>);
        let mut per_degree: BTreeMap<i32, Parts> = BTreeMap::new();
        for &k in &degrees {
            let b: Vec<Vector> =
                residual.get(&(k + 1)).map(|ws| ws.iter().map(|w| d.apply(w)).collect()).unwrap_or_default();
            let mut family = b.clone();
            for p in preferred {
                if module.homogeneous_degree(p)? == Some(k) && d.apply(p).is_zero() {
                    family.push(p.clone());
                }
            }
            family.extend(cycles[&k].iter().cloned());
            let chosen = independent_subset(&ring, n, &family)?;
            let h: Vec<Vector> = chosen.iter().filter(|&&i| i >= b.len()).map(|&i| family[i].clone()).collect();
            for v in &h {
                harmonic.push(v.clone());
                harmonic_degrees.push(k);
            }
            boundaries.extend(b.iter().cloned());
            per_degree.insert(k, (b, h, residual[&k].clone()));
        }

        // Coordinates in [B | H | W] per degree.
        let mut proj_h = vec![module.zero(); n];
        let mut proj_b = vec![module.zero(); n];
        let mut proj_w = vec![module.zero(); n];
        let mut hom = vec![module.zero(); n];
        let mut harmonic_coords = vec![Vec::new(); n];
        let mut h_offset = 0;
        for &k in &degrees {
            let (b, h, w) = &per_degree[&k];
            let comp = module.component(k);
            let mut cols: Vec<Vector> = Vec::new();
            cols.extend(b.iter().cloned());
            cols.extend(h.iter().cloned());
            cols.extend(w.iter().cloned());
            let restricted: Vec<Vector> = cols.iter().map(|c| restrict(c, &comp)).collect();
            let p = Matrix::from_columns(&ring, comp.len(), &restricted);
            let pinv = p.inverse()?.ok_or_else(|| Error::Internal("splitting basis is not a basis".into()))?;
            let w_next = residual.get(&(k + 1)).cloned().unwrap_or_default();
            for (ci, &i) in comp.iter().enumerate() {
                let coords = pinv.column(ci);
                for (j, c) in coords.support() {
                    if j < b.len() {
                        proj_b[i].add_scaled(c, &b[j]);
                        hom[i].add_scaled(c, &w_next[j]);
                    } else if j < b.len() + h.len() {
                        proj_h[i].add_scaled(c, &h[j - b.len()]);
                        harmonic_coords[i].push((h_offset + j - b.len(), c.clone()));
                    } else {
                        proj_w[i].add_scaled(c, &w[j - b.len() - h.len()]);
                    }
                }
            }
            h_offset += h.len();
        }
        let m = module.clone();
        Ok(ComplexSplitting {
            harmonic,
            harmonic_degrees,
            boundaries,
            residual: residual.into_values().flatten().collect(),
            harmonic_coords,
            proj_h: GradedMap::from_images(m.clone(), m.clone(), 0, proj_h)?,
            proj_b: GradedMap::from_images(m.clone(), m.clone(), 0, proj_b)?,
            proj_w: GradedMap::from_images(m.clone(), m.clone(), 0, proj_w)?,
            homotopy: GradedMap::from_images(m.clone(), m, 1, hom)?,
            complex,
        })
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Harmonic representatives, one per homology basis class.
    pub fn harmonic(&self) -> &[Vector] {
        &self.harmonic
    }

    pub fn harmonic_degrees(&self) -> &[i32] {
        &self.harmonic_degrees
    }

    pub fn boundaries(&self) -> &[Vector] {
        &self.boundaries
    }

    pub fn residual(&self) -> &[Vector] {
        &self.residual
    }

    /// Coordinates of `π_H v` in the harmonic basis.
    pub fn harmonic_coordinates(&self, v: &Vector) -> Vec<crate::Scalar> {
        let ring = self.complex.module().ring();
        let mut out = vec![ring.zero(); self.harmonic.len()];
        for (i, c) in v.support() {
            for (j, a) in &self.harmonic_coords[i] {
                out[*j] = &out[*j] + &(c * a);
            }
        }
        out
    }

    pub fn project_h(&self) -> &GradedMap {
        &self.proj_h
    }

    pub fn project_b(&self) -> &GradedMap {
        &self.proj_b
    }

    pub fn project_w(&self) -> &GradedMap {
        &self.proj_w
    }

    pub fn homotopy(&self) -> &GradedMap {
        &self.homotopy
    }

    /// Solves `d x = b` for a boundary `b`, returning `x = h(b)`; `None`
    /// if `b` is not a boundary.
    pub fn lift_boundary(&self, b: &Vector) -> Option<Vector> {
        let x = self.homotopy.apply(b);
        (self.complex.differential().apply(&x) == *b).then_some(x)
    }

    /// Independent check that `v` is a boundary by solving `d x = v`.
    pub fn is_boundary(&self, v: &Vector) -> Result<bool, Error> {
        let m = self.complex.differential().matrix();
        Ok(!matches!(solve_linear(&m, v)?, LinearSolution::Inconsistent))
    }
}

fn embed(module: &GradedModule, comp: &[usize], v: &Vector) -> Vector {
    let mut out = module.zero();
    for (c, &i) in comp.iter().enumerate() {
        out[i] = v[c].clone();
    }
    out
}

fn restrict(v: &Vector, comp: &[usize]) -> Vector {
    Vector::from_coeffs(comp.iter().map(|&i| v[i].clone()).collect())
}
