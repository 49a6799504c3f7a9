use std::sync::Arc;

use super::DgCoalgebra;
use crate::dga::{validate_dga, DgAlgebra, DgaData};
use crate::dgl::{validate_dgl, DgLieAlgebra, DglData};
use crate::graded::{koszul_sign, BasisElement, GradedMap, GradedModule, Vector};
use crate::Error;

/// `Hom(C, X)` for a finite coalgebra `C`, with basis `c->x` of degree
/// `|x| - |c|` (the functional sending `c` to `x` and every other basis
/// element of `C` to zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSpace {
    coalgebra: DgCoalgebra,
    target: Arc<GradedModule>,
    module: Arc<GradedModule>,
}

impl HomSpace {
    pub fn new(coalgebra: &DgCoalgebra, target: &Arc<GradedModule>) -> Result<Self, Error> {
        if coalgebra.ring() != target.ring() {
            return Err(Error::Incompatible("coalgebra and target over different rings".into()));
        }
        let src = coalgebra.module();
        let mut basis = Vec::with_capacity(src.dim() * target.dim());
        for i in 0..src.dim() {
            for j in 0..target.dim() {
                basis.push(BasisElement::new(
                    format!("{}->{}", src.name(i), target.name(j)),
                    target.degree(j) - src.degree(i),
                ));
            }
        }
        let module = Arc::new(GradedModule::new(target.ring().clone(), basis)?);
        Ok(HomSpace { coalgebra: coalgebra.clone(), target: target.clone(), module })
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn coalgebra(&self) -> &DgCoalgebra {
        &self.coalgebra
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn index(&self, c: usize, x: usize) -> usize {
        c * self.target.dim() + x
    }

    /// The element of `Hom(C,X)` representing a graded map `C → X`.
    pub fn element_of(&self, f: &GradedMap) -> Result<Vector, Error> {
        if f.source() != self.coalgebra.module() || f.target() != &self.target {
            return Err(Error::Incompatible("map does not go from the coalgebra to the target".into()));
        }
        let mut v = self.module.zero();
        for c in 0..self.coalgebra.dim() {
            for (x, a) in f.column(c) {
                v[self.index(c, *x)] = a.clone();
            }
        }
        Ok(v)
    }

    /// The graded map of the given degree represented by `v`.
    pub fn map_of(&self, v: &Vector, degree: i32) -> Result<GradedMap, Error> {
        let n = self.target.dim();
        GradedMap::from_fn(self.coalgebra.module().clone(), self.target.clone(), degree, |c| {
            let mut img = self.target.zero();
            for x in 0..n {
                img[x] = v[self.index(c, x)].clone();
            }
            img
        })
    }
}

/// `(f ⌣ g)(c) = Σ (-1)^{|g||c'|} m(f(c'), g(c''))` for a bilinear `m`.
pub(crate) fn convolve_with(
    c: &DgCoalgebra,
    f: &GradedMap,
    g: &GradedMap,
    mul: impl Fn(&Vector, &Vector) -> Vector,
) -> Result<GradedMap, Error> {
    let src = c.module();
    let target = f.target().clone();
    let ring = src.ring().clone();
    GradedMap::from_fn(src.clone(), target.clone(), f.degree() + g.degree(), |i| {
        let mut out = target.zero();
        for (j, k, lambda) in c.coproduct_of_basis(i) {
            let s = ring.sign(koszul_sign(g.degree(), src.degree(*j)));
            let term = mul(&f.image(*j), &g.image(*k));
            out.add_scaled(&(lambda * &s), &term);
        }
        out
    })
}

/// `(Df)(c) = d(f(c)) - (-1)^{|f|} f(dc)`.
pub(crate) fn convolution_derivative(c: &DgCoalgebra, target_d: &GradedMap, f: &GradedMap) -> Result<GradedMap, Error> {
    let ring = c.ring().clone();
    let s = ring.sign(-koszul_sign(f.degree(), 1));
    GradedMap::from_fn(c.module().clone(), f.target().clone(), f.degree() - 1, |i| {
        let mut out = target_d.apply(&f.image(i));
        out.add_scaled(&s, &f.apply(&c.d(&c.module().basis_vector(i))));
        out
    })
}

/// `Hom(C, A)` with the cup product and the induced differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionAlgebra {
    hom: HomSpace,
    source: DgAlgebra,
    algebra: DgAlgebra,
}

impl ConvolutionAlgebra {
    pub fn hom(&self) -> &HomSpace {
        &self.hom
    }

    pub fn algebra(&self) -> &DgAlgebra {
        &self.algebra
    }

    pub fn coefficients(&self) -> &DgAlgebra {
        &self.source
    }

    /// `f ⌣ g` evaluated functionally.
    pub fn convolve(&self, f: &GradedMap, g: &GradedMap) -> Result<GradedMap, Error> {
        convolve_with(&self.hom.coalgebra, f, g, |x, y| self.source.mul(x, y))
    }

    pub fn derivative(&self, f: &GradedMap) -> Result<GradedMap, Error> {
        convolution_derivative(&self.hom.coalgebra, self.source.differential(), f)
    }

    /// `Dτ - τ⌣τ` for a degree -1 map `τ: C → A`.
    pub fn twisting_residual(&self, tau: &GradedMap) -> Result<GradedMap, Error> {
        if tau.degree() != -1 {
            return Err(Error::WrongDegree { expected: -1, found: tau.degree() });
        }
        let lhs = self.derivative(tau)?;
        let rhs = self.convolve(tau, tau)?;
        let neg = GradedMap::from_fn(rhs.source().clone(), rhs.target().clone(), rhs.degree(), |i| -rhs.image(i))?;
        lhs.add(&neg)
    }
}

/// The convolution DGA `Hom(C, A)`; its twisting elements are the twisting
/// cochains `C → A`.
pub fn convolution_algebra(c: &DgCoalgebra, a: &DgAlgebra) -> Result<ConvolutionAlgebra, Error> {
    let hom = HomSpace::new(c, a.module())?;
    let m = hom.module().clone();
    let (nc, na, n) = (c.dim(), a.dim(), m.dim());
    let ring = m.ring().clone();
    let mut unit = m.zero();
    for i in 0..nc {
        let e = c.counit_of_basis(i);
        for (x, u) in a.unit().support() {
            unit[hom.index(i, x)] = e * u;
        }
    }
    let mut data = DgaData::new(m.clone(), unit);
    for i in 0..nc {
        for (j, k, lambda) in c.coproduct_of_basis(i) {
            for x in 0..na {
                for y in 0..na {
                    let xy = a.product_of_basis(x, y);
                    if xy.is_zero() {
                        continue;
                    }
                    let g_degree = a.module().degree(y) - c.module().degree(*k);
                    let s = ring.sign(koszul_sign(g_degree, c.module().degree(*j)));
                    let slot = hom.index(*j, x) * n + hom.index(*k, y);
                    for (z, w) in xy.support() {
                        let t = hom.index(i, z);
                        data.product[slot][t] = &data.product[slot][t] + &(&(lambda * &s) * w);
                    }
                }
            }
        }
    }
    for i in 0..nc {
        for x in 0..na {
            let f_degree = a.module().degree(x) - c.module().degree(i);
            let s = ring.sign(-koszul_sign(f_degree, 1));
            let mut img = m.zero();
            for (y, w) in a.differential().column(x) {
                img[hom.index(i, *y)] = w.clone();
            }
            // f∘d_C is supported on the basis elements c with e_i in dc.
            for c2 in 0..nc {
                for (p, w) in c.differential().column(c2) {
                    if *p == i {
                        let t = hom.index(c2, x);
                        img[t] = &img[t] + &(w * &s);
                    }
                }
            }
            data.differential[hom.index(i, x)] = img;
        }
    }
    let algebra = validate_dga(&data)?;
    Ok(ConvolutionAlgebra { hom, source: a.clone(), algebra })
}

/// `Hom(C, g)` with `[f,g] = [ , ]∘(f⊗g)∘Δ` and the induced differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionDgl {
    hom: HomSpace,
    source: DgLieAlgebra,
    lie: DgLieAlgebra,
}

impl ConvolutionDgl {
    pub fn hom(&self) -> &HomSpace {
        &self.hom
    }

    pub fn lie(&self) -> &DgLieAlgebra {
        &self.lie
    }

    pub fn coefficients(&self) -> &DgLieAlgebra {
        &self.source
    }

    pub fn bracket(&self, f: &GradedMap, g: &GradedMap) -> Result<GradedMap, Error> {
        convolve_with(&self.hom.coalgebra, f, g, |x, y| self.source.bracket(x, y))
    }

    pub fn derivative(&self, f: &GradedMap) -> Result<GradedMap, Error> {
        convolution_derivative(&self.hom.coalgebra, self.source.differential(), f)
    }
}

/// The convolution DGL of a cocommutative coalgebra and a DGL. Its MC
/// elements are the Lie twisting cochains (in the `dγ + ½[γ,γ] = 0` form).
pub fn convolution_dgl(c: &DgCoalgebra, g: &DgLieAlgebra) -> Result<ConvolutionDgl, Error> {
    if !c.is_cocommutative() {
        return Err(Error::Incompatible("the convolution bracket needs a cocommutative coalgebra".into()));
    }
    let hom = HomSpace::new(c, g.module())?;
    let m = hom.module().clone();
    let n = m.dim();
    let mut data = DglData::new(m.clone());
    for p in 0..n {
        let (ci, x) = (p / g.dim(), p % g.dim());
        let f = hom.map_of(&m.basis_vector(p), g.module().degree(x) - c.module().degree(ci))?;
        for q in 0..n {
            let (cj, y) = (q / g.dim(), q % g.dim());
            let h = hom.map_of(&m.basis_vector(q), g.module().degree(y) - c.module().degree(cj))?;
            let b = convolve_with(c, &f, &h, |u, v| g.bracket(u, v))?;
            data.bracket[p * n + q] = hom.element_of(&b)?;
        }
        data.differential[p] = hom.element_of(&convolution_derivative(c, g.differential(), &f)?)?;
    }
    let lie = validate_dgl(&data)?;
    Ok(ConvolutionDgl { hom, source: g.clone(), lie })
}
