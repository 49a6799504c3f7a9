//! Coordinate vectors and exact Gaussian elimination.
//!
//! Pivots are chosen by the first-unit-in-column rule, so every result is a
//! deterministic function of the input. Over a truncated ring a column whose
//! remaining entries are all non-units cannot be pivoted and the elimination
//! reports [`Error::NonUnitPivot`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use super::ring::{Ring, Scalar};
use crate::Error;

/// Coordinates with respect to an ordered basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn zeros(ring: &Ring, len: usize) -> Vector {
        Vector(vec![ring.zero(); len])
    }

    pub fn unit(ring: &Ring, len: usize, i: usize) -> Vector {
        let mut v = Self::zeros(ring, len);
        v.0[i] = ring.one();
        v
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Vector {
        Vector(coeffs)
    }

    pub fn from_sparse(ring: &Ring, len: usize, entries: &[(usize, Scalar)]) -> Vector {
        let mut v = Self::zeros(ring, len);
        for (i, c) in entries {
            v.0[*i] = &v.0[*i] + c;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    /// Nonzero entries in index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector(self.0.iter().map(|x| x * c).collect())
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Vector) {
        if c.is_zero() {
            return;
        }
        for (x, y) in self.0.iter_mut().zip(&other.0) {
            if !y.is_zero() {
                *x = &*x + &(c * y);
            }
        }
    }

    pub fn concat(&self, other: &Vector) -> Vector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Vector(v)
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for Vector {
    type Output = Vector;
    fn add(self, rhs: Vector) -> Vector {
        &self + &rhs
    }
}

impl Sub for Vector {
    type Output = Vector;
    fn sub(self, rhs: Vector) -> Vector {
        &self - &rhs
    }
}

impl Neg for Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        -&self
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Dense matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![vec![ring.zero(); cols]; rows] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i][i] = ring.one();
        }
        m
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(ring: &Ring, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn from_rows(ring: &Ring, cols: usize, rows: Vec<Vec<Scalar>>) -> Matrix {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Matrix { ring: ring.clone(), rows: rows.len(), cols, data: rows }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i][j] = value;
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_coeffs(self.data.iter().map(|r| r[j].clone()).collect())
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        let mut out = Vector::zeros(&self.ring, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = self.ring.zero();
            for (a, b) in row.iter().zip(v.iter()) {
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a * b;
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] = &out.data[i][j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Scalar::is_zero))
    }

    /// Reduced row echelon form with unit pivots, applying the same row
    /// operations to `companion` (if any). Returns the pivot columns.
    fn reduce(&mut self, mut companion: Option<&mut Matrix>) -> Result<Vec<usize>, Error> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.data[r][col].is_unit()) else {
                if (row..self.rows).any(|r| !self.data[r][col].is_zero()) {
                    return Err(Error::NonUnitPivot { column: col });
                }
                continue;
            };
            self.data.swap(row, p);
            if let Some(c) = companion.as_deref_mut() {
                c.data.swap(row, p);
            }
            let inv = self.data[row][col].inverse().expect("unit pivot");
            scale_row(&mut self.data[row], &inv);
            if let Some(c) = companion.as_deref_mut() {
                scale_row(&mut c.data[row], &inv);
            }
            for r in 0..self.rows {
                if r == row || self.data[r][col].is_zero() {
                    continue;
                }
                let factor = -&self.data[r][col];
                let pivot_row = self.data[row].clone();
                axpy_row(&mut self.data[r], &factor, &pivot_row);
                if let Some(c) = companion.as_deref_mut() {
                    let pivot_row = c.data[row].clone();
                    axpy_row(&mut c.data[r], &factor, &pivot_row);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok(pivots)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>), Error> {
        let mut m = self.clone();
        let pivots = m.reduce(None)?;
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize, Error> {
        Ok(self.rref()?.1.len())
    }

    /// Kernel basis: one vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> Result<Vec<Vector>, Error> {
        let (r, pivots) = self.rref()?;
        Ok(kernel_from_rref(&r, &pivots))
    }

    pub fn inverse(&self) -> Result<Option<Matrix>, Error> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let mut m = self.clone();
        let mut inv = Matrix::identity(&self.ring, self.rows);
        let pivots = m.reduce(Some(&mut inv))?;
        Ok((pivots.len() == self.rows).then_some(inv))
    }
}

fn scale_row(row: &mut [Scalar], c: &Scalar) {
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x * c;
        }
    }
}

fn axpy_row(row: &mut [Scalar], c: &Scalar, other: &[Scalar]) {
    for (x, y) in row.iter_mut().zip(other) {
        if !y.is_zero() {
            *x = &*x + &(c * y);
        }
    }
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize]) -> Vec<Vector> {
    let ring = r.ring();
    let mut out = Vec::new();
    for free in (0..r.cols).filter(|c| !pivots.contains(c)) {
        let mut v = Vector::zeros(ring, r.cols);
        v[free] = ring.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.get(row, free);
        }
        out.push(v);
    }
    out
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// Every solution is `particular + sum c_i kernel[i]`.
    Solved {
        particular: Vector,
        kernel: Vec<Vector>,
    },
    Inconsistent,
}

impl LinearSolution {
    pub fn particular(&self) -> Option<&Vector> {
        match self {
            LinearSolution::Solved { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Solves `matrix * x = rhs` exactly. Free variables are set to zero in the
/// particular solution.
pub fn solve_linear(matrix: &Matrix, rhs: &Vector) -> Result<LinearSolution, Error> {
    assert_eq!(rhs.len(), matrix.rows, "right-hand side length mismatch");
    let ring = matrix.ring.clone();
    let mut m = matrix.clone();
    let mut b = Matrix::from_columns(&ring, matrix.rows, std::slice::from_ref(rhs));
    let pivots = m.reduce(Some(&mut b))?;
    if (pivots.len()..m.rows).any(|r| !b.data[r][0].is_zero()) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = Vector::zeros(&ring, m.cols);
    for (row, &pc) in pivots.iter().enumerate() {
        particular[pc] = b.data[row][0].clone();
    }
    Ok(LinearSolution::Solved { particular, kernel: kernel_from_rref(&m, &pivots) })
}

/// Greedy maximal independent subfamily, in input order; returns indices.
pub fn independent_subset(ring: &Ring, dim: usize, vectors: &[Vector]) -> Result<Vec<usize>, Error> {
    let mut chosen: Vec<Vector> = Vec::new();
    let mut idx = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut trial = chosen.clone();
        trial.push(v.clone());
        if Matrix::from_columns(ring, dim, &trial).rank()? == trial.len() {
            chosen = trial;
            idx.push(i);
        }
    }
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, rows: &[&[i64]]) -> Matrix {
        let r = Ring::Prime(p);
        Matrix::from_rows(
            &r,
            rows[0].len(),
            rows.iter().map(|row| row.iter().map(|&x| r.from_i64(x)).collect()).collect(),
        )
    }

    #[test]
    fn identity_system_returns_rhs() {
        let r = Ring::Rationals;
        let rhs = Vector::from_coeffs(vec![r.from_i64(3), r.from_i64(-2), r.from_rational(1, 7).unwrap()]);
        let sol = solve_linear(&Matrix::identity(&r, 3), &rhs).unwrap();
        assert_eq!(sol, LinearSolution::Solved { particular: rhs, kernel: vec![] });
    }

    #[test]
    fn zero_times_x_equals_one_is_inconsistent() {
        let r = Ring::Rationals;
        let m = Matrix::zeros(&r, 1, 1);
        let rhs = Vector::unit(&r, 1, 0);
        assert_eq!(solve_linear(&m, &rhs).unwrap(), LinearSolution::Inconsistent);
    }

    #[test]
    fn invertible_system_over_f5_matches_exhaustive_search() {
        let m = fp(5, &[&[1, 2, 0, 3], &[0, 1, 4, 1], &[2, 0, 1, 1], &[1, 1, 1, 0]]);
        let r = Ring::Prime(5);
        let rhs = Vector::from_coeffs([4, 0, 2, 3].iter().map(|&x| r.from_i64(x)).collect());
        let mut brute = Vec::new();
        let els = r.elements().unwrap();
        for a in &els {
            for b in &els {
                for c in &els {
                    for d in &els {
                        let x = Vector::from_coeffs(vec![a.clone(), b.clone(), c.clone(), d.clone()]);
                        if m.mul_vec(&x) == rhs {
                            brute.push(x);
                        }
                    }
                }
            }
        }
        assert_eq!(brute.len(), 1);
        match solve_linear(&m, &rhs).unwrap() {
            LinearSolution::Solved { particular, kernel } => {
                assert!(kernel.is_empty());
                assert_eq!(particular, brute[0]);
            }
            LinearSolution::Inconsistent => panic!("expected a solution"),
        }
    }

    #[test]
    fn residual_and_kernel_vanish() {
        let m = fp(3, &[&[1, 2, 0, 1], &[2, 1, 0, 2]]);
        let r = Ring::Prime(3);
        let rhs = Vector::from_coeffs(vec![r.from_i64(1), r.from_i64(2)]);
        let LinearSolution::Solved { particular, kernel } = solve_linear(&m, &rhs).unwrap() else { panic!() };
        assert_eq!(m.mul_vec(&particular), rhs);
        assert_eq!(kernel.len(), 3);
        assert!(kernel.iter().all(|k| m.mul_vec(k).is_zero()));
    }

    #[test]
    fn non_unit_pivot_is_reported() {
        let r = Ring::parse_descriptor("Q[t]/t^2").unwrap();
        let t = r.parse_scalar("t").unwrap();
        let m = Matrix::from_rows(&r, 1, vec![vec![t]]);
        assert!(matches!(solve_linear(&m, &Vector::zeros(&r, 1)), Err(Error::NonUnitPivot { column: 0 })));
    }

    #[test]
    fn local_ring_with_unit_pivots_solves() {
        let r = Ring::parse_descriptor("Q[t]/t^3").unwrap();
        let s = |x: &str| r.parse_scalar(x).unwrap();
        let m = Matrix::from_rows(&r, 2, vec![vec![s("1+t"), s("t")], vec![s("t^2"), s("2")]]);
        let rhs = Vector::from_coeffs(vec![s("1"), s("t")]);
        let sol = solve_linear(&m, &rhs).unwrap();
        assert_eq!(m.mul_vec(sol.particular().unwrap()), rhs);
    }
}
