//! Dense vectors and matrices over a [`Field`], with row reduction.
//!
//! Nothing here conjugates: transposes are plain transposes and the dot product
//! is the symmetric bilinear one.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalars::{Approx, Field, Tolerance};

#[derive(Clone, PartialEq, Debug)]
pub struct Vector<F>(Vec<F>);

impl<F: Field> Vector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Self(coords)
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![F::zero(); d])
    }

    /// The `i`-th standard basis vector of length `d`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.0[i] = F::one();
        v
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[F] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<F> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.0.iter()
    }

    /// Σ uᵢvᵢ; callers check dimensions.
    pub fn dot(&self, other: &Self) -> F {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(F::zero(), |acc, (a, b)| acc + &(a.clone() * b))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b).collect())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self(self.0.iter().map(|a| a.clone() * c).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a.clone()).collect())
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.0.iter().all(|a| a.is_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Largest entrywise magnitude of `self - other`.
    pub fn residual(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a.clone() - b).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn to_approx(&self) -> Vector<Approx> {
        Vector(self.0.iter().map(Field::to_approx).collect())
    }
}

impl<F> Index<usize> for Vector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.0[i]
    }
}

impl<F> IndexMut<usize> for Vector<F> {
    fn index_mut(&mut self, i: usize) -> &mut F {
        &mut self.0[i]
    }
}

impl<F: fmt::Display> fmt::Display for Vector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of Gauss–Jordan elimination.
pub struct Rref<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if rows have unequal length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
        )
    }

    /// `d × k` matrix whose columns are the given vectors.
    pub fn from_columns(d: usize, cols: &[Vector<F>]) -> Self {
        Self::from_fn(d, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diag(entries: &[F]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { F::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector<F> {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> Vector<F> {
        Vector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<Vector<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).into_coords()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_exact_zero() {
                        continue;
                    }
                    let t = a.clone() * b;
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &Vector<F>) -> Vector<F> {
        assert_eq!(self.cols, v.dim(), "mul_vec shape mismatch");
        Vector::new((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c).collect(),
        }
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_approx(&self) -> Matrix<Approx> {
        self.map(Field::to_approx)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// `u v^T`.
    pub fn outer(u: &Vector<F>, v: &Vector<F>) -> Self {
        Self::from_fn(u.dim(), v.dim(), |i, j| u[i].clone() * &v[j])
    }

    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.data.iter().all(|a| a.is_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    pub fn residual(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: Tolerance) -> bool {
        self.is_square() && self.approx_eq(&self.transpose(), tol)
    }

    pub fn is_antisymmetric(&self, tol: Tolerance) -> bool {
        self.is_square()
            && self.add(&self.transpose()).is_zero(tol)
    }

    /// Gauss–Jordan elimination. The exact backend pivots on the first nonzero
    /// entry, the approximate one on the entry of largest magnitude.
    pub fn rref(&self, tol: Tolerance) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let candidates = (r..m.rows).filter(|&i| !m[(i, c)].is_zero(tol));
            let pivot = if F::BACKEND == crate::scalars::Backend::Exact {
                candidates.min()
            } else {
                candidates.max_by(|&a, &b| {
                    m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude())
                })
            };
            let Some(p) = pivot else { continue };
            m.swap_rows(r, p);
            let inv = F::one()
                .try_div(&m[(r, c)], tol)
                .expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m[(r, j)].clone() * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_exact_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let t = f.clone() * &m[(r, j)];
                    m[(i, j)] -= &t;
                }
                m[(i, c)] = F::zero();
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        self.rref(tol).pivots.len()
    }

    /// Basis of the null space `{x : Mx = 0}`, one vector per free column.
    pub fn kernel(&self, tol: Tolerance) -> Vec<Vector<F>> {
        let Rref { matrix, pivots } = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::zeros(self.cols);
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Linearly independent columns spanning the column space.
    pub fn column_basis(&self, tol: Tolerance) -> Vec<Vector<F>> {
        self.rref(tol)
            .pivots
            .into_iter()
            .map(|c| self.column(c))
            .collect()
    }

    pub fn determinant(&self, tol: Tolerance) -> F {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero(tol)) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det = det * &m[(c, c)];
            let inv = F::one().try_div(&m[(c, c)], tol).expect("pivot is nonzero");
            for i in c + 1..n {
                if m[(i, c)].is_exact_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * &inv;
                for j in c..n {
                    let t = f.clone() * &m[(c, j)];
                    m[(i, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn inverse(&self, tol: Tolerance) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let Rref { matrix, pivots } = aug.rref(tol);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| matrix[(i, j + n)].clone()))
    }

    /// Solves `self · X = rhs` for square invertible `self`.
    pub fn solve(&self, rhs: &Self, tol: Tolerance) -> Option<Self> {
        Some(self.inverse(tol)?.matmul(rhs))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}
