//! Dense exact matrices and Gaussian elimination.

use std::fmt;

use super::field::Field;

/// A dense row-major matrix over `F`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.field.display(self.get(i, j)))?;
            }
        }
        write!(f, "] ({}x{})", self.rows, self.cols)
    }
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Build from integer rows; every row must have the same length.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    /// Build from column vectors, each of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length mismatch");
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    /// `self[i][j] += v`.
    pub fn add_at(&mut self, i: usize, j: usize, v: &F::Elem) {
        let idx = i * self.cols + j;
        self.data[idx] = self.field.add(&self.data[idx], v);
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let k = self.data.iter().position(|x| !self.field.is_zero(x))?;
        Some((k / self.cols, k % self.cols))
    }

    /// First entry where `self` and `other` differ; shapes must agree.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in comparison");
        let k = self.data.iter().zip(&other.data).position(|(a, b)| a != b)?;
        Some((k / self.cols, k % self.cols))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        out.add_at(i, j, &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "shape mismatch in apply");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.field.mul(a, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Side-by-side concatenation; all parts need the same row count.
    pub fn hstack(field: &F, rows: usize, parts: &[&Self]) -> Self {
        assert!(parts.iter().all(|p| p.rows == rows), "row mismatch in hstack");
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for p in parts {
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    /// Stacked concatenation; all parts need the same column count.
    pub fn vstack(field: &F, cols: usize, parts: &[&Self]) -> Self {
        assert!(parts.iter().all(|p| p.cols == cols), "column mismatch in vstack");
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            data.extend(p.data.iter().cloned());
        }
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Kronecker product; row `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if f.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !f.is_zero(b) {
                            out.set(i * other.rows + k, j * other.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    /// Reduced row echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref<F> {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if f.is_zero(pv) {
                        continue;
                    }
                    let v = f.sub(m.get(i, j), &f.mul(&factor, pv));
                    m.set(i, j, v);
                }
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

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, as the columns of a `cols x nullity` matrix.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let Rref { matrix: r, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k.set(fc, j, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(pc, j, f.neg(r.get(i, fc)));
            }
        }
        assert_eq!(k.cols + pivots.len(), self.cols, "rank-nullity");
        k
    }

    /// A basis of the column space: the pivot columns of `self`.
    pub fn image_basis(&self) -> Self {
        let pivots = self.rref().pivots;
        self.select_cols(&pivots)
    }

    /// Projection onto a complement of the column space and a section of it.
    ///
    /// Returns `(pi, s)` with `pi * self = 0`, `pi * s = I` and `pi` surjective
    /// onto a space of dimension `rows - rank`.
    pub fn cokernel(&self) -> (Self, Self) {
        let f = &self.field;
        let Rref { matrix: r, pivots } = self.transpose().rref();
        let comp: Vec<usize> = (0..self.rows).filter(|c| !pivots.contains(c)).collect();
        let q = comp.len();
        let mut pi = Self::zeros(f, q, self.rows);
        let mut s = Self::zeros(f, self.rows, q);
        for (j, &c) in comp.iter().enumerate() {
            pi.set(j, c, f.one());
            s.set(c, j, f.one());
        }
        for (i, &p) in pivots.iter().enumerate() {
            for (j, &c) in comp.iter().enumerate() {
                pi.set(j, p, f.neg(r.get(i, c)));
            }
        }
        assert_eq!(q + pivots.len(), self.rows, "rank-nullity on cokernel");
        (pi, s)
    }

    /// Solve `self * x = b` for a matrix `x`; `None` if inconsistent.
    pub fn solve(&self, b: &Self) -> Option<Self> {
        let f = &self.field;
        assert_eq!(self.rows, b.rows, "shape mismatch in solve");
        let aug = Self::hstack(f, self.rows, &[self, b]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// A left inverse `l` with `l * self = I`; `None` unless `self` is injective.
    pub fn left_inverse(&self) -> Option<Self> {
        let f = &self.field;
        let aug = Self::hstack(f, self.rows, &[self, &Self::identity(f, self.rows)]);
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.len() < self.cols || pivots[..self.cols].iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        Some(Self::from_fn(f, self.cols, self.rows, |i, j| {
            r.get(i, self.cols + j).clone()
        }))
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        self.left_inverse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    #[test]
    fn kernel_of_sum_over_f2() {
        let m = Matrix::from_i64(&f2(), &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(k, Matrix::from_i64(&f2(), &[&[1], &[1]]));
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn cokernel_projection_kills_image() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 2], &[2, 4], &[0, 1]]);
        let (pi, s) = m.cokernel();
        assert_eq!(pi.rows(), 1);
        assert!(pi.mul(&m).is_zero());
        assert_eq!(pi.mul(&s), Matrix::identity(&q, 1));
    }

    #[test]
    fn left_inverse_and_solve() {
        let q = Rationals;
        let m = Matrix::from_i64(&q, &[&[1, 0], &[2, 1], &[3, 5]]);
        let l = m.left_inverse().unwrap();
        assert_eq!(l.mul(&m), Matrix::identity(&q, 2));
        let b = Matrix::from_i64(&q, &[&[1], &[3], &[8]]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul(&x), b);
        let bad = Matrix::from_i64(&q, &[&[1], &[0], &[0]]);
        assert!(m.solve(&bad).is_none());
        assert!(Matrix::from_i64(&q, &[&[1, 1]]).left_inverse().is_none());
    }

    #[test]
    fn kron_ordering() {
        let q = Rationals;
        let a = Matrix::from_i64(&q, &[&[1, 2]]);
        let b = Matrix::from_i64(&q, &[&[1], &[3]]);
        assert_eq!(a.kron(&b), Matrix::from_i64(&q, &[&[1, 2], &[3, 6]]));
    }
}
