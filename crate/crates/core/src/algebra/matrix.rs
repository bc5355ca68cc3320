//! Dense matrices over a ring context, with exact elimination.
//!
//! Over a local ring such as a Weil algebra, Gauss–Jordan elimination with
//! unit pivots is complete: a square matrix is invertible iff every column
//! eventually offers a unit pivot.

use std::fmt;

use super::field::{Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a matrix from row vectors; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Ok(Matrix {
            rows: n,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<E>]) -> Result<Self> {
        Ok(Self::from_rows(cols.to_vec())?.transpose())
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
    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> Vec<E> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }
    pub fn col(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }
    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<T: Clone>(&self, f: impl FnMut(&E) -> Result<T>) -> Result<Matrix<T>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Columns `start..end`.
    pub fn col_block(&self, start: usize, end: usize) -> Self {
        Self::from_fn(self.rows, end - start, |i, j| {
            self.get(i, start + j).clone()
        })
    }

    /// Rows `start..end`.
    pub fn row_block(&self, start: usize, end: usize) -> Self {
        Self::from_fn(end - start, self.cols, |i, j| {
            self.get(start + i, j).clone()
        })
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        })
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<R: Ring<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(ring: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    /// The elementary matrix `E_{ij}`.
    pub fn unit<R: Ring<Elem = E>>(ring: &R, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        m.set(i, j, ring.one());
        m
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map(|a| ring.neg(a))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        self.map(|a| ring.mul(c, a))
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = ring.zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if ring.is_zero(a) {
                        continue;
                    }
                    acc = ring.add(&acc, &ring.mul(a, other.get(k, j)));
                }
                data.push(acc);
            }
        }
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn mul_vec<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(ring.zero(), |acc, k| {
                    ring.add(&acc, &ring.mul(self.get(i, k), &v[k]))
                })
            })
            .collect()
    }

    pub fn trace<R: Ring<Elem = E>>(&self, ring: &R) -> E {
        (0..self.rows.min(self.cols)).fold(ring.zero(), |acc, i| ring.add(&acc, self.get(i, i)))
    }

    /// `[self, other] = self·other − other·self`.
    pub fn bracket<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.mul(ring, other).sub(ring, &other.mul(ring, self))
    }

    /// Inverse by Gauss–Jordan elimination with unit pivots.
    pub fn inverse<R: Ring<Elem = E>>(&self, ring: &R) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(ring, n);
        for c in 0..n {
            let (p, pinv) = (c..n)
                .find_map(|r| ring.inv(a.get(r, c)).map(|u| (r, u)))
                .ok_or(Error::SingularMatrix)?;
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            a.scale_row(ring, c, &pinv);
            inv.scale_row(ring, c, &pinv);
            for r in 0..n {
                if r == c || ring.is_zero(a.get(r, c)) {
                    continue;
                }
                let factor = a.get(r, c).clone();
                a.add_row_multiple(ring, r, c, &ring.neg(&factor));
                inv.add_row_multiple(ring, r, c, &ring.neg(&factor));
            }
        }
        Ok(inv)
    }

    pub fn is_invertible<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.inverse(ring).is_ok()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row<R: Ring<Elem = E>>(&mut self, ring: &R, r: usize, c: &E) {
        for j in 0..self.cols {
            let v = ring.mul(self.get(r, j), c);
            self.set(r, j, v);
        }
    }

    /// `row[dst] += c · row[src]`.
    fn add_row_multiple<R: Ring<Elem = E>>(&mut self, ring: &R, dst: usize, src: usize, c: &E) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if ring.is_zero(s) {
                continue;
            }
            let v = ring.add(self.get(dst, j), &ring.mul(c, s));
            self.set(dst, j, v);
        }
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !field.is_zero(a.get(r, c))) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = field.inv(a.get(row, c)).unwrap();
        a.scale_row(field, row, &inv);
        for r in 0..a.rows {
            if r != row && !field.is_zero(a.get(r, c)) {
                let factor = field.neg(a.get(r, c));
                a.add_row_multiple(field, r, row, &factor);
            }
        }
        pivots.push(c);
        row += 1;
    }
    (a, pivots)
}

pub fn rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> usize {
    rref(field, m).1.len()
}

/// A basis of `{x : m·x = 0}`.
pub fn kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let (r, pivots) = rref(field, m);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![field.zero(); m.cols];
            x[fc] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = field.neg(r.get(row, fc));
            }
            x
        })
        .collect()
}

/// Some `x` with `m·x = b`, or `None` when the system is inconsistent.
pub fn solve<F: Field>(field: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols: Vec<Vec<F::Elem>> = vec![b.to_vec()];
    let aug = m.hstack(&Matrix::from_cols(&cols).ok()?);
    let (r, pivots) = rref(field, &aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![field.zero(); m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(row, m.cols).clone();
    }
    Some(x)
}

/// A linear subspace of `K^n`, stored as the nonzero rows of a reduced row
/// echelon basis so that equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Vec<Vec<E>>,
}

impl<E: Clone> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// The canonical (reduced echelon) basis.
    pub fn basis(&self) -> &[Vec<E>] {
        &self.basis
    }
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn span<F: Field<Elem = E>>(field: &F, ambient: usize, vectors: &[Vec<E>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_rows(vectors.to_vec()).expect("vectors of one length");
        assert_eq!(m.cols(), ambient, "vector length");
        let (r, pivots) = rref(field, &m);
        Subspace {
            ambient,
            basis: (0..pivots.len()).map(|i| r.row(i)).collect(),
        }
    }

    pub fn full<F: Field<Elem = E>>(field: &F, ambient: usize) -> Self {
        let id = Matrix::identity(field, ambient);
        Subspace {
            ambient,
            basis: id.to_rows(),
        }
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> bool {
        if v.iter().all(|x| field.is_zero(x)) {
            return true;
        }
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Self::span(field, self.ambient, &vs).dim() == self.dim()
    }

    pub fn contains_space<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(field, v))
    }

    pub fn sum<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Self::span(field, self.ambient, &vs)
    }

    /// The annihilator `{x : ⟨x, v⟩ = 0 ∀ v}` under the standard pairing.
    pub fn orthogonal<F: Field<Elem = E>>(&self, field: &F) -> Self {
        if self.basis.is_empty() {
            return Self::full(field, self.ambient);
        }
        let m = Matrix::from_rows(self.basis.clone()).unwrap();
        Self::span(field, self.ambient, &kernel(field, &m))
    }

    pub fn intersection<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        if self.basis.is_empty() || other.basis.is_empty() {
            return Self::zero(self.ambient);
        }
        let perp = other.orthogonal(field);
        if perp.basis.is_empty() {
            return self.clone();
        }
        // x = Σ cᵢ uᵢ with ⟨w, x⟩ = 0 for w ∈ other⊥.
        let p = Matrix::from_rows(perp.basis.clone()).unwrap();
        let u = Matrix::from_rows(self.basis.clone()).unwrap();
        let constraints = p.mul(field, &u.transpose());
        let combos = kernel(field, &constraints);
        let vectors: Vec<Vec<E>> = combos
            .iter()
            .map(|c| u.transpose().mul_vec(field, c))
            .collect();
        Self::span(field, self.ambient, &vectors)
    }

    /// A vector of `self` outside `other`, if any.
    pub fn complement_witness<F: Field<Elem = E>>(
        &self,
        field: &F,
        other: &Self,
    ) -> Option<Vec<E>> {
        self.basis
            .iter()
            .find(|v| !other.contains(field, v))
            .cloned()
    }
}
