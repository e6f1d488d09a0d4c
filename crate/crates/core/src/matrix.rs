//! Dense exact matrices and Gaussian elimination.
//!
//! Row-major storage; all operations are pure and exact. The reduced
//! row-echelon form is the canonical representative used everywhere a
//! subspace or quotient needs a deterministic presentation.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<K: Field> {
    pub field: K,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<K::Elem>,
}

impl<K: Field> Matrix<K> {
    pub fn zero(field: K, rows: usize, cols: usize) -> Self {
        let entries = vec![field.zero(); rows * cols];
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: K, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: K, rows: Vec<Vec<K::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("ragged rows"));
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(field: K, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K::Elem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(field: K, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "literal length mismatch");
        Matrix::from_fn(field.clone(), rows, cols, |i, j| {
            field.from_i64(data[i * cols + j])
        })
    }

    pub fn col_vector(field: K, data: Vec<K::Elem>) -> Self {
        let rows = data.len();
        Matrix {
            field,
            rows,
            cols: 1,
            entries: data,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &K::Elem {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: K::Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[K::Elem] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[K::Elem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = &self.field;
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| f.mul(e, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape("matrix add, dimensions differ"));
        }
        let f = &self.field;
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::shape("matrix sub, dimensions differ"));
        }
        let f = &self.field;
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f.sub(a, b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "matrix mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field.clone();
        let mut out = Matrix::zero(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let mut cur = out.get(i, j).clone();
                    f.add_mul_assign(&mut cur, a, other.get(k, j));
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product, row index = (i1, i2), column index = (j1, j2).
    pub fn kron(&self, other: &Self) -> Self {
        let f = &self.field;
        Matrix::from_fn(
            self.field.clone(),
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let (i1, i2) = (i / other.rows, i % other.rows);
                let (j1, j2) = (j / other.cols, j % other.cols);
                f.mul(self.get(i1, j1), other.get(i2, j2))
            },
        )
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::shape("hstack row mismatch"));
        }
        Ok(Matrix::from_fn(
            self.field.clone(),
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::shape("vstack column mismatch"));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.field.clone(), self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // Find a pivot in column c at or below row r.
            let Some(pr) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    let a = self.get(pr, j).clone();
                    let b = self.get(r, j).clone();
                    self.set(pr, j, b);
                    self.set(r, j, a);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot nonzero");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = f.neg(self.get(i, c));
                for j in c..self.cols {
                    let mut v = self.get(i, j).clone();
                    f.add_mul_assign(&mut v, &factor, self.get(r, j));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Row rank by exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel {x : self * x = 0}, one basis
    /// vector per row. The rows are in reduced echelon form.
    pub fn kernel_basis_rows(&self) -> Self {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| pivot_set[*c].is_none()).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut vec = vec![f.zero(); self.cols];
            vec[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                vec[pc] = f.neg(r.get(row, fc));
            }
            rows.push(vec);
        }
        let mut m = Matrix::from_rows(f, rows).expect("kernel rows");
        if m.rows == 0 {
            m.cols = self.cols;
        }
        // Canonicalize: free columns descend, so re-echelonize.
        m.rref_in_place();
        m
    }

    /// Solve self * x = b for a single exact solution, free variables set
    /// to zero after echelon reduction. `None` when inconsistent.
    pub fn solve(&self, b: &Matrix<K>) -> Result<Option<Matrix<K>>> {
        if b.rows != self.rows || b.cols != 1 {
            return Err(Error::shape("solve: rhs shape"));
        }
        let f = self.field.clone();
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        // Inconsistent iff some pivot sits in the rhs column.
        if pivots.iter().any(|&c| c == self.cols) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r.get(row, self.cols).clone();
        }
        Ok(Some(Matrix::col_vector(f, x)))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::shape("inverse of non-square matrix"));
        }
        let n = self.rows;
        let id = Matrix::identity(self.field.clone(), n);
        let aug = self.hstack(&id)?;
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::NotInvertible(format!("{n}x{n} matrix is singular")));
        }
        Ok(Matrix::from_fn(self.field.clone(), n, n, |i, j| {
            r.get(i, n + j).clone()
        }))
    }

    /// Apply a linear substitution to the column index: out[:, j] = sum_k g[j, k] * self[:, k].
    ///
    /// This is the standard covariant transform of the second tensor slot.
    pub fn transform_cols(&self, g: &Matrix<K>) -> Result<Self> {
        if g.cols != self.cols {
            return Err(Error::shape("transform_cols shape"));
        }
        // out = self * g^T
        self.mul(&g.transpose())
    }

    /// Flatten to a single column in row-major order.
    pub fn vec(&self) -> Matrix<K> {
        Matrix {
            field: self.field.clone(),
            rows: self.rows * self.cols,
            cols: 1,
            entries: self.entries.clone(),
        }
    }

    /// Inverse of `vec`: reshape a column vector into rows x cols.
    pub fn unvec(field: K, v: &Matrix<K>, rows: usize, cols: usize) -> Result<Matrix<K>> {
        if v.cols != 1 || v.rows != rows * cols {
            return Err(Error::shape("unvec shape"));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries: v.entries.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn rank_examples() {
        let q = Rationals;
        assert_eq!(Matrix::identity(q, 2).rank(), 2);
        assert_eq!(Matrix::zero(q, 3, 4).rank(), 0);
        let m = Matrix::from_i64(q, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        let m = Matrix::from_i64(q, 1, 2, &[1, 0]);
        let k = m.kernel_basis_rows();
        assert_eq!(k.rows, 1);
        assert_eq!(k.row(0), &[q.from_i64(0), q.from_i64(1)]);

        let inv = Matrix::from_i64(q, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(inv.kernel_basis_rows().rows, 0);

        let f2 = PrimeField::new(2).unwrap();
        let m = Matrix::from_i64(f2, 1, 3, &[1, 1, 1]);
        let k = m.kernel_basis_rows();
        assert_eq!(k.rows, 2);
        // Oracle: enumerate all 8 vectors of F_2^3 and keep the annihilated ones.
        let mut annihilated = vec![];
        for bits in 0u64..8 {
            let v = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            if (v[0] + v[1] + v[2]) % 2 == 0 && bits != 0 {
                annihilated.push(v);
            }
        }
        assert_eq!(annihilated.len(), 3); // the 2-dim kernel minus zero
        assert!(annihilated.contains(&[1, 1, 0]));
        // (1,1,0) must lie in the computed kernel span.
        let target = Matrix::from_i64(f2, 1, 3, &[1, 1, 0]);
        let stacked = k.vstack(&target).unwrap();
        assert_eq!(stacked.rank(), k.rank());
    }

    #[test]
    fn solve_examples() {
        let q = Rationals;
        let id = Matrix::identity(q, 2);
        let b = Matrix::from_i64(q, 2, 1, &[3, 5]);
        let x = id.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);

        let m = Matrix::from_i64(q, 1, 2, &[1, 1]);
        let b = Matrix::from_i64(q, 1, 1, &[4]);
        let x = m.solve(&b).unwrap().unwrap();
        // Free variable zeroed.
        assert_eq!(x, Matrix::from_i64(q, 2, 1, &[4, 0]));

        let z = Matrix::from_i64(q, 1, 1, &[0]);
        let b = Matrix::from_i64(q, 1, 1, &[1]);
        assert!(z.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_is_exact() {
        let q = Rationals;
        let m = Matrix::from_i64(q, 2, 3, &[2, 4, 1, 0, 3, 5]);
        let b = Matrix::from_i64(q, 2, 1, &[7, 11]);
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(m.mul(&x).unwrap(), b);
    }

    #[test]
    fn inverse_round_trip() {
        let f5 = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(f5, 2, 2, &[1, 2, 3, 4]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f5, 2));
        let sing = Matrix::from_i64(f5, 2, 2, &[1, 2, 2, 4]);
        assert!(sing.inverse().is_err());
    }
}
