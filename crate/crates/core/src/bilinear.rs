//! Bilinear maps A (x) B -> C between coordinatized spaces, stored as
//! matrices over the tensor basis, plus the contraction helpers used by
//! the abstract complex spaces.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A bilinear map A (x) B -> C. The matrix has shape out_dim x (a_dim * b_dim)
/// with column index i * b_dim + j for basis pair (a_i, b_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bilinear<K: Field> {
    pub a_dim: usize,
    pub b_dim: usize,
    pub out_dim: usize,
    pub matrix: Matrix<K>,
}

impl<K: Field> Bilinear<K> {
    pub fn new(a_dim: usize, b_dim: usize, out_dim: usize, matrix: Matrix<K>) -> Result<Self> {
        if matrix.rows != out_dim || matrix.cols != a_dim * b_dim {
            return Err(Error::shape(format!(
                "bilinear matrix {}x{} does not match {}x({}*{})",
                matrix.rows, matrix.cols, out_dim, a_dim, b_dim
            )));
        }
        Ok(Bilinear {
            a_dim,
            b_dim,
            out_dim,
            matrix,
        })
    }

    pub fn zero(field: K, a_dim: usize, b_dim: usize, out_dim: usize) -> Self {
        Bilinear {
            a_dim,
            b_dim,
            out_dim,
            matrix: Matrix::zero(field, out_dim, a_dim * b_dim),
        }
    }

    pub fn field(&self) -> &K {
        &self.matrix.field
    }

    /// Image of a basis pair.
    pub fn on_basis(&self, i: usize, j: usize) -> Matrix<K> {
        let col = i * self.b_dim + j;
        Matrix::from_fn(self.field().clone(), self.out_dim, 1, |r, _| {
            self.matrix.get(r, col).clone()
        })
    }

    /// Apply to column vectors a (a_dim x 1) and b (b_dim x 1).
    pub fn apply(&self, a: &Matrix<K>, b: &Matrix<K>) -> Result<Matrix<K>> {
        if a.rows != self.a_dim || b.rows != self.b_dim || a.cols != 1 || b.cols != 1 {
            return Err(Error::shape("bilinear apply shapes"));
        }
        let t = a.kron(b);
        self.matrix.mul(&t)
    }

    /// Apply to a tensor u in A (x) B given as a column of length a_dim*b_dim.
    pub fn apply_tensor(&self, u: &Matrix<K>) -> Result<Matrix<K>> {
        if u.rows != self.a_dim * self.b_dim || u.cols != 1 {
            return Err(Error::shape("bilinear apply_tensor shape"));
        }
        self.matrix.mul(u)
    }

    /// The induced linear map A -> C (x) B^* ... materialized as the map
    /// A -> Hom-coordinates with b fixed: partial application on the right.
    pub fn fix_right(&self, b: &Matrix<K>) -> Result<Matrix<K>> {
        if b.rows != self.b_dim || b.cols != 1 {
            return Err(Error::shape("fix_right shape"));
        }
        // out[r, i] = sum_j matrix[r, i*b+j] * b[j]
        let f = self.field().clone();
        Ok(Matrix::from_fn(f.clone(), self.out_dim, self.a_dim, |r, i| {
            let mut acc = f.zero();
            for j in 0..self.b_dim {
                f.add_mul_assign(&mut acc, self.matrix.get(r, i * self.b_dim + j), b.get(j, 0));
            }
            acc
        }))
    }

    /// Partial application on the left: the matrix of b -> f(a, b).
    pub fn fix_left(&self, a: &Matrix<K>) -> Result<Matrix<K>> {
        if a.rows != self.a_dim || a.cols != 1 {
            return Err(Error::shape("fix_left shape"));
        }
        let f = self.field().clone();
        Ok(Matrix::from_fn(f.clone(), self.out_dim, self.b_dim, |r, j| {
            let mut acc = f.zero();
            for i in 0..self.a_dim {
                f.add_mul_assign(&mut acc, self.matrix.get(r, i * self.b_dim + j), a.get(i, 0));
            }
            acc
        }))
    }

    /// Tensor with the identity of F^k on the B side:
    /// A (x) (B (x) F^k) -> C (x) F^k.
    pub fn tensor_identity_right(&self, k: usize) -> Bilinear<K> {
        let f = self.field().clone();
        let b_dim = self.b_dim * k;
        let out_dim = self.out_dim * k;
        let matrix = Matrix::from_fn(f.clone(), out_dim, self.a_dim * b_dim, |r, c| {
            let (out_c, out_k) = (r / k, r % k);
            let i = c / b_dim;
            let rest = c % b_dim;
            let (j, jk) = (rest / k, rest % k);
            if jk == out_k {
                self.matrix.get(out_c, i * self.b_dim + j).clone()
            } else {
                f.zero()
            }
        });
        Bilinear {
            a_dim: self.a_dim,
            b_dim,
            out_dim,
            matrix,
        }
    }

    /// Image subspace of A (x) S under the map, for a subspace S of B (x) F^k
    /// when this map is already tensored, or plain S of B otherwise.
    pub fn image_of_left_full(&self, s_basis: &[Matrix<K>]) -> crate::subspace::Subspace<K> {
        let f = self.field().clone();
        let mut rows = Vec::new();
        for s in s_basis {
            for i in 0..self.a_dim {
                let mut a = Matrix::zero(f.clone(), self.a_dim, 1);
                a.set(i, 0, f.one());
                let img = self.apply(&a, s).expect("image span");
                rows.push(img.transpose().row(0).to_vec());
            }
        }
        let span = Matrix::from_rows(f.clone(), rows).expect("image rows");
        if span.rows == 0 {
            return crate::subspace::Subspace::zero(f, self.out_dim);
        }
        crate::subspace::Subspace::from_span(span)
    }

    /// Swap the two arguments: B (x) A -> C.
    pub fn flip(&self) -> Bilinear<K> {
        let matrix = Matrix::from_fn(
            self.field().clone(),
            self.out_dim,
            self.a_dim * self.b_dim,
            |r, c| {
                let (j, i) = (c / self.a_dim, c % self.a_dim);
                self.matrix.get(r, i * self.b_dim + j).clone()
            },
        );
        Bilinear {
            a_dim: self.b_dim,
            b_dim: self.a_dim,
            out_dim: self.out_dim,
            matrix,
        }
    }
}

/// Contraction of matrices over a shared column index:
/// u in X (x) M (x-rows, m-cols), v in Y (x) M^* (y-rows, m-cols)
/// -> sum_m u[:,m] (x) v[:,m] in X (x) Y, as a column of length x*y.
pub fn contract_columns<K: Field>(u: &Matrix<K>, v: &Matrix<K>) -> Result<Matrix<K>> {
    if u.cols != v.cols {
        return Err(Error::shape("contract_columns: column counts differ"));
    }
    let f = u.field.clone();
    let mut out = Matrix::zero(f.clone(), u.rows * v.rows, 1);
    for m in 0..u.cols {
        for i in 0..u.rows {
            let a = u.get(i, m);
            if f.is_zero(a) {
                continue;
            }
            for k in 0..v.rows {
                let mut cur = out.get(i * v.rows + k, 0).clone();
                f.add_mul_assign(&mut cur, a, v.get(k, m));
                out.set(i * v.rows + k, 0, cur);
            }
        }
    }
    Ok(out)
}

/// Quotient of F^n by an RREF subspace, presented by the coordinates
/// complementary to the subspace's pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient<K: Field> {
    pub subspace: crate::subspace::Subspace<K>,
    /// q x n projection matrix.
    pub projection: Matrix<K>,
    /// n x q section with projection * section = identity.
    pub section: Matrix<K>,
}

impl<K: Field> Quotient<K> {
    pub fn new(subspace: crate::subspace::Subspace<K>) -> Self {
        let f = subspace.field().clone();
        let n = subspace.ambient_dim;
        let pivots = subspace.pivots();
        let free = subspace.pivot_complement_coords();
        let q = free.len();
        // Reduced representative of e_j: subtract pivot-row multiples, then
        // read off the free coordinates.
        let mut projection = Matrix::zero(f.clone(), q, n);
        for (qi, &c) in free.iter().enumerate() {
            projection.set(qi, c, f.one());
        }
        for (row, &pc) in pivots.iter().enumerate() {
            // e_pc reduces to e_pc - basis_row, whose free part is -basis_row.
            for (qi, &c) in free.iter().enumerate() {
                projection.set(qi, pc, f.neg(subspace.basis.get(row, c)));
            }
        }
        let mut section = Matrix::zero(f.clone(), n, q);
        for (qi, &c) in free.iter().enumerate() {
            section.set(c, qi, f.one());
        }
        Quotient {
            subspace,
            projection,
            section,
        }
    }

    pub fn dim(&self) -> usize {
        self.projection.rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::subspace::Subspace;

    #[test]
    fn apply_and_partials_agree() {
        let q = Rationals;
        // f(a, b) with matrix rows: out = [a0*b0 + 2 a1*b1, a0*b1]
        let m = Matrix::from_i64(q, 2, 4, &[1, 0, 0, 2, 0, 1, 0, 0]);
        let f = Bilinear::new(2, 2, 2, m).unwrap();
        let a = Matrix::from_i64(q, 2, 1, &[3, 5]);
        let b = Matrix::from_i64(q, 2, 1, &[7, 11]);
        let direct = f.apply(&a, &b).unwrap();
        assert_eq!(direct, Matrix::from_i64(q, 2, 1, &[3 * 7 + 2 * 5 * 11, 3 * 11]));
        assert_eq!(f.fix_right(&b).unwrap().mul(&a).unwrap(), direct);
        assert_eq!(f.fix_left(&a).unwrap().mul(&b).unwrap(), direct);
        assert_eq!(f.flip().apply(&b, &a).unwrap(), direct);
    }

    #[test]
    fn tensor_identity_right_shapes() {
        let f2 = PrimeField::new(2).unwrap();
        let m = Matrix::from_i64(f2, 1, 2, &[1, 1]);
        let f = Bilinear::new(1, 2, 1, m).unwrap();
        let fk = f.tensor_identity_right(3);
        assert_eq!(fk.b_dim, 6);
        assert_eq!(fk.out_dim, 3);
        // (a (x) (b (x) e_k)) goes to f(a,b) (x) e_k.
        let a = Matrix::from_i64(f2, 1, 1, &[1]);
        let mut b = Matrix::zero(f2, 6, 1);
        b.set(1 * 3 + 1, 0, 1); // basis pair (b_1, e_1)
        let out = fk.apply(&a, &b).unwrap();
        // f(a, b_1) = 1, placed in the e_1 slot.
        assert_eq!(out, Matrix::from_i64(f2, 3, 1, &[0, 1, 0]));
    }

    #[test]
    fn contraction_matches_manual_sum() {
        let q = Rationals;
        let u = Matrix::from_i64(q, 2, 2, &[1, 2, 3, 4]);
        let v = Matrix::from_i64(q, 1, 2, &[5, 7]);
        let c = contract_columns(&u, &v).unwrap();
        // sum_m u[:,m] (x) v[:,m] = (1*5+2*7, 3*5+4*7)
        assert_eq!(c, Matrix::from_i64(q, 2, 1, &[19, 43]));
    }

    #[test]
    fn quotient_projection_section() {
        let f5 = PrimeField::new(5).unwrap();
        let s = Subspace::from_span(Matrix::from_i64(f5, 1, 3, &[1, 2, 0]));
        let quo = Quotient::new(s.clone());
        assert_eq!(quo.dim(), 2);
        let ps = quo.projection.mul(&quo.section).unwrap();
        assert_eq!(ps, Matrix::identity(f5, 2));
        // The subspace dies in the quotient.
        let v = s.basis.transpose();
        assert!(quo.projection.mul(&v).unwrap().is_zero());
    }
}
