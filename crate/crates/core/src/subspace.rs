//! Subspaces of F^n in canonical reduced row-echelon presentation,
//! exhaustive enumeration over prime fields, and seeded random sampling.
//!
//! Equal subspaces have identical representations, so subspace equality
//! is structural comparison of matrices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A subspace of F^ambient_dim, stored as an RREF basis matrix with one
/// basis vector per row and full row rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<K: Field> {
    pub ambient_dim: usize,
    pub basis: Matrix<K>,
}

impl<K: Field> Subspace<K> {
    pub fn zero(field: K, ambient_dim: usize) -> Self {
        let mut basis = Matrix::zero(field, 0, ambient_dim);
        basis.cols = ambient_dim;
        Subspace { ambient_dim, basis }
    }

    pub fn full(field: K, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    /// Canonicalize a spanning set (rows) into an RREF basis.
    pub fn from_span(rows: Matrix<K>) -> Self {
        let ambient_dim = rows.cols;
        let f = rows.field.clone();
        let (r, pivots) = rows.rref();
        let dim = pivots.len();
        let basis = Matrix::from_fn(f, dim, ambient_dim, |i, j| r.get(i, j).clone());
        Subspace { ambient_dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn field(&self) -> &K {
        &self.basis.field
    }

    /// Pivot columns of the basis.
    pub fn pivots(&self) -> Vec<usize> {
        let f = self.field();
        (0..self.basis.rows)
            .map(|i| (0..self.ambient_dim).find(|&j| !f.is_zero(self.basis.get(i, j))).unwrap())
            .collect()
    }

    pub fn contains_vector(&self, v: &Matrix<K>) -> bool {
        debug_assert_eq!(v.cols, 1);
        debug_assert_eq!(v.rows, self.ambient_dim);
        let row = v.transpose();
        match self.basis.vstack(&row) {
            Ok(stacked) => stacked.rank() == self.dim(),
            Err(_) => false,
        }
    }

    pub fn contains(&self, other: &Subspace<K>) -> bool {
        if other.dim() > self.dim() {
            return false;
        }
        let stacked = self.basis.vstack(&other.basis).expect("same ambient");
        stacked.rank() == self.dim()
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        let stacked = self.basis.vstack(&other.basis).expect("same ambient");
        Subspace::from_span(stacked)
    }

    /// Intersection via the kernel of the stacked coordinate matrix.
    pub fn intersect(&self, other: &Subspace<K>) -> Subspace<K> {
        // x in both spans: x = a^T * B1 = b^T * B2. Solve [B1^T | -B2^T] kernel.
        let f = self.field().clone();
        let b1t = self.basis.transpose();
        let b2t = other.basis.transpose();
        let neg = b2t.scale(&f.neg(&f.one()));
        let m = match b1t.hstack(&neg) {
            Ok(m) => m,
            Err(_) => return Subspace::zero(f, self.ambient_dim),
        };
        let ker = m.kernel_basis_rows();
        let mut rows = Vec::new();
        for i in 0..ker.rows {
            // First block of coefficients against basis 1.
            let coeffs = Matrix::from_fn(f.clone(), 1, self.dim(), |_, j| ker.get(i, j).clone());
            let v = coeffs.mul(&self.basis).expect("span mult");
            rows.push(v.row(0).to_vec());
        }
        let span = Matrix::from_rows(f, rows).expect("intersection rows");
        if span.rows == 0 {
            return Subspace::zero(self.field().clone(), self.ambient_dim);
        }
        Subspace::from_span(span)
    }

    /// Coordinate subspace complementary to the pivot columns; a canonical
    /// complement of this subspace in the ambient space.
    pub fn pivot_complement_coords(&self) -> Vec<usize> {
        let pivots = self.pivots();
        (0..self.ambient_dim).filter(|c| !pivots.contains(c)).collect()
    }

    /// Extend this subspace to dimension `target_dim` with vectors taken
    /// from `within` (smallest echelon rows first). Deterministic.
    pub fn extend_within(&self, within: &Subspace<K>, target_dim: usize) -> Option<Subspace<K>> {
        if target_dim < self.dim() || !within.contains(self) {
            return None;
        }
        let mut current = self.clone();
        for i in 0..within.dim() {
            if current.dim() == target_dim {
                break;
            }
            let row = Matrix::from_fn(self.field().clone(), 1, self.ambient_dim, |_, j| {
                within.basis.get(i, j).clone()
            });
            let candidate = Subspace::from_span(current.basis.vstack(&row).ok()?);
            if candidate.dim() > current.dim() {
                current = candidate;
            }
        }
        (current.dim() == target_dim).then_some(current)
    }

    /// Coefficients of `v` against this basis; `None` if `v` is outside.
    pub fn coefficients_of(&self, v: &Matrix<K>) -> Option<Matrix<K>> {
        self.basis.transpose().solve(v).ok().flatten()
    }
}

/// Gaussian binomial [n choose k]_p, saturating at u128::MAX.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> u128 {
    if k > n {
        return 0;
    }
    // Product formula with exact division: prod (p^(n-i) - 1) / (p^(k-i) - 1).
    // Evaluate iteratively in u128 with saturation.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(pow_sat(p, n - i).saturating_sub(1));
        den = den.saturating_mul(pow_sat(p, k - i).saturating_sub(1));
    }
    if num == u128::MAX {
        return u128::MAX;
    }
    num / den
}

fn pow_sat(p: u64, e: usize) -> u128 {
    let mut r: u128 = 1;
    for _ in 0..e {
        r = r.saturating_mul(p as u128);
    }
    r
}

/// Total number of subspaces of F_p^n, all dimensions.
pub fn subspace_count_all_dims(n: usize, p: u64) -> u128 {
    (0..=n).fold(0u128, |acc, k| acc.saturating_add(gaussian_binomial(n, k, p)))
}

/// Exhaustive enumeration of the d-dimensional subspaces of F_p^n in a
/// deterministic order: lexicographic over pivot-column patterns, then
/// lexicographic over the free entries.
#[derive(Debug)]
pub struct SubspaceEnumerator<K: Field> {
    field: K,
    n: usize,
    d: usize,
    pivot_sets: Vec<Vec<usize>>,
    pivot_idx: usize,
    free_positions: Vec<(usize, usize)>,
    counter: Vec<u64>,
    done_current: bool,
}

impl<K: Field> SubspaceEnumerator<K> {
    pub fn new(field: K, n: usize, d: usize, budget: u128) -> Result<Self> {
        let p = field
            .cardinality()
            .ok_or_else(|| Error::invalid("subspace enumeration needs a finite field"))?;
        let count = gaussian_binomial(n, d, p);
        if count > budget {
            return Err(Error::budget(
                format!("enumerate {d}-dim subspaces of F_{p}^{n}"),
                count,
                budget,
            ));
        }
        let pivot_sets = combinations(n, d);
        let mut e = SubspaceEnumerator {
            field,
            n,
            d,
            pivot_sets,
            pivot_idx: 0,
            free_positions: Vec::new(),
            counter: Vec::new(),
            done_current: false,
        };
        e.reset_pattern();
        Ok(e)
    }

    fn reset_pattern(&mut self) {
        if self.pivot_idx >= self.pivot_sets.len() {
            return;
        }
        let pivots = &self.pivot_sets[self.pivot_idx];
        // Free entries of an RREF matrix with these pivots: position (i, j)
        // with j > pivots[i] and j not a pivot column.
        self.free_positions.clear();
        for (i, &pc) in pivots.iter().enumerate() {
            for j in (pc + 1)..self.n {
                if !pivots.contains(&j) {
                    self.free_positions.push((i, j));
                }
            }
        }
        self.counter = vec![0; self.free_positions.len()];
        self.done_current = false;
    }

    fn current(&self) -> Subspace<K> {
        let pivots = &self.pivot_sets[self.pivot_idx];
        let f = self.field.clone();
        let mut basis = Matrix::zero(f.clone(), self.d, self.n);
        for (i, &pc) in pivots.iter().enumerate() {
            basis.set(i, pc, f.one());
        }
        for (idx, &(i, j)) in self.free_positions.iter().enumerate() {
            basis.set(i, j, f.element_at(self.counter[idx]));
        }
        Subspace {
            ambient_dim: self.n,
            basis,
        }
    }

    fn advance(&mut self) {
        let p = self.field.cardinality().unwrap();
        for idx in (0..self.counter.len()).rev() {
            self.counter[idx] += 1;
            if self.counter[idx] < p {
                return;
            }
            self.counter[idx] = 0;
        }
        self.done_current = true;
    }
}

impl<K: Field> Iterator for SubspaceEnumerator<K> {
    type Item = Subspace<K>;

    fn next(&mut self) -> Option<Subspace<K>> {
        if self.d > self.n {
            return None;
        }
        loop {
            if self.pivot_idx >= self.pivot_sets.len() {
                return None;
            }
            if self.done_current {
                self.pivot_idx += 1;
                self.reset_pattern();
                continue;
            }
            let s = self.current();
            self.advance();
            return Some(s);
        }
    }
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    if d > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        // Next combination in lexicographic order.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - d {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..d {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Enumerate all d-dimensional subspaces of F_p^n (budget-guarded).
pub fn enumerate_subspaces<K: Field>(
    field: K,
    ambient_dim: usize,
    dim: usize,
    budget: u128,
) -> Result<SubspaceEnumerator<K>> {
    SubspaceEnumerator::new(field, ambient_dim, dim, budget)
}

/// Enumerate all subspaces of every dimension 0..=n.
pub fn enumerate_all_subspaces<K: Field>(
    field: K,
    ambient_dim: usize,
    budget: u128,
) -> Result<Vec<Subspace<K>>> {
    let p = field
        .cardinality()
        .ok_or_else(|| Error::invalid("subspace enumeration needs a finite field"))?;
    let total = subspace_count_all_dims(ambient_dim, p);
    if total > budget {
        return Err(Error::budget(
            format!("enumerate all subspaces of F_{p}^{ambient_dim}"),
            total,
            budget,
        ));
    }
    let mut out = Vec::new();
    for d in 0..=ambient_dim {
        out.extend(SubspaceEnumerator::new(field.clone(), ambient_dim, d, budget)?);
    }
    Ok(out)
}

/// `count` draws of d-dimensional subspaces from uniformly random matrices
/// canonicalized to echelon form, deduplicated; deterministic per seed.
pub fn sample_subspaces<K: Field>(
    field: K,
    ambient_dim: usize,
    dim: usize,
    count: usize,
    seed: u64,
) -> Vec<Subspace<K>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: Vec<Subspace<K>> = Vec::new();
    for _ in 0..count {
        let m = Matrix::from_fn(field.clone(), dim, ambient_dim, |_, _| field.sample(&mut rng));
        let s = Subspace::from_span(m);
        if s.dim() == dim && !seen.contains(&s) {
            seen.push(s);
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn gaussian_binomials() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(3, 2, 2), 7);
        assert_eq!(gaussian_binomial(4, 2, 3), 130);
        assert_eq!(gaussian_binomial(3, 0, 5), 1);
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomial() {
        let f2 = PrimeField::new(2).unwrap();
        let lines: Vec<_> = enumerate_subspaces(f2, 2, 1, 1 << 20).unwrap().collect();
        assert_eq!(lines.len(), 3);
        let planes: Vec<_> = enumerate_subspaces(f2, 3, 2, 1 << 20).unwrap().collect();
        assert_eq!(planes.len(), 7);
        // Pairwise distinct.
        for (i, a) in planes.iter().enumerate() {
            for b in &planes[i + 1..] {
                assert_ne!(a, b);
            }
        }
        let zero: Vec<_> = enumerate_subspaces(f2, 4, 0, 1 << 20).unwrap().collect();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_zero());
    }

    #[test]
    fn enumeration_budget_guard() {
        let f3 = PrimeField::new(3).unwrap();
        let err = enumerate_subspaces(f3, 4, 2, 10).unwrap_err();
        match err {
            crate::error::Error::Budget { needed, .. } => assert_eq!(needed, 130),
            other => panic!("expected budget error, got {other}"),
        }
    }

    #[test]
    fn sampling_is_deterministic_and_covers() {
        let f2 = PrimeField::new(2).unwrap();
        let a = sample_subspaces(f2, 3, 1, 100, 42);
        let b = sample_subspaces(f2, 3, 1, 100, 42);
        assert_eq!(a, b);
        assert_eq!(a.len(), 7); // all 7 lines of F_2^3 found with 100 draws

        let f3 = PrimeField::new(3).unwrap();
        let sampled = sample_subspaces(f3, 4, 2, 10_000, 7);
        let all: Vec<_> = enumerate_subspaces(f3, 4, 2, 1 << 20).unwrap().collect();
        assert_eq!(sampled.len(), all.len()); // covers all 130 planes
        for s in &sampled {
            assert!(all.contains(s));
        }
    }

    #[test]
    fn full_space_sampled_once() {
        let q = Rationals;
        let s = sample_subspaces(q, 2, 2, 5, 1);
        assert_eq!(s.len(), 1);
        assert!(s[0].is_full());
    }

    #[test]
    fn canonical_form_idempotent() {
        let f5 = PrimeField::new(5).unwrap();
        let m = Matrix::from_i64(f5, 2, 3, &[2, 4, 1, 3, 1, 0]);
        let s = Subspace::from_span(m);
        let s2 = Subspace::from_span(s.basis.clone());
        assert_eq!(s, s2);
    }

    #[test]
    fn lattice_ops() {
        let f2 = PrimeField::new(2).unwrap();
        let e1 = Subspace::from_span(Matrix::from_i64(f2, 1, 3, &[1, 0, 0]));
        let e12 = Subspace::from_span(Matrix::from_i64(f2, 2, 3, &[1, 0, 0, 0, 1, 0]));
        let e23 = Subspace::from_span(Matrix::from_i64(f2, 2, 3, &[0, 1, 0, 0, 0, 1]));
        assert!(e12.contains(&e1));
        assert!(!e23.contains(&e1));
        let meet = e12.intersect(&e23);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains_vector(&Matrix::from_i64(f2, 3, 1, &[0, 1, 0])));
        let join = e1.sum(&e23);
        assert!(join.is_full());
    }

    #[test]
    fn extend_within_interval() {
        let f3 = PrimeField::new(3).unwrap();
        let a = Subspace::from_span(Matrix::from_i64(f3, 1, 3, &[1, 0, 0]));
        let b = Subspace::full(f3, 3);
        let mid = a.extend_within(&b, 2).unwrap();
        assert_eq!(mid.dim(), 2);
        assert!(mid.contains(&a) && b.contains(&mid));
        assert!(a.extend_within(&a, 2).is_none());
    }
}
