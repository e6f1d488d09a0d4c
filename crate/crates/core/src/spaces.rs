//! Abstract spaces of complexes of type 1 and type 2, their points, and
//! the non-reductive group actions.
//!
//! A type-1 space carries spaces Z1..Z4, H, T, M with structure maps
//! sigma: Z1(x)H -> Z2 (surjective), sigma': H(x)Z4 -> Z3 (embedding Z4 into
//! H*(x)Z3), tau: Z1(x)Z3 -> T and tau': Z2(x)Z4 -> T making the exchange
//! square commute. Its total space consists of tuples (phi1, z2, phi3, z4)
//! with tau<phi1, phi3> + tau'(z2 (x) z4) = 0. The acting group combines
//! scalars on the outer spaces with the triangular group of the middle term,
//! whose strictly triangular part is the unipotent radical.
//!
//! Type-2 spaces are the mutated shape: Z1, Y2, T2, Z3, T, K, N with
//! nu: K(x)Y2 -> Z1 (embedding K into Z1(x)Y2*), lambda: Y2(x)Z3 -> T2
//! (surjective), nu': K(x)T2 -> T, and a reductive GL(N) factor.

use rand::Rng;

use crate::bilinear::{contract_columns, Bilinear, Quotient};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type1Space<K: Field> {
    pub field: K,
    pub z1: usize,
    pub z2: usize,
    pub z3: usize,
    pub z4: usize,
    pub h: usize,
    pub t: usize,
    pub m: usize,
    /// Z1 (x) H -> Z2, surjective.
    pub sigma: Bilinear<K>,
    /// H (x) Z4 -> Z3, inducing an injection Z4 -> H* (x) Z3.
    pub sigma_p: Bilinear<K>,
    /// Z1 (x) Z3 -> T.
    pub tau: Bilinear<K>,
    /// Z2 (x) Z4 -> T.
    pub tau_p: Bilinear<K>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type1Point<K: Field> {
    /// z1 x m.
    pub phi1: Matrix<K>,
    /// z2 x 1.
    pub z2: Matrix<K>,
    /// z3 x m (columns indexed by the M* basis).
    pub phi3: Matrix<K>,
    /// z4 x 1.
    pub z4: Matrix<K>,
}

impl<K: Field> Type1Space<K> {
    pub fn new(
        field: K,
        dims: (usize, usize, usize, usize, usize, usize, usize),
        sigma: Bilinear<K>,
        sigma_p: Bilinear<K>,
        tau: Bilinear<K>,
        tau_p: Bilinear<K>,
    ) -> Result<Self> {
        let (z1, z2, z3, z4, h, t, m) = dims;
        let space = Type1Space {
            field,
            z1,
            z2,
            z3,
            z4,
            h,
            t,
            m,
            sigma,
            sigma_p,
            tau,
            tau_p,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        let shapes = [
            (self.sigma.a_dim, self.z1, "sigma left"),
            (self.sigma.b_dim, self.h, "sigma right"),
            (self.sigma.out_dim, self.z2, "sigma out"),
            (self.sigma_p.a_dim, self.h, "sigma' left"),
            (self.sigma_p.b_dim, self.z4, "sigma' right"),
            (self.sigma_p.out_dim, self.z3, "sigma' out"),
            (self.tau.a_dim, self.z1, "tau left"),
            (self.tau.b_dim, self.z3, "tau right"),
            (self.tau.out_dim, self.t, "tau out"),
            (self.tau_p.a_dim, self.z2, "tau' left"),
            (self.tau_p.b_dim, self.z4, "tau' right"),
            (self.tau_p.out_dim, self.t, "tau' out"),
        ];
        for (got, want, what) in shapes {
            if got != want {
                return Err(Error::shape(format!("{what}: {got} != {want}")));
            }
        }
        if self.sigma.matrix.rank() != self.z2 {
            return Err(Error::hypothesis(
                "sigma: Z1 (x) H -> Z2 is not surjective".to_string(),
            ));
        }
        if self.sigma_p_embedding().rank() != self.z4 {
            return Err(Error::hypothesis(
                "sigma' does not embed Z4 into H* (x) Z3".to_string(),
            ));
        }
        // Exchange square (D): tau'(sigma(z1 (x) h) (x) z4) = tau(z1 (x) sigma'(h (x) z4)).
        let f = &self.field;
        for i in 0..self.z1 {
            let mut ei = Matrix::zero(f.clone(), self.z1, 1);
            ei.set(i, 0, f.one());
            for hh in 0..self.h {
                let mut eh = Matrix::zero(f.clone(), self.h, 1);
                eh.set(hh, 0, f.one());
                let s = self.sigma.apply(&ei, &eh)?;
                for j in 0..self.z4 {
                    let mut ej = Matrix::zero(f.clone(), self.z4, 1);
                    ej.set(j, 0, f.one());
                    let left = self.tau_p.apply(&s, &ej)?;
                    let sp = self.sigma_p.apply(&eh, &ej)?;
                    let right = self.tau.apply(&ei, &sp)?;
                    if left != right {
                        return Err(Error::hypothesis(format!(
                            "exchange square fails at basis (z1={i}, h={hh}, z4={j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The injection Z4 -> H* (x) Z3 induced by sigma', as a matrix with
    /// row index hh * z3 + k and column index the Z4 basis.
    pub fn sigma_p_embedding(&self) -> Matrix<K> {
        let f = self.field.clone();
        Matrix::from_fn(f.clone(), self.h * self.z3, self.z4, |row, j| {
            let (hh, k) = (row / self.z3, row % self.z3);
            self.sigma_p.on_basis(hh, j).get(k, 0).clone()
        })
    }

    /// Image of z4 in H* (x) Z3, as a z3 x h matrix (columns = H* slots).
    pub fn z4_as_matrix(&self, z4: &Matrix<K>) -> Result<Matrix<K>> {
        let emb = self.sigma_p_embedding().mul(z4)?;
        Ok(Matrix::from_fn(self.field.clone(), self.z3, self.h, |k, hh| {
            emb.get(hh * self.z3 + k, 0).clone()
        }))
    }

    /// Membership of the defining quadric; the residual lives in T.
    pub fn residual(&self, x: &Type1Point<K>) -> Result<Matrix<K>> {
        if x.phi1.rows != self.z1
            || x.phi1.cols != self.m
            || x.z2.rows != self.z2
            || x.phi3.rows != self.z3
            || x.phi3.cols != self.m
            || x.z4.rows != self.z4
        {
            return Err(Error::shape("type-1 point shape"));
        }
        let c = contract_columns(&x.phi1, &x.phi3)?;
        let t1 = self.tau.apply_tensor(&c)?;
        let t2 = self.tau_p.apply(&x.z2, &x.z4)?;
        t1.add(&t2)
    }

    pub fn is_point(&self, x: &Type1Point<K>) -> Result<bool> {
        Ok(self.residual(x)?.is_zero())
    }

    /// The map W_C -> T invariant under the triangular group.
    pub fn invariant_value(&self, x: &Type1Point<K>) -> Result<Matrix<K>> {
        self.residual(x)
    }

    pub fn zero_point(&self) -> Type1Point<K> {
        let f = self.field.clone();
        Type1Point {
            phi1: Matrix::zero(f.clone(), self.z1, self.m),
            z2: Matrix::zero(f.clone(), self.z2, 1),
            phi3: Matrix::zero(f.clone(), self.z3, self.m),
            z4: Matrix::zero(f, self.z4, 1),
        }
    }

    /// Enumerate all points of the total space over a finite field.
    pub fn enumerate_points(&self, budget: u128) -> Result<Vec<Type1Point<K>>> {
        let p = self
            .field
            .cardinality()
            .ok_or_else(|| Error::invalid("point enumeration needs a finite field"))?;
        let coords = self.z1 * self.m + self.z2 + self.z3 * self.m + self.z4;
        let total = pow_count(p, coords);
        if total > budget {
            return Err(Error::budget("type-1 point enumeration", total, budget));
        }
        let f = self.field.clone();
        let mut out = Vec::new();
        let mut digits = vec![0u64; coords];
        loop {
            let mut it = digits.iter().map(|&d| f.element_at(d));
            let phi1 = Matrix::from_fn(f.clone(), self.z1, self.m, |_, _| it.next().unwrap());
            let z2 = Matrix::from_fn(f.clone(), self.z2, 1, |_, _| it.next().unwrap());
            let phi3 = Matrix::from_fn(f.clone(), self.z3, self.m, |_, _| it.next().unwrap());
            let z4 = Matrix::from_fn(f.clone(), self.z4, 1, |_, _| it.next().unwrap());
            let x = Type1Point { phi1, z2, phi3, z4 };
            if self.is_point(&x)? {
                out.push(x);
            }
            if !advance(&mut digits, p) {
                break;
            }
        }
        Ok(out)
    }
}

pub(crate) fn pow_count(p: u64, e: usize) -> u128 {
    let mut total: u128 = 1;
    for _ in 0..e {
        total = total.saturating_mul(p as u128);
    }
    total
}

pub(crate) fn advance(digits: &mut [u64], radix: u64) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Element of the type-1 group: scalars for the outer automorphisms, the
/// triangular block (g_m, g_0, phi) for the middle term. `phi` is the
/// unipotent coordinate, a map M -> H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement1<K: Field> {
    pub g_l: K::Elem,
    pub g_r: K::Elem,
    pub g_m: Matrix<K>,
    pub g_0: K::Elem,
    /// h x m.
    pub phi: Matrix<K>,
}

impl<K: Field> GroupElement1<K> {
    pub fn identity(space: &Type1Space<K>) -> Self {
        let f = &space.field;
        GroupElement1 {
            g_l: f.one(),
            g_r: f.one(),
            g_m: Matrix::identity(f.clone(), space.m),
            g_0: f.one(),
            phi: Matrix::zero(f.clone(), space.h, space.m),
        }
    }

    pub fn validate(&self, space: &Type1Space<K>) -> Result<()> {
        let f = &space.field;
        if f.is_zero(&self.g_l) || f.is_zero(&self.g_r) || f.is_zero(&self.g_0) {
            return Err(Error::NotInvertible("scalar block is zero".into()));
        }
        if self.g_m.rows != space.m || self.g_m.cols != space.m {
            return Err(Error::shape("g_m shape"));
        }
        if self.phi.rows != space.h || self.phi.cols != space.m {
            return Err(Error::shape("phi shape"));
        }
        self.g_m.inverse().map(|_| ())
    }

    /// Group law matching `act1(g.compose(h), x) = act1(g, act1(h, x))`.
    pub fn compose(&self, other: &Self, space: &Type1Space<K>) -> Result<Self> {
        let f = &space.field;
        Ok(GroupElement1 {
            g_l: f.mul(&self.g_l, &other.g_l),
            g_r: f.mul(&self.g_r, &other.g_r),
            g_m: self.g_m.mul(&other.g_m)?,
            g_0: f.mul(&self.g_0, &other.g_0),
            phi: self.phi.mul(&other.g_m)?.add(&other.phi.scale(&self.g_0))?,
        })
    }

    pub fn inverse(&self, space: &Type1Space<K>) -> Result<Self> {
        let f = &space.field;
        let g_m_inv = self.g_m.inverse()?;
        let g_0_inv = f
            .inv(&self.g_0)
            .ok_or_else(|| Error::NotInvertible("g_0".into()))?;
        let phi_inv = self.phi.mul(&g_m_inv)?.scale(&f.neg(&g_0_inv));
        Ok(GroupElement1 {
            g_l: f
                .inv(&self.g_l)
                .ok_or_else(|| Error::NotInvertible("g_l".into()))?,
            g_r: f
                .inv(&self.g_r)
                .ok_or_else(|| Error::NotInvertible("g_r".into()))?,
            g_m: g_m_inv,
            g_0: g_0_inv,
            phi: phi_inv,
        })
    }
}

/// Left action of the type-1 group on the total space.
pub fn act1<K: Field>(
    space: &Type1Space<K>,
    g: &GroupElement1<K>,
    x: &Type1Point<K>,
) -> Result<Type1Point<K>> {
    g.validate(space)?;
    let f = &space.field;
    // Outer scalars first; they commute with the triangular part.
    let u1 = x.phi1.scale(&g.g_l);
    let u2 = x.z2.scale(&g.g_l);
    let v3 = x.phi3.scale(&g.g_r);
    let v4 = x.z4.scale(&g.g_r);

    // Triangular action on (phi1, z2): (g_m phi1, sigma<phi, phi1> + g_0 z2).
    let phi1 = u1.transform_cols(&g.g_m)?;
    let w = u1.mul(&g.phi.transpose())?; // Z1 (x) H, index (i, hh)
    let z2 = space.sigma.apply_tensor(&w.vec())?.add(&u2.scale(&g.g_0))?;

    // Right action of the inverse on (phi3, z4):
    // (phi3, z4) . g^ = (phi3 g^_m + (I (x) sigma')(g^_phi (x) z4), z4 g^_0).
    let ginv = g.inverse(space)?;
    let mut phi3 = v3.mul(&ginv.g_m)?;
    for mm in 0..space.m {
        let phi_col = Matrix::from_fn(f.clone(), space.h, 1, |r, _| ginv.phi.get(r, mm).clone());
        let corr = space.sigma_p.apply(&phi_col, &v4)?;
        for k in 0..space.z3 {
            let cur = f.add(phi3.get(k, mm), corr.get(k, 0));
            phi3.set(k, mm, cur);
        }
    }
    let z4 = v4.scale(&ginv.g_0);

    Ok(Type1Point { phi1, z2, phi3, z4 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Space<K: Field> {
    pub field: K,
    pub z1: usize,
    pub y2: usize,
    pub t2: usize,
    pub z3: usize,
    pub t: usize,
    pub k: usize,
    pub n: usize,
    /// K (x) Y2 -> Z1, inducing an injection K -> Z1 (x) Y2*.
    pub nu: Bilinear<K>,
    /// K (x) T2 -> T.
    pub nu_p: Bilinear<K>,
    /// Y2 (x) Z3 -> T2, surjective.
    pub lambda: Bilinear<K>,
    /// Z1 (x) Z3 -> T.
    pub tau: Bilinear<K>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Type2Point<K: Field> {
    /// z1 x n.
    pub psi1: Matrix<K>,
    /// y2 x n.
    pub psi2: Matrix<K>,
    /// z3 x n (columns indexed by the N* basis).
    pub psi3: Matrix<K>,
}

impl<K: Field> Type2Space<K> {
    pub fn new(
        field: K,
        dims: (usize, usize, usize, usize, usize, usize, usize),
        nu: Bilinear<K>,
        nu_p: Bilinear<K>,
        lambda: Bilinear<K>,
        tau: Bilinear<K>,
    ) -> Result<Self> {
        let (z1, y2, t2, z3, t, k, n) = dims;
        let space = Type2Space {
            field,
            z1,
            y2,
            t2,
            z3,
            t,
            k,
            n,
            nu,
            nu_p,
            lambda,
            tau,
        };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        let shapes = [
            (self.nu.a_dim, self.k, "nu left"),
            (self.nu.b_dim, self.y2, "nu right"),
            (self.nu.out_dim, self.z1, "nu out"),
            (self.nu_p.a_dim, self.k, "nu' left"),
            (self.nu_p.b_dim, self.t2, "nu' right"),
            (self.nu_p.out_dim, self.t, "nu' out"),
            (self.lambda.a_dim, self.y2, "lambda left"),
            (self.lambda.b_dim, self.z3, "lambda right"),
            (self.lambda.out_dim, self.t2, "lambda out"),
            (self.tau.a_dim, self.z1, "tau left"),
            (self.tau.b_dim, self.z3, "tau right"),
            (self.tau.out_dim, self.t, "tau out"),
        ];
        for (got, want, what) in shapes {
            if got != want {
                return Err(Error::shape(format!("{what}: {got} != {want}")));
            }
        }
        if self.nu_embedding().rank() != self.k {
            return Err(Error::hypothesis(
                "nu does not embed K into Z1 (x) Y2*".to_string(),
            ));
        }
        if self.lambda.matrix.rank() != self.t2 {
            return Err(Error::hypothesis(
                "lambda: Y2 (x) Z3 -> T2 is not surjective".to_string(),
            ));
        }
        // Exchange square (D'): tau(nu(k (x) y) (x) z) = nu'(k (x) lambda(y (x) z)).
        let f = &self.field;
        for kk in 0..self.k {
            let mut ek = Matrix::zero(f.clone(), self.k, 1);
            ek.set(kk, 0, f.one());
            for y in 0..self.y2 {
                let mut ey = Matrix::zero(f.clone(), self.y2, 1);
                ey.set(y, 0, f.one());
                let nk = self.nu.apply(&ek, &ey)?;
                for z in 0..self.z3 {
                    let mut ez = Matrix::zero(f.clone(), self.z3, 1);
                    ez.set(z, 0, f.one());
                    let left = self.tau.apply(&nk, &ez)?;
                    let lz = self.lambda.apply(&ey, &ez)?;
                    let right = self.nu_p.apply(&ek, &lz)?;
                    if left != right {
                        return Err(Error::hypothesis(format!(
                            "exchange square fails at basis (k={kk}, y2={y}, z3={z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The injection K -> Z1 (x) Y2*, row index i * y2 + y.
    pub fn nu_embedding(&self) -> Matrix<K> {
        Matrix::from_fn(self.field.clone(), self.z1 * self.y2, self.k, |row, kk| {
            let (i, y) = (row / self.y2, row % self.y2);
            self.nu.on_basis(kk, y).get(i, 0).clone()
        })
    }

    /// Residuals of the two defining equations, in T and T2.
    pub fn residual(&self, y: &Type2Point<K>) -> Result<(Matrix<K>, Matrix<K>)> {
        if y.psi1.rows != self.z1
            || y.psi1.cols != self.n
            || y.psi2.rows != self.y2
            || y.psi2.cols != self.n
            || y.psi3.rows != self.z3
            || y.psi3.cols != self.n
        {
            return Err(Error::shape("type-2 point shape"));
        }
        let c13 = contract_columns(&y.psi1, &y.psi3)?;
        let r1 = self.tau.apply_tensor(&c13)?;
        let c23 = contract_columns(&y.psi2, &y.psi3)?;
        let r2 = self.lambda.apply_tensor(&c23)?;
        Ok((r1, r2))
    }

    pub fn is_point(&self, y: &Type2Point<K>) -> Result<bool> {
        let (r1, r2) = self.residual(y)?;
        Ok(r1.is_zero() && r2.is_zero())
    }

    /// The open locus: psi2 viewed as a map Y2* -> N is injective.
    pub fn in_q0(&self, y: &Type2Point<K>) -> Result<bool> {
        if y.psi2.rows != self.y2 || y.psi2.cols != self.n {
            return Err(Error::shape("psi2 shape"));
        }
        Ok(y.psi2.rank() == self.y2)
    }

    pub fn enumerate_points(&self, budget: u128) -> Result<Vec<Type2Point<K>>> {
        let p = self
            .field
            .cardinality()
            .ok_or_else(|| Error::invalid("point enumeration needs a finite field"))?;
        let coords = (self.z1 + self.y2 + self.z3) * self.n;
        let total = pow_count(p, coords);
        if total > budget {
            return Err(Error::budget("type-2 point enumeration", total, budget));
        }
        let f = self.field.clone();
        let mut out = Vec::new();
        let mut digits = vec![0u64; coords];
        loop {
            let mut it = digits.iter().map(|&d| f.element_at(d));
            let psi1 = Matrix::from_fn(f.clone(), self.z1, self.n, |_, _| it.next().unwrap());
            let psi2 = Matrix::from_fn(f.clone(), self.y2, self.n, |_, _| it.next().unwrap());
            let psi3 = Matrix::from_fn(f.clone(), self.z3, self.n, |_, _| it.next().unwrap());
            let y = Type2Point { psi1, psi2, psi3 };
            if self.is_point(&y)? {
                out.push(y);
            }
            if !advance(&mut digits, p) {
                break;
            }
        }
        Ok(out)
    }
}

/// Element of the type-2 group GL(N) x (triangular block)^op x scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement2<K: Field> {
    /// n x n, invertible.
    pub g_n: Matrix<K>,
    pub g_l: K::Elem,
    pub g_0: K::Elem,
    pub g_r: K::Elem,
    /// Coordinates in K of the strictly triangular part, k x 1.
    pub k: Matrix<K>,
}

impl<K: Field> GroupElement2<K> {
    pub fn identity(space: &Type2Space<K>) -> Self {
        let f = &space.field;
        GroupElement2 {
            g_n: Matrix::identity(f.clone(), space.n),
            g_l: f.one(),
            g_0: f.one(),
            g_r: f.one(),
            k: Matrix::zero(f.clone(), space.k, 1),
        }
    }

    pub fn validate(&self, space: &Type2Space<K>) -> Result<()> {
        let f = &space.field;
        if f.is_zero(&self.g_l) || f.is_zero(&self.g_0) || f.is_zero(&self.g_r) {
            return Err(Error::NotInvertible("scalar block is zero".into()));
        }
        if self.g_n.rows != space.n || self.g_n.cols != space.n {
            return Err(Error::shape("g_n shape"));
        }
        if self.k.rows != space.k || self.k.cols != 1 {
            return Err(Error::shape("k coordinates shape"));
        }
        self.g_n.inverse().map(|_| ())
    }

    /// Group law matching `act2(g.compose(h), y) = act2(g, act2(h, y))`.
    /// The triangular block composes in the opposite order because it acts
    /// through a right action.
    pub fn compose(&self, other: &Self, space: &Type2Space<K>) -> Result<Self> {
        let f = &space.field;
        Ok(GroupElement2 {
            g_n: self.g_n.mul(&other.g_n)?,
            g_l: f.mul(&self.g_l, &other.g_l),
            g_0: f.mul(&self.g_0, &other.g_0),
            g_r: f.mul(&self.g_r, &other.g_r),
            k: other.k.scale(&self.g_l).add(&self.k.scale(&other.g_0))?,
        })
    }
}

/// Left action of the type-2 group on the total space.
pub fn act2<K: Field>(
    space: &Type2Space<K>,
    g: &GroupElement2<K>,
    y: &Type2Point<K>,
) -> Result<Type2Point<K>> {
    g.validate(space)?;
    let f = &space.field;
    // Right action of the triangular block on the (Z1 + Y2) slot:
    // (z1, y2) . (g_l 0; k g_0) = (z1 g_l + nu(k (x) y2), y2 g_0).
    let mut psi1 = y.psi1.scale(&g.g_l);
    for col in 0..space.n {
        let y2col = Matrix::from_fn(f.clone(), space.y2, 1, |r, _| y.psi2.get(r, col).clone());
        let corr = space.nu.apply(&g.k, &y2col)?;
        for r in 0..space.z1 {
            let cur = f.add(psi1.get(r, col), corr.get(r, 0));
            psi1.set(r, col, cur);
        }
    }
    let psi2 = y.psi2.scale(&g.g_0);
    // GL(N) on the N slots; the N* slot transforms by the inverse transpose.
    let psi1 = psi1.transform_cols(&g.g_n)?;
    let psi2 = psi2.transform_cols(&g.g_n)?;
    let gn_inv_t = g.g_n.inverse()?.transpose();
    let psi3 = y.psi3.transform_cols(&gn_inv_t)?.scale(&g.g_r);
    Ok(Type2Point { psi1, psi2, psi3 })
}

/// Order of the type-1 group over F_p: (p-1)^3 * |GL_m| * p^(h*m).
pub fn group1_order<K: Field>(space: &Type1Space<K>) -> Option<u128> {
    let p = space.field.cardinality()?;
    let units = (p - 1) as u128;
    let gl = crate::field::gl_cardinality(space.m, p);
    Some(
        units
            .pow(3)
            .saturating_mul(gl)
            .saturating_mul(pow_count(p, space.h * space.m)),
    )
}

pub fn enumerate_group1<K: Field>(
    space: &Type1Space<K>,
    budget: u128,
) -> Result<Vec<GroupElement1<K>>> {
    let p = space
        .field
        .cardinality()
        .ok_or_else(|| Error::invalid("group enumeration needs a finite field"))?;
    let order = group1_order(space).unwrap();
    if order > budget {
        return Err(Error::budget("type-1 group enumeration", order, budget));
    }
    let f = space.field.clone();
    let mut out = Vec::new();
    let units: Vec<K::Elem> = (1..p).map(|i| f.element_at(i)).collect();
    let gms = enumerate_invertible(&f, space.m, p);
    let phis = enumerate_matrices(&f, space.h, space.m, p);
    for g_l in &units {
        for g_r in &units {
            for g_0 in &units {
                for g_m in &gms {
                    for phi in &phis {
                        out.push(GroupElement1 {
                            g_l: g_l.clone(),
                            g_r: g_r.clone(),
                            g_m: g_m.clone(),
                            g_0: g_0.clone(),
                            phi: phi.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn group2_order<K: Field>(space: &Type2Space<K>) -> Option<u128> {
    let p = space.field.cardinality()?;
    let units = (p - 1) as u128;
    let gl = crate::field::gl_cardinality(space.n, p);
    Some(
        units
            .pow(3)
            .saturating_mul(gl)
            .saturating_mul(pow_count(p, space.k)),
    )
}

pub fn enumerate_group2<K: Field>(
    space: &Type2Space<K>,
    budget: u128,
) -> Result<Vec<GroupElement2<K>>> {
    let p = space
        .field
        .cardinality()
        .ok_or_else(|| Error::invalid("group enumeration needs a finite field"))?;
    let order = group2_order(space).unwrap();
    if order > budget {
        return Err(Error::budget("type-2 group enumeration", order, budget));
    }
    let f = space.field.clone();
    let mut out = Vec::new();
    let units: Vec<K::Elem> = (1..p).map(|i| f.element_at(i)).collect();
    let gns = enumerate_invertible(&f, space.n, p);
    let ks = enumerate_matrices(&f, space.k, 1, p);
    for g_n in &gns {
        for g_l in &units {
            for g_0 in &units {
                for g_r in &units {
                    for k in &ks {
                        out.push(GroupElement2 {
                            g_n: g_n.clone(),
                            g_l: g_l.clone(),
                            g_0: g_0.clone(),
                            g_r: g_r.clone(),
                            k: k.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(crate) fn enumerate_matrices<K: Field>(f: &K, rows: usize, cols: usize, p: u64) -> Vec<Matrix<K>> {
    let coords = rows * cols;
    let mut out = Vec::new();
    let mut digits = vec![0u64; coords];
    loop {
        let m = Matrix::from_fn(f.clone(), rows, cols, |i, j| f.element_at(digits[i * cols + j]));
        out.push(m);
        if !advance(&mut digits, p) {
            break;
        }
    }
    out
}

pub(crate) fn enumerate_invertible<K: Field>(f: &K, n: usize, p: u64) -> Vec<Matrix<K>> {
    enumerate_matrices(f, n, n, p)
        .into_iter()
        .filter(|m| m.rank() == n)
        .collect()
}

/// Random invertible matrix, for randomized property tests.
pub fn random_invertible<K: Field, R: Rng + ?Sized>(f: &K, n: usize, rng: &mut R) -> Matrix<K> {
    loop {
        let m = Matrix::from_fn(f.clone(), n, n, |_, _| f.sample(rng));
        if m.rank() == n {
            return m;
        }
    }
}

/// Construct a type-1 space in canonical position from free data: tau, the
/// kernel subspace of Z1 (x) H, and a choice of Z4 inside the
/// tau-annihilator of that kernel in H* (x) Z3. sigma is the canonical
/// projection, sigma' the tautological pairing, tau' the induced map on the
/// quotient. Spaces of this shape are reproduced on the nose by a mutation
/// round trip.
pub fn type1_canonical<K: Field>(
    field: K,
    tau: Bilinear<K>,
    h: usize,
    m: usize,
    kernel: &Subspace<K>,
    z4_sub: &Subspace<K>,
) -> Result<Type1Space<K>> {
    let z1 = tau.a_dim;
    let z3 = tau.b_dim;
    let t = tau.out_dim;
    if kernel.ambient_dim != z1 * h {
        return Err(Error::shape("kernel must live in Z1 (x) H"));
    }
    if z4_sub.ambient_dim != h * z3 {
        return Err(Error::shape("Z4 must live in H* (x) Z3"));
    }
    let f = field.clone();
    let quo = Quotient::new(kernel.clone());
    let z2 = quo.dim();
    let sigma = Bilinear::new(z1, h, z2, quo.projection.clone())?;

    let z4 = z4_sub.dim();
    // sigma'(e_h (x) e_j) = the e_h-slot of the j-th basis vector of Z4.
    let mut sp = Matrix::zero(f.clone(), z3, h * z4);
    for hh in 0..h {
        for j in 0..z4 {
            for kk in 0..z3 {
                sp.set(kk, hh * z4 + j, z4_sub.basis.get(j, hh * z3 + kk).clone());
            }
        }
    }
    let sigma_p = Bilinear::new(h, z4, z3, sp)?;

    // tau'([u] (x) z4) = (tau (x) tr)(section(u) (x) z4rep).
    let mut tp = Matrix::zero(f.clone(), t, z2 * z4);
    for q in 0..z2 {
        let mut eq = Matrix::zero(f.clone(), z2, 1);
        eq.set(q, 0, f.one());
        let sec = quo.section.mul(&eq)?; // in Z1 (x) H, index i*h+hh
        for j in 0..z4 {
            let mut u = Matrix::zero(f.clone(), z1 * z3, 1);
            for i in 0..z1 {
                for kk in 0..z3 {
                    let mut acc = f.zero();
                    for hh in 0..h {
                        f.add_mul_assign(
                            &mut acc,
                            sec.get(i * h + hh, 0),
                            z4_sub.basis.get(j, hh * z3 + kk),
                        );
                    }
                    u.set(i * z3 + kk, 0, acc);
                }
            }
            let val = tau.apply_tensor(&u)?;
            for r in 0..t {
                tp.set(r, q * z4 + j, val.get(r, 0).clone());
            }
        }
    }
    let tau_p = Bilinear::new(z2, z4, t, tp)?;
    Type1Space::new(field, (z1, z2, z3, z4, h, t, m), sigma, sigma_p, tau, tau_p)
}

/// The tau-annihilator of a subspace of Z1 (x) H inside H* (x) Z3: vectors
/// w with tau(<kappa, w>) = 0 for every kappa in the subspace.
pub fn tau_annihilator<K: Field>(
    tau: &Bilinear<K>,
    h: usize,
    kernel: &Subspace<K>,
) -> Result<Subspace<K>> {
    let z1 = tau.a_dim;
    let z3 = tau.b_dim;
    let t = tau.out_dim;
    let f = tau.field().clone();
    if kernel.ambient_dim != z1 * h {
        return Err(Error::shape("kernel ambient"));
    }
    let kdim = kernel.dim();
    if kdim == 0 {
        return Ok(Subspace::full(f, h * z3));
    }
    // Rows indexed by (kappa, t-coordinate), columns by (hh, kk).
    let mut m = Matrix::zero(f.clone(), kdim * t, h * z3);
    for kb in 0..kdim {
        for hh in 0..h {
            for kk in 0..z3 {
                // <kappa, e_hh (x) e_kk> = sum_i kappa[i*h+hh] e_i (x) e_kk.
                let mut u = Matrix::zero(f.clone(), z1 * z3, 1);
                for i in 0..z1 {
                    u.set(i * z3 + kk, 0, kernel.basis.get(kb, i * h + hh).clone());
                }
                let val = tau.apply_tensor(&u)?;
                for r in 0..t {
                    m.set(kb * t + r, hh * z3 + kk, val.get(r, 0).clone());
                }
            }
        }
    }
    Ok(Subspace {
        ambient_dim: h * z3,
        basis: m.kernel_basis_rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    pub(crate) fn scalar_space(field: Rationals) -> Type1Space<Rationals> {
        let one = |a, b, c| Bilinear::new(a, b, c, Matrix::from_i64(field, c, a * b, &[1])).unwrap();
        Type1Space::new(
            field,
            (1, 1, 1, 1, 1, 1, 1),
            one(1, 1, 1),
            one(1, 1, 1),
            one(1, 1, 1),
            one(1, 1, 1),
        )
        .unwrap()
    }

    #[test]
    fn scalar_space_is_valid() {
        let s = scalar_space(Rationals);
        assert_eq!(s.z2, 1);
    }

    #[test]
    fn zero_sigma_rejected() {
        let q = Rationals;
        let zero = Bilinear::zero(q, 1, 1, 1);
        let one = Bilinear::new(1, 1, 1, Matrix::from_i64(q, 1, 1, &[1])).unwrap();
        let err = Type1Space::new(q, (1, 1, 1, 1, 1, 1, 1), zero, one.clone(), one.clone(), one)
            .unwrap_err();
        assert!(err.to_string().contains("surjective"));
    }

    #[test]
    fn scalar_point_condition() {
        let s = scalar_space(Rationals);
        let q = Rationals;
        let mk = |a: i64, b: i64, c: i64, d: i64| Type1Point {
            phi1: Matrix::from_i64(q, 1, 1, &[a]),
            z2: Matrix::from_i64(q, 1, 1, &[b]),
            phi3: Matrix::from_i64(q, 1, 1, &[c]),
            z4: Matrix::from_i64(q, 1, 1, &[d]),
        };
        // 1*1 + 1*(-1) = 0.
        assert!(s.is_point(&mk(1, 1, 1, -1)).unwrap());
        let bad = mk(1, 1, 1, 1);
        assert!(!s.is_point(&bad).unwrap());
        assert_eq!(s.residual(&bad).unwrap(), Matrix::from_i64(q, 1, 1, &[2]));
    }

    #[test]
    fn act1_identity_and_preservation() {
        let s = scalar_space(Rationals);
        let q = Rationals;
        let x = Type1Point {
            phi1: Matrix::from_i64(q, 1, 1, &[1]),
            z2: Matrix::from_i64(q, 1, 1, &[0]),
            phi3: Matrix::from_i64(q, 1, 1, &[1]),
            z4: Matrix::from_i64(q, 1, 1, &[-1]),
        };
        assert!(s.is_point(&x).unwrap());
        let e = GroupElement1::identity(&s);
        assert_eq!(act1(&s, &e, &x).unwrap(), x);

        // A pure unipotent element keeps the point on the quadric.
        let mut g = GroupElement1::identity(&s);
        g.phi = Matrix::from_i64(q, 1, 1, &[1]);
        let gx = act1(&s, &g, &x).unwrap();
        assert!(s.is_point(&gx).unwrap());
        // z2 becomes sigma(<phi, phi1>) + z2 = 1.
        assert_eq!(gx.z2, Matrix::from_i64(q, 1, 1, &[1]));
    }

    fn small_canonical_f5() -> Type1Space<PrimeField> {
        let f5 = PrimeField::new(5).unwrap();
        let tau = Bilinear::new(2, 1, 1, Matrix::from_i64(f5, 1, 2, &[0, 1])).unwrap();
        let kernel = Subspace::from_span(Matrix::from_i64(f5, 1, 2, &[1, 0]));
        let ann = tau_annihilator(&tau, 1, &kernel).unwrap();
        assert_eq!(ann.dim(), 1);
        type1_canonical(f5, tau, 1, 1, &kernel, &ann).unwrap()
    }

    #[test]
    fn act1_group_axiom_randomized() {
        use rand::SeedableRng;
        let f5 = PrimeField::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let s = small_canonical_f5();
        let points = s.enumerate_points(1 << 20).unwrap();
        assert!(!points.is_empty());
        let mut sample_g = |rng: &mut rand_chacha::ChaCha8Rng| GroupElement1 {
            g_l: f5.element_at(1 + rng.gen_range(0..4)),
            g_r: f5.element_at(1 + rng.gen_range(0..4)),
            g_m: random_invertible(&f5, 1, rng),
            g_0: f5.element_at(1 + rng.gen_range(0..4)),
            phi: Matrix::from_fn(f5, 1, 1, |_, _| f5.sample(rng)),
        };
        for _ in 0..20 {
            let g = sample_g(&mut rng);
            let h = sample_g(&mut rng);
            let x = &points[rng.gen_range(0..points.len())];
            let gh = g.compose(&h, &s).unwrap();
            let lhs = act1(&s, &gh, x).unwrap();
            let rhs = act1(&s, &g, &act1(&s, &h, x).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            assert!(s.is_point(&lhs).unwrap());
        }
    }

    #[test]
    fn invariant_map_under_triangular_part() {
        use rand::SeedableRng;
        let f5 = PrimeField::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let s = small_canonical_f5();
        // Arbitrary total-space elements, not necessarily on the quadric.
        for _ in 0..20 {
            let x = Type1Point {
                phi1: Matrix::from_fn(f5, 2, 1, |_, _| f5.sample(&mut rng)),
                z2: Matrix::from_fn(f5, 1, 1, |_, _| f5.sample(&mut rng)),
                phi3: Matrix::from_fn(f5, 1, 1, |_, _| f5.sample(&mut rng)),
                z4: Matrix::from_fn(f5, 1, 1, |_, _| f5.sample(&mut rng)),
            };
            let mut g = GroupElement1::identity(&s);
            g.g_m = random_invertible(&f5, 1, &mut rng);
            g.g_0 = f5.element_at(1 + rng.gen_range(0..4));
            g.phi = Matrix::from_fn(f5, 1, 1, |_, _| f5.sample(&mut rng));
            let gx = act1(&s, &g, &x).unwrap();
            assert_eq!(
                s.invariant_value(&gx).unwrap(),
                s.invariant_value(&x).unwrap()
            );
        }
    }

    #[test]
    fn group_order_infinite_over_q() {
        let s = scalar_space(Rationals);
        assert!(group1_order(&s).is_none());
    }
}
