//! Exact coefficient fields: the rationals and prime fields F_p.
//!
//! Every computation in this crate is exact. Stability verdicts and
//! codimension constants are decided by strict/non-strict rational
//! inequalities, so there is no floating point anywhere; a coefficient
//! field is either `Rationals` (arbitrary-precision `BigRational`) or
//! `PrimeField` (residues mod a prime, in a `u64`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Runtime descriptor of a coefficient field, as it appears in files and
/// CLI flags (`q` or `fp:<p>`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn parse(s: &str) -> Result<FieldSpec> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p
                .parse()
                .map_err(|_| Error::parse(format!("bad prime in field spec '{s}'")))?;
            check_prime(p)?;
            return Ok(FieldSpec::Prime(p));
        }
        Err(Error::parse(format!(
            "unknown field spec '{s}' (expected 'q' or 'fp:<p>')"
        )))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

pub fn check_prime(p: u64) -> Result<()> {
    if !(2..=1 << 31).contains(&p) {
        return Err(Error::parse(format!("characteristic {p} out of range")));
    }
    if p == 2 || p == 3 {
        return Ok(());
    }
    if p % 2 == 0 || p % 3 == 0 {
        return Err(Error::parse(format!("{p} is not prime")));
    }
    let mut d = 5u64;
    while d * d <= p {
        if p % d == 0 || p % (d + 2) == 0 {
            return Err(Error::parse(format!("{p} is not prime")));
        }
        d += 6;
    }
    Ok(())
}

/// An exact field, the coefficient domain of all linear algebra here.
///
/// Implementations carry whatever run-time data the field needs (the
/// modulus for F_p); elements are plain values. Operations never round.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// `a += b * c`, the fused step of Gaussian elimination.
    fn add_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.add(a, &self.mul(b, c));
    }

    /// Number of field elements, when finite.
    fn cardinality(&self) -> Option<u64>;
    /// The i-th element under a fixed enumeration (finite fields only).
    fn element_at(&self, i: u64) -> Self::Elem;

    /// A random element. Over F_p this is uniform; over the rationals it is
    /// a small fraction, which is all randomized testing needs.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn to_display(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn cardinality(&self) -> Option<u64> {
        None
    }
    fn element_at(&self, _i: u64) -> BigRational {
        unreachable!("rationals are not enumerable")
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let num: i64 = rng.gen_range(-6..=6);
        let den: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_display(&self, a: &BigRational) -> String {
        rational_string(a)
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
}

/// Canonical "n/d" form, lowest terms, positive denominator.
pub fn rational_string(a: &BigRational) -> String {
    format!("{}/{}", a.numer(), a.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad rational '{s}'")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad rational '{s}'")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

/// The prime field F_p with p < 2^31, elements stored as `u64` in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        check_prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Image of a rational with denominator prime to p.
    pub fn reduce_rational(&self, a: &BigRational) -> Result<u64> {
        let num = a.numer().mod_floor_u64(self.p);
        let den = a.denom().mod_floor_u64(self.p);
        if den == 0 {
            return Err(Error::Arithmetic(format!(
                "denominator of {} vanishes mod {}",
                rational_string(a),
                self.p
            )));
        }
        let den_inv = self.inv(&den).expect("nonzero residue");
        Ok(self.mul(&num, &den_inv))
    }
}

trait ModU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        let p = self.p as i128;
        let r = (n as i128).rem_euclid(p);
        r as u64
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^31 so the product fits in u64.
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(t0.rem_euclid(self.p as i128) as u64)
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add_mul_assign(&self, a: &mut u64, b: &u64, c: &u64) {
        *a = self.add(a, &self.mul(b, c));
    }

    fn cardinality(&self) -> Option<u64> {
        Some(self.p)
    }
    fn element_at(&self, i: u64) -> u64 {
        debug_assert!(i < self.p);
        i
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    fn to_display(&self, a: &u64) -> String {
        a.to_string()
    }

    fn parse_elem(&self, s: &str) -> Result<u64> {
        // Accept either a residue or a rational reducible mod p.
        if let Ok(v) = s.trim().parse::<i64>() {
            return Ok(self.from_i64(v));
        }
        self.reduce_rational(&parse_rational(s)?)
    }
}

/// Order of GL_m(F_p): prod_{i<m} (p^m - p^i). Saturates at `u128::MAX`.
pub fn gl_cardinality(m: usize, p: u64) -> u128 {
    let mut pm: u128 = 1;
    for _ in 0..m {
        pm = pm.saturating_mul(p as u128);
    }
    let mut total: u128 = 1;
    let mut pi: u128 = 1;
    for _ in 0..m {
        total = total.saturating_mul(pm.saturating_sub(pi));
        pi = pi.saturating_mul(p as u128);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_specs() {
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("fp:5").unwrap(), FieldSpec::Prime(5));
        assert!(FieldSpec::parse("fp:6").is_err());
        assert!(FieldSpec::parse("r").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_i64(-1), 6);
        for a in 1..7 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1);
        }
    }

    #[test]
    fn rational_round_trip() {
        let q = Rationals;
        let x = q.parse_elem("-4/6").unwrap();
        assert_eq!(q.to_display(&x), "-2/3");
        let y = q.parse_elem("5").unwrap();
        assert_eq!(q.to_display(&y), "5/1");
    }

    #[test]
    fn reduce_rational_mod_p() {
        let f = PrimeField::new(5).unwrap();
        let q = Rationals;
        let x = q.parse_elem("1/2").unwrap();
        assert_eq!(f.reduce_rational(&x).unwrap(), 3); // 2*3 = 6 = 1 mod 5
        let bad = q.parse_elem("1/5").unwrap();
        assert!(f.reduce_rational(&bad).is_err());
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_cardinality(1, 2), 1);
        assert_eq!(gl_cardinality(2, 2), 6);
        assert_eq!(gl_cardinality(2, 3), 48);
        assert_eq!(gl_cardinality(3, 2), 168);
    }
}
