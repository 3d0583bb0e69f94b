//! Exact scalar fields: prime fields with a runtime modulus and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

/// Which field a ring lives over, as written in ring files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Prime(u32),
    Rational,
}

/// Arithmetic context for an exact field.
///
/// Elements do not carry their field; every operation goes through the
/// context so that the modulus of a prime field can be chosen at runtime.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Zero for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, if finite.
    fn order(&self) -> Option<u64>;
    /// The `index`-th element of a fixed enumeration. For finite fields this
    /// runs through every element exactly once for `index < order`.
    fn nth_element(&self, index: u64) -> Self::Elem;
    /// A random element; small integers for the rationals.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn kind(&self) -> FieldKind;
    fn parse_json(&self, v: &Value) -> Result<Self::Elem>;
    fn to_json(&self, a: &Self::Elem) -> Value;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        *acc = self.add(acc, &self.mul(a, b));
    }
}

/// The prime field `F_p` for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p as u64 {
        if p as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1 % self.p
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on (a, p).
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, *a as i64);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        Some(self.reduce_i64(t))
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn order(&self) -> Option<u64> {
        Some(self.p as u64)
    }
    fn nth_element(&self, index: u64) -> u32 {
        (index % self.p as u64) as u32
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn parse_json(&self, v: &Value) -> Result<u32> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.reduce_i64(x))
                .ok_or_else(|| Error::InputParse(format!("not an integer: {n}"))),
            Value::String(s) => s
                .trim()
                .parse::<i64>()
                .map(|x| self.reduce_i64(x))
                .map_err(|_| Error::InputParse(format!("not an integer: {s:?}"))),
            other => Err(Error::InputParse(format!("expected integer entry, got {other}"))),
        }
    }
    fn to_json(&self, a: &u32) -> Value {
        Value::from(*a)
    }
    #[inline]
    fn mul_add_assign(&self, acc: &mut u32, a: &u32, b: &u32) {
        let p = self.p as u64;
        *acc = ((*acc as u64 + (*a as u64 * *b as u64) % p) % p) as u32;
    }
}

/// The rational numbers with arbitrary-precision normalized fractions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn nth_element(&self, index: u64) -> BigRational {
        // 0, 1, -1, 2, -2, ...
        let k = index.div_ceil(2) as i64;
        self.from_i64(if index % 2 == 1 { k } else { -k })
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-5..=5))
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn parse_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::Number(n) => n
                .as_i64()
                .map(|x| self.from_i64(x))
                .ok_or_else(|| Error::InputParse(format!("not an integer: {n}"))),
            Value::String(s) => parse_rational(s),
            other => Err(Error::InputParse(format!("expected rational entry, got {other}"))),
        }
    }
    fn to_json(&self, a: &BigRational) -> Value {
        if a.is_integer() {
            if let Some(i) = a.numer().to_i64() {
                return Value::String(i.to_string());
            }
        }
        Value::String(format!("{}/{}", a.numer(), a.denom()))
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InputParse(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    let mut r = BigRational::new(num, den);
    if r.denom().is_negative() {
        r = BigRational::new(-r.numer().clone(), -r.denom().clone());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_moduli() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(2_147_483_649).is_err());
    }

    #[test]
    fn inverse_mod_five() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&2), Some(3));
        assert_eq!(f.inv(&0), None);
        for a in 1..5 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
    }

    #[test]
    fn large_prime_arithmetic_does_not_overflow() {
        let f = PrimeField::new(2_147_483_647).unwrap();
        let a = 2_147_483_646u32;
        assert_eq!(f.mul(&a, &a), 1);
        assert_eq!(f.add(&a, &a), 2_147_483_645);
        let mut acc = a;
        f.mul_add_assign(&mut acc, &a, &a);
        assert_eq!(acc, 0);
    }

    #[test]
    fn rational_parsing() {
        let q = Rationals;
        assert_eq!(q.parse_json(&Value::from("3/-6")).unwrap(), q.div(&q.from_i64(-1), &q.from_i64(2)).unwrap());
        assert_eq!(q.parse_json(&Value::from(4)).unwrap(), q.from_i64(4));
        assert!(q.parse_json(&Value::from("1/0")).is_err());
        let half = q.div(&q.one(), &q.from_i64(2)).unwrap();
        assert_eq!(q.to_json(&half), Value::from("1/2"));
    }

    #[test]
    fn rational_enumeration_starts_with_small_integers() {
        let q = Rationals;
        let first: Vec<_> = (0..5).map(|i| q.nth_element(i)).collect();
        let expect: Vec<_> = [0, 1, -1, 2, -2].iter().map(|&n| q.from_i64(n)).collect();
        assert_eq!(first, expect);
    }
}
