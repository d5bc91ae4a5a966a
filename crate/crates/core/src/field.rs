//! Exact scalar fields: the rationals and the prime fields GF(p).

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt::Debug;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p as u32))
    }
}

impl core::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FieldSpec::Rationals => f.write_str("Q"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic in an exact field.
///
/// The modulus of a prime field is only known at runtime, so elements are
/// plain values and every operation goes through the field handle.
pub trait Field: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;

    /// Parses `a`, `-a` or `a/b` with decimal integers.
    fn parse(&self, text: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    /// A random element. Rationals are drawn with small numerators and
    /// denominators so that exact arithmetic stays cheap.
    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// A random nonzero element.
    fn sample_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let v = self.sample(rng);
            if !self.is_zero(&v) {
                return v;
            }
        }
    }
}

/// Splits `a`, `-a`, `a/b` into sign, numerator digits and optional
/// denominator digits.
fn split_fraction(text: &str) -> Result<(bool, &str, Option<&str>)> {
    let bad = || Error::ParseError(text.to_string());
    let t = text.trim();
    let (negative, rest) = if let Some(r) = t.strip_prefix('-') {
        (true, r)
    } else if let Some(r) = t.strip_prefix('\u{2212}') {
        (true, r)
    } else {
        (false, t)
    };
    let (num, den) = match rest.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(bad());
    }
    Ok((negative, num, den))
}

/// The field of rational numbers with arbitrary-precision numerators and
/// denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
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
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
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
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        let (negative, num, den) = split_fraction(text)?;
        let bad = || Error::ParseError(text.to_string());
        let mut n = BigInt::from_str(num).map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = match den {
            Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    }

    fn format(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> BigRational {
        let n: i64 = rng.gen_range(-6..=6);
        let d: i64 = rng.gen_range(1..=4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

/// The prime field GF(p), elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        match FieldSpec::prime(p)? {
            FieldSpec::Prime(p) => Ok(PrimeField { p }),
            FieldSpec::Rationals => unreachable!(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    fn reduce_digits(&self, digits: &str) -> u32 {
        let p = self.p as u64;
        digits
            .bytes()
            .fold(0u64, |acc, c| (acc * 10 + (c - b'0') as u64) % p) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Result<u32> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        // a^(p-2) by square-and-multiply
        let (mut base, mut exp, mut acc) = (*a, self.p - 2, 1u32);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        Ok(acc)
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn parse(&self, text: &str) -> Result<u32> {
        let (negative, num, den) = split_fraction(text)?;
        let mut value = self.reduce_digits(num);
        if negative {
            value = self.neg(&value);
        }
        match den {
            None => Ok(value),
            Some(d) => {
                let d = self.reduce_digits(d);
                if d == 0 {
                    return Err(Error::NotInField(text.trim().to_string()));
                }
                self.div(&value, &d)
            }
        }
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }

    fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }
}
