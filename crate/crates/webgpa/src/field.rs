//! Coefficient fields for web evaluation.
//!
//! Everything downstream is exact: the characteristic-zero field is the
//! rationals backed by arbitrary-precision integers, and finite fields are
//! prime fields with a runtime modulus. Because the modulus is chosen at
//! runtime, elements alone cannot implement context-free constructors like
//! `Zero::zero`; instead a small field descriptor creates and combines
//! elements, and generic code takes the descriptor as a value.

use std::fmt;

use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A field of coefficients. Only ring operations and integer reduction are
/// required; nothing in the evaluation pipeline divides.
pub trait CoeffField: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under the unique ring map from Z.
    fn from_int(&self, x: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Short human-readable name: `Q`, `F2`, `F7`, ...
    fn name(&self) -> String;
    /// Render an element for reports: rationals as `a/b`, F_p by its
    /// least nonnegative representative.
    fn display(&self, a: &Self::Elem) -> String;
}

/// The rational numbers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl CoeffField for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }
    fn from_int(&self, x: &BigInt) -> BigRational {
        BigRational::from_integer(x.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn name(&self) -> String {
        "Q".to_string()
    }
    fn display(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// A prime field F_p with runtime modulus. Elements are least nonnegative
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl CoeffField for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_int(&self, x: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let mut r = x % &p;
        if r.is_negative() {
            r += &p;
        }
        let digits = r.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^32 is plenty for every run we care about; keep the product
        // in u128 so large primes stay correct anyway.
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a % self.p) % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        a % self.p == 0
    }
    fn name(&self) -> String {
        format!("F{}", self.p)
    }
    fn display(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Reduce an integer scalar into a field: the identity on Q, reduction mod p
/// on a prime field.
pub fn reduce<F: CoeffField>(x: &BigInt, field: &F) -> F::Elem {
    field.from_int(x)
}

/// Runtime field selection, as it appears in configs and reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Parse `Q` or `F<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        if s == "Q" || s == "q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix('F').or_else(|| s.strip_prefix('f')) {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::invalid(format!("bad field `{s}`; expected Q or F<p>")))?;
            PrimeField::new(p)?;
            return Ok(FieldSpec::Prime(p));
        }
        Err(Error::invalid(format!("bad field `{s}`; expected Q or F<p>")))
    }

    pub fn name(&self) -> String {
        match self {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }

    /// Characteristic: 0 for the rationals, p otherwise.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
