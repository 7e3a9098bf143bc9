// SPDX-License-Identifier: Apache-2.0
//! Exact scalar fields: the rationals and prime fields F_p with p <= 97.

use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PslError, Result};

/// Largest prime accepted for a prime field.
pub const MAX_PRIME: u32 = 97;

/// Runtime description of a field, as it appears in JSON documents.
///
/// Serializes as `"Q"` or `{"Fp": p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    #[serde(rename = "Q")]
    Rationals,
    #[serde(rename = "Fp")]
    PrimeField(u32),
}

impl FieldSpec {
    pub fn validate(self) -> Result<Self> {
        if let FieldSpec::PrimeField(p) = self {
            if !is_prime(p) || p > MAX_PRIME {
                return Err(PslError::InvalidField(p));
            }
        }
        Ok(self)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, FieldSpec::PrimeField(_))
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

/// Accepts `Q`, `F7`, `Fp7` or a bare prime `7`.
impl FromStr for FieldSpec {
    type Err = PslError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let digits = t
            .strip_prefix("Fp")
            .or_else(|| t.strip_prefix("fp"))
            .or_else(|| t.strip_prefix('F'))
            .or_else(|| t.strip_prefix('f'))
            .unwrap_or(t);
        let p: u32 = digits
            .parse()
            .map_err(|_| PslError::Parse(format!("unknown field '{s}'")))?;
        FieldSpec::PrimeField(p).validate()
    }
}

pub fn is_prime(p: u32) -> bool {
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

/// An exact field. Implementors are small `Copy` handles; elements carry no
/// reference to the field, so every operation goes through the handle.
pub trait Field: Copy + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Parses `n` or `a/b`.
    fn parse_scalar(&self, s: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    /// True when the canonical printed form starts with a minus sign.
    fn is_negative(&self, a: &Self::Elem) -> bool;
    /// Uniform over F_p; integers in [-9, 9] over Q.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// All elements, for finite fields only.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn order(&self) -> Option<u64> {
        match self.spec() {
            FieldSpec::PrimeField(p) => Some(p as u64),
            FieldSpec::Rationals => None,
        }
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// A uniformly random nonzero element (integers in [-9, 9] \ {0} over Q).
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        FieldSpec::PrimeField(p).validate()?;
        Ok(Self { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn reduce(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        a * b % self.p
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut e = self.p - 2;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce(n)
    }
    fn parse_scalar(&self, s: &str) -> Result<u32> {
        let bad = || PslError::Parse(format!("bad scalar '{s}' for F{}", self.p));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let pn = BigInt::from(self.p);
        let reduce = |x: BigInt| -> u32 {
            let r = ((x % &pn) + &pn) % &pn;
            u32::try_from(r).expect("residue fits in u32")
        };
        let a = reduce(n);
        match den {
            None => Ok(a),
            Some(d) => {
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                let b = reduce(d);
                self.div(&a, &b)
                    .ok_or_else(|| PslError::Parse(format!("division by zero in '{s}'")))
            }
        }
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn is_negative(&self, _a: &u32) -> bool {
        false
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.p)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.p).collect())
    }
}

/// The field of rationals, with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
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
    fn parse_scalar(&self, s: &str) -> Result<BigRational> {
        let bad = || PslError::Parse(format!("bad rational '{s}'"));
        match s.split_once('/') {
            None => Ok(BigRational::from_integer(
                BigInt::from_str(s.trim()).map_err(|_| bad())?,
            )),
            Some((a, b)) => {
                let n = BigInt::from_str(a.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(b.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(PslError::Parse(format!("division by zero in '{s}'")));
                }
                Ok(BigRational::new(n, d))
            }
        }
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.random_range(-9..=9))
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
}
