//! Exact arithmetic in the ring of d-adic fractions `Z[1/d]`.
//!
//! A value is stored as `numerator / d^exponent` and kept in a normal form:
//! a zero numerator forces a zero exponent, and a positive exponent implies
//! that `d` does not divide the numerator. Two fractions with the same base
//! are therefore equal iff their fields are equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{parameter, structural, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DadicFraction {
    base: u64,
    numerator: BigInt,
    exponent: u32,
}

impl DadicFraction {
    /// Builds `numerator / base^exponent` and normalizes it.
    pub fn new(base: u64, numerator: impl Into<BigInt>, exponent: u32) -> Result<Self> {
        if base < 2 {
            return Err(parameter(format!("d-adic base must be at least 2, got {base}")));
        }
        Ok(Self::normalized(base, numerator.into(), exponent))
    }

    pub fn from_integer(base: u64, n: impl Into<BigInt>) -> Result<Self> {
        Self::new(base, n, 0)
    }

    pub fn zero(base: u64) -> Result<Self> {
        Self::new(base, 0, 0)
    }

    pub fn one(base: u64) -> Result<Self> {
        Self::new(base, 1, 0)
    }

    fn normalized(base: u64, mut numerator: BigInt, mut exponent: u32) -> Self {
        let d = BigInt::from(base);
        if numerator.is_zero() {
            exponent = 0;
        }
        while exponent > 0 {
            let (q, r) = numerator.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            numerator = q;
            exponent -= 1;
        }
        DadicFraction { base, numerator, exponent }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    fn same_base(&self, other: &Self) -> Result<()> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(structural(format!(
                "d-adic base mismatch: {} vs {}",
                self.base, other.base
            )))
        }
    }

    fn pow_base(&self, e: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.base), e as usize)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        let e = self.exponent.max(other.exponent);
        let lhs = &self.numerator * self.pow_base(e - self.exponent);
        let rhs = &other.numerator * self.pow_base(e - other.exponent);
        Ok(Self::normalized(self.base, lhs + rhs, e))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_base(other)?;
        Ok(Self::normalized(
            self.base,
            &self.numerator * &other.numerator,
            self.exponent + other.exponent,
        ))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(&self) -> Self {
        DadicFraction {
            base: self.base,
            numerator: -&self.numerator,
            exponent: self.exponent,
        }
    }

    /// `p/d^e <= q/d^f` iff `p*d^f <= q*d^e`.
    pub fn try_leq(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        self.same_base(other)?;
        let lhs = &self.numerator * self.pow_base(other.exponent);
        let rhs = &other.numerator * self.pow_base(self.exponent);
        Ok(lhs.cmp(&rhs))
    }

    pub fn is_positive(&self) -> bool {
        !self.numerator.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    /// Parses `"p/d^e"`, `"p/q"` with `q` a power of the base, or a bare
    /// integer `"p"`.
    pub fn parse_with_base(s: &str, base: u64) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/').filter(|(_, den)| !den.contains('^')) {
            let bad = || parameter(format!("bad d-adic literal {s:?}, expected \"p/d^e\" or \"p/q\""));
            let numerator: BigInt = num.trim().parse().map_err(|_| bad())?;
            let mut q: BigInt = den.trim().parse().map_err(|_| bad())?;
            let mut exponent = 0u32;
            let d = BigInt::from(base);
            while q > BigInt::one() && (&q % &d).is_zero() {
                q /= &d;
                exponent += 1;
            }
            if !q.is_one() {
                return Err(parameter(format!("denominator in {s:?} is not a power of {base}")));
            }
            Self::new(base, numerator, exponent)
        } else if s.contains('/') {
            let v: DadicFraction = s.parse()?;
            if v.base != base {
                return Err(structural(format!(
                    "literal {s} has base {}, expected {base}",
                    v.base
                )));
            }
            Ok(v)
        } else {
            let n: BigInt = s
                .parse()
                .map_err(|_| parameter(format!("bad integer literal {s:?}")))?;
            Self::from_integer(base, n)
        }
    }
}

impl fmt::Display for DadicFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.base, self.exponent)
    }
}

impl FromStr for DadicFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || parameter(format!("bad d-adic literal {s:?}, expected \"p/d^e\""));
        let (num, rest) = s.trim().split_once('/').ok_or_else(bad)?;
        let (base, exp) = rest.split_once('^').ok_or_else(bad)?;
        let numerator: BigInt = num.trim().parse().map_err(|_| bad())?;
        let base: u64 = base.trim().parse().map_err(|_| bad())?;
        let exponent: u32 = exp.trim().parse().map_err(|_| bad())?;
        Self::new(base, numerator, exponent)
    }
}

impl Serialize for DadicFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DadicFraction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Smallest `e` with `x <= d^e`, for `x >= 0`.
pub(crate) fn least_power_bound(x: &DadicFraction) -> Result<u32> {
    if !x.is_positive() {
        return Err(crate::error::domain(format!("{x} is negative")));
    }
    let mut e = 0u32;
    let mut bound = DadicFraction::one(x.base)?;
    let d = DadicFraction::from_integer(x.base, x.base)?;
    while !x.try_leq(&bound)? {
        bound = bound.try_mul(&d)?;
        e += 1;
    }
    Ok(e)
}

impl DadicFraction {
    /// `1/d^e`.
    pub fn inverse_power(base: u64, e: u32) -> Result<Self> {
        Self::new(base, BigInt::one(), e)
    }
}
