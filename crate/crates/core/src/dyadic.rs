//! Exact non-negative dyadic rationals `n / 2^e`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A non-negative dyadic rational kept in lowest terms: the numerator is odd
/// unless the value is zero, in which case the exponent is zero too.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u32,
}

impl DyadicRational {
    pub fn zero() -> Self {
        DyadicRational { numerator: BigUint::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        DyadicRational { numerator: BigUint::one(), exponent: 0 }
    }

    pub fn new(numerator: impl Into<BigUint>, exponent: u32) -> Self {
        let mut d = DyadicRational { numerator: numerator.into(), exponent };
        d.normalize();
        d
    }

    /// `2^-e`.
    pub fn pow2_inv(exponent: u32) -> Self {
        DyadicRational { numerator: BigUint::one(), exponent }
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.exponent == 0 && self.numerator.is_one()
    }

    /// The numerator after rescaling to denominator `2^exponent`, or `None`
    /// when the value is not a multiple of `2^-exponent`.
    pub fn scaled_to(&self, exponent: u32) -> Option<BigUint> {
        if exponent < self.exponent {
            return None;
        }
        Some(&self.numerator << (exponent - self.exponent))
    }

    /// `self - other`, or `None` if the result would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let e = self.exponent.max(other.exponent);
        let a = self.scaled_to(e)?;
        let b = other.scaled_to(e)?;
        if a < b {
            return None;
        }
        Some(DyadicRational::new(a - b, e))
    }

    /// Multiplication by `2^k`.
    pub fn shl(&self, k: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        if k <= self.exponent {
            DyadicRational { numerator: self.numerator.clone(), exponent: self.exponent - k }
        } else {
            DyadicRational { numerator: &self.numerator << (k - self.exponent), exponent: 0 }
        }
    }

    /// Division by `2^k`.
    pub fn shr(&self, k: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        DyadicRational { numerator: self.numerator.clone(), exponent: self.exponent + k }
    }
}

impl Add for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let e = self.exponent.max(rhs.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &rhs.numerator << (e - rhs.exponent);
        DyadicRational::new(a + b, e)
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: DyadicRational) -> DyadicRational {
        &self + &rhs
    }
}

impl std::iter::Sum for DyadicRational {
    fn sum<I: Iterator<Item = DyadicRational>>(iter: I) -> Self {
        iter.fold(DyadicRational::zero(), |acc, x| &acc + &x)
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Always printed as `k/2^e` in lowest terms, including `0/2^0` and `1/2^0`.
impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl FromStr for DyadicRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("expected k/2^e, got {s:?}"));
        match s.split_once('/') {
            None => {
                let n: BigUint = s.parse().map_err(|_| bad())?;
                Ok(DyadicRational::new(n, 0))
            }
            Some((num, den)) => {
                let n: BigUint = num.trim().parse().map_err(|_| bad())?;
                let e: u32 = den.trim().strip_prefix("2^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                Ok(DyadicRational::new(n, e))
            }
        }
    }
}
