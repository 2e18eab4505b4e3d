//! Exact probabilities and rational rendering helpers.
//!
//! Every probability in the engine is an arbitrary-precision rational in
//! lowest terms; floating point appears only in diagnostic columns and in
//! the decimal renderings produced for output.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An exact rational probability in `[0, 1]`, stored reduced.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactProb(BigRational);

impl ExactProb {
    /// Construct `num / den`. Panics outside `[0, 1]` or on a zero
    /// denominator; every internal producer stays in range by construction.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactProb {
        let ratio = BigRational::new(num.into(), den.into());
        ExactProb::from_ratio(ratio)
    }

    pub fn from_ratio(ratio: BigRational) -> ExactProb {
        assert!(
            !ratio.is_negative() && ratio <= BigRational::one(),
            "probability out of range: {ratio}"
        );
        ExactProb(ratio)
    }

    pub fn zero() -> ExactProb {
        ExactProb(BigRational::zero())
    }

    pub fn one() -> ExactProb {
        ExactProb(BigRational::one())
    }

    pub fn half() -> ExactProb {
        ExactProb::new(1, 2)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    pub fn numer(&self) -> BigUint {
        self.0.numer().magnitude().clone()
    }

    pub fn denom(&self) -> BigUint {
        self.0.denom().magnitude().clone()
    }

    /// `1 - p`.
    pub fn complement(&self) -> ExactProb {
        ExactProb(BigRational::one() - &self.0)
    }

    /// Odds `(for, against) = (num, den - num)` of the event.
    pub fn odds(&self) -> (BigUint, BigUint) {
        let num = self.numer();
        let den = self.denom();
        (num.clone(), den - num)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Render to `places` decimals with round-half-even.
    pub fn decimal(&self, places: usize) -> String {
        decimal_string(&self.0, places)
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactProb({self})")
    }
}

// Probabilities serialize as "p/q" strings so JSON output stays exact.
impl Serialize for ExactProb {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add for ExactProb {
    type Output = ExactProb;

    fn add(self, rhs: ExactProb) -> ExactProb {
        ExactProb::from_ratio(self.0 + rhs.0)
    }
}

impl Sub for ExactProb {
    type Output = ExactProb;

    fn sub(self, rhs: ExactProb) -> ExactProb {
        ExactProb::from_ratio(self.0 - rhs.0)
    }
}

/// Render any rational to `places` decimals, rounding half to even.
pub fn decimal_string(value: &BigRational, places: usize) -> String {
    let sign = if value.is_negative() { "-" } else { "" };
    let magnitude = value.abs();
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = magnitude.numer() * &scale;
    let den = magnitude.denom();
    let mut quotient = &scaled / den;
    let remainder = &scaled % den;
    let twice: BigInt = &remainder * 2;
    match twice.cmp(den) {
        Ordering::Greater => quotient += 1,
        Ordering::Equal => {
            if &quotient % 2 != BigInt::zero() {
                quotient += 1;
            }
        }
        Ordering::Less => {}
    }
    let int_part = &quotient / &scale;
    let frac_part = &quotient % &scale;
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac:0>width$}", frac = frac_part, width = places)
    }
}

/// Exact sum by balanced pairwise reduction. Keeps intermediate
/// denominators small compared with a left fold over thousands of terms.
pub fn tree_sum(mut items: Vec<BigRational>) -> BigRational {
    if items.is_empty() {
        return BigRational::zero();
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len() / 2 + 1);
        let mut iter = items.into_iter();
        while let Some(first) = iter.next() {
            match iter.next() {
                Some(second) => next.push(first + second),
                None => next.push(first),
            }
        }
        items = next;
    }
    items.pop().unwrap()
}
