//! Conway numbers (correlations) and the counting identities behind them.
//!
//! The correlation of `A` and `B` is the `n`-bit number whose bit
//! `delta_i` (most significant first) records whether the last
//! `n - i + 1` characters of `A` equal the first `n - i + 1` characters
//! of `B`. `delta_1` is set exactly when the strings are equal, so an
//! autocorrelation always lies in `[2^(n-1), 2^n - 1]` while the
//! correlation of two distinct strings is at most `2^(n-1) - 1`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::{Fragment, PatternString};

/// A Conway number together with the length of the strings it came from.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correlation {
    len: u8,
    value: u64,
}

impl Correlation {
    /// Length of the strings the correlation came from (never zero).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Bit `delta_i`, `1 <= i <= n`.
    pub fn delta(&self, i: usize) -> bool {
        debug_assert!((1..=self.len()).contains(&i));
        (self.value >> (self.len() - i)) & 1 == 1
    }

    /// The `n` bits `delta_1 ... delta_n` as a 0/1 string.
    pub fn binary(&self) -> String {
        (1..=self.len()).map(|i| if self.delta(i) { '1' } else { '0' }).collect()
    }

    /// The "bookend" autocorrelation pattern `1 0...0 1` of the given
    /// length, numerically `2^(len-1) + 1`. This is the autocorrelation
    /// that characterizes optimal strings.
    pub fn bookend(len: usize) -> Correlation {
        debug_assert!((2..=64).contains(&len));
        Correlation { len: len as u8, value: (1u64 << (len - 1)) | 1 }
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.binary())
    }
}

impl fmt::Debug for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Correlation({self})")
    }
}

// Wire format: {"n": 5, "value": 10, "binary": "01010"}.
impl Serialize for Correlation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            value: u64,
            binary: &'a str,
        }
        Wire { n: self.len(), value: self.value, binary: &self.binary() }.serialize(serializer)
    }
}

fn word_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// Word-level correlation of two packed strings of equal length: one
/// shift-and-compare per bit position instead of a character loop.
pub(crate) fn correlation_bits(len: usize, a: u64, b: u64) -> u64 {
    let mut value = 0u64;
    for i in 1..=len {
        let overlap = len - i + 1;
        // last `overlap` chars of a vs first `overlap` chars of b
        let tail = a & word_mask(overlap);
        let head = b >> (i - 1);
        if tail == head {
            value |= 1 << (len - i);
        }
    }
    value
}

/// The Conway number `C(a, b)`.
pub fn conway(a: &PatternString, b: &PatternString) -> Result<Correlation> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(Correlation {
        len: a.len() as u8,
        value: correlation_bits(a.len(), a.bits(), b.bits()),
    })
}

/// The autocorrelation `C(a, a)`; its leading bit is always 1.
pub fn autocorrelation(a: &PatternString) -> Correlation {
    Correlation {
        len: a.len() as u8,
        value: correlation_bits(a.len(), a.bits(), a.bits()),
    }
}

fn check_fragment_shorter(frag: Option<&Fragment>, m: usize) -> Result<()> {
    if let Some(f) = frag {
        if f.len() >= m {
            return Err(Error::bad_length(f.len(), "constraint fragments must be shorter than m"));
        }
    }
    Ok(())
}

/// Number of ordered pairs `(A1, A2)` of strings of length `m` whose
/// Conway number `C(A2, A1)` equals `k`, optionally with `A1` constrained
/// to begin with `x_prefix` and `A2` to end with `y_suffix`.
///
/// The `C(A2, A1)` orientation matches the bijection with length-`2m`
/// strings `A1 A2`: the last `m` bits of the autocorrelation of `A1 A2`
/// are the bits of `C(A2, A1)`.
pub fn count_correlation_pairs(
    m: usize,
    k: u64,
    x_prefix: Option<&Fragment>,
    y_suffix: Option<&Fragment>,
) -> Result<BigUint> {
    if !(3..=14).contains(&m) {
        return Err(Error::bad_length(m, "pair counting scans 4^m pairs; m must be in 3..=14"));
    }
    if k > word_mask(m) {
        return Err(Error::bad_length(k as usize, "k must be below 2^m"));
    }
    check_fragment_shorter(x_prefix, m)?;
    check_fragment_shorter(y_suffix, m)?;

    let firsts: Vec<u64> = filtered_bits(m, x_prefix, None);
    let seconds: Vec<u64> = filtered_bits(m, None, y_suffix);
    let count: u64 = firsts
        .par_iter()
        .map(|&a1| {
            seconds
                .iter()
                .filter(|&&a2| correlation_bits(m, a2, a1) == k)
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(count))
}

fn filtered_bits(len: usize, prefix: Option<&Fragment>, suffix: Option<&Fragment>) -> Vec<u64> {
    let total = 1u64 << len;
    (0..total)
        .filter(|&bits| match prefix {
            Some(p) => bits >> (len - p.len()) == p.bits(),
            None => true,
        })
        .filter(|&bits| match suffix {
            Some(s) => bits & word_mask(s.len()) == s.bits(),
            None => true,
        })
        .collect()
}

/// Number of strings of even length `2m` whose autocorrelation is
/// congruent to `k` modulo `2^m`.
pub fn count_autocorr_suffix_class(length: usize, k: u64) -> Result<BigUint> {
    count_autocorr_suffix_class_with(length, k, None, None)
}

/// Same count restricted to strings beginning with `x_prefix` and ending
/// with `y_suffix`.
pub fn count_autocorr_suffix_class_with(
    length: usize,
    k: u64,
    x_prefix: Option<&Fragment>,
    y_suffix: Option<&Fragment>,
) -> Result<BigUint> {
    if !length.is_multiple_of(2) || !(6..=28).contains(&length) {
        return Err(Error::bad_length(length, "suffix-class counting needs an even length in 6..=28"));
    }
    let m = length / 2;
    if k > word_mask(m) {
        return Err(Error::bad_length(k as usize, "k must be below 2^m"));
    }
    check_fragment_shorter(x_prefix, m)?;
    check_fragment_shorter(y_suffix, m)?;

    let modulus = word_mask(m);
    let prefix = x_prefix.copied();
    let suffix = y_suffix.copied();
    let count: u64 = (0u64..1 << length)
        .into_par_iter()
        .filter(|&bits| match prefix {
            Some(p) => bits >> (length - p.len()) == p.bits(),
            None => true,
        })
        .filter(|&bits| match suffix {
            Some(s) => bits & word_mask(s.len()) == s.bits(),
            None => true,
        })
        .filter(|&bits| correlation_bits(length, bits, bits) & modulus == k)
        .count() as u64;
    Ok(BigUint::from(count))
}

/// The distinct autocorrelation values realized by strings of the given
/// length whose autocorrelation is congruent to 1 modulo `2^m`, found by
/// exhaustive scan. `length` must be `2m`, `2m + 1` or `2m + 2`.
pub fn admissible_autocorrelations_mod(length: usize, m: usize) -> Result<Vec<Correlation>> {
    if m < 2 {
        return Err(Error::bad_length(m, "the admissible-autocorrelation scan needs m >= 2"));
    }
    if ![2 * m, 2 * m + 1, 2 * m + 2].contains(&length) {
        return Err(Error::bad_length(length, "length must be 2m, 2m+1 or 2m+2"));
    }
    if length > 28 {
        return Err(Error::bad_length(length, "exhaustive scan capped at length 28"));
    }
    let modulus = word_mask(m);
    let mut values: Vec<u64> = (0u64..1 << length)
        .into_par_iter()
        .map(|bits| correlation_bits(length, bits, bits))
        .filter(|value| value & modulus == 1)
        .collect();
    values.sort_unstable();
    values.dedup();
    Ok(values
        .into_iter()
        .map(|value| Correlation { len: length as u8, value })
        .collect())
}
