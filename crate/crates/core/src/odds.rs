//! Pairwise winning probabilities via Conway's formula.
//!
//! The odds in favor of `A` over `B` are
//! `(C(B,B) - C(B,A)) : (C(A,A) - C(A,B))`. Both differences are strictly
//! positive for distinct strings because an autocorrelation is at least
//! `2^(n-1)` while a cross-correlation is at most `2^(n-1) - 1`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::correlation::correlation_bits;
use crate::error::{Error, Result};
use crate::pattern::PatternString;
use crate::rational::ExactProb;

/// Raw Conway odds `(for_a, for_b)` of "`a` appears before `b`":
/// `for_a = C(b,b) - C(b,a)` and `for_b = C(a,a) - C(a,b)`.
///
/// This is the exact integer form used by all exhaustive sweeps; the
/// probability `for_a / (for_a + for_b)` is materialized as a rational
/// only where a probability is actually reported.
pub fn conway_odds(a: &PatternString, b: &PatternString) -> Result<(u64, u64)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a == b {
        return Err(Error::SameString);
    }
    let n = a.len();
    let (ab, bb) = (a.bits(), b.bits());
    let for_a = correlation_bits(n, bb, bb) - correlation_bits(n, bb, ab);
    let for_b = correlation_bits(n, ab, ab) - correlation_bits(n, ab, bb);
    debug_assert!(for_a > 0 && for_b > 0);
    Ok((for_a, for_b))
}

/// Compare two probabilities given as odds pairs `x/(x+y)` without leaving
/// machine integers: `x1/(x1+y1) <=> x2/(x2+y2)` iff `x1*y2 <=> x2*y1`.
pub(crate) fn cmp_odds(lhs: (u64, u64), rhs: (u64, u64)) -> Ordering {
    (lhs.0 as u128 * rhs.1 as u128).cmp(&(rhs.0 as u128 * lhs.1 as u128))
}

/// `P(a appears before b)`, exact.
pub fn win_prob(a: &PatternString, b: &PatternString) -> Result<ExactProb> {
    let (for_a, for_b) = conway_odds(a, b)?;
    Ok(prob_from_odds(for_a, for_b))
}

pub(crate) fn prob_from_odds(for_a: u64, for_b: u64) -> ExactProb {
    ExactProb::new(
        num_bigint::BigInt::from(for_a),
        num_bigint::BigInt::from(for_a as u128 + for_b as u128),
    )
}

/// The full matrix of pairwise winning probabilities for one length.
/// `entry(b, a)` is the probability that `b` appears before `a`, matching
/// the row/column layout of the published table (rows indexed by `B`).
pub struct ProbMatrix {
    n: usize,
    entries: Vec<Option<ExactProb>>,
}

impl ProbMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strings(&self) -> impl Iterator<Item = PatternString> {
        PatternString::enumerate(self.n).expect("matrix length already validated")
    }

    pub fn entry(&self, b: &PatternString, a: &PatternString) -> Option<&ExactProb> {
        debug_assert_eq!(b.len(), self.n);
        debug_assert_eq!(a.len(), self.n);
        self.entries[(b.bits() << self.n | a.bits()) as usize].as_ref()
    }
}

/// Build the complete probability matrix; quadratic in `2^n`, so capped.
pub fn prob_matrix(n: usize) -> Result<ProbMatrix> {
    if !(3..=10).contains(&n) {
        return Err(Error::bad_length(n, "full matrices are built only for n in 3..=10"));
    }
    let size = 1usize << n;
    let entries: Vec<Option<ExactProb>> = (0..size * size)
        .into_par_iter()
        .map(|idx| {
            let b = PatternString::from_bits(n, (idx >> n) as u64).unwrap();
            let a = PatternString::from_bits(n, (idx & (size - 1)) as u64).unwrap();
            if a == b {
                None
            } else {
                Some(win_prob(&b, &a).unwrap())
            }
        })
        .collect();
    Ok(ProbMatrix { n, entries })
}

/// Search for a nontransitivity witness: a cycle of distinct strings in
/// which each one beats its predecessor with probability strictly above
/// 1/2 and the first beats the last. Three-cycles are tried first; if none
/// exists (as at n = 3, where the length-3 table admits only four-cycles),
/// the search widens to four-cycles. Returns the first cycle in
/// enumeration order, so the result is stable.
pub fn find_nontransitive_cycle(n: usize) -> Result<Option<Vec<PatternString>>> {
    if !(3..=10).contains(&n) {
        return Err(Error::bad_length(n, "cycle search is capped at n in 3..=10"));
    }
    let all: Vec<PatternString> = PatternString::enumerate(n)?.collect();
    let beats = |x: &PatternString, y: &PatternString| {
        x != y && {
            let (fore, against) = conway_odds(x, y).unwrap();
            fore > against
        }
    };
    for a in &all {
        for b in all.iter().filter(|b| beats(b, a)) {
            for c in all.iter().filter(|c| *c != a && beats(c, b)) {
                if beats(a, c) {
                    return Ok(Some(vec![*a, *b, *c]));
                }
            }
        }
    }
    for a in &all {
        for b in all.iter().filter(|b| beats(b, a)) {
            for c in all.iter().filter(|c| *c != a && beats(c, b)) {
                for d in all.iter().filter(|d| *d != a && *d != b && beats(d, c)) {
                    if beats(a, d) {
                        return Ok(Some(vec![*a, *b, *c, *d]));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PatternString {
        PatternString::parse(s).unwrap()
    }

    fn prob(a: &str, b: &str) -> ExactProb {
        win_prob(&p(a), &p(b)).unwrap()
    }

    #[test]
    fn classic_values() {
        assert_eq!(prob("THH", "HHH"), ExactProb::new(7, 8));
        assert_eq!(prob("HHT", "HTH"), ExactProb::new(2, 3));
        assert_eq!(prob("HTH", "HHH"), ExactProb::new(3, 5));
        assert_eq!(prob("HHH", "TTT"), ExactProb::new(1, 2));
        assert_eq!(prob("HHT", "THH"), ExactProb::new(1, 4));
    }

    #[test]
    fn rejects_identical_strings() {
        assert_eq!(win_prob(&p("HTH"), &p("HTH")).unwrap_err(), Error::SameString);
    }

    #[test]
    fn complementary_events_sum_to_one() {
        for a in PatternString::enumerate(4).unwrap() {
            for b in PatternString::enumerate(4).unwrap() {
                if a == b {
                    continue;
                }
                let total = win_prob(&a, &b).unwrap() + win_prob(&b, &a).unwrap();
                assert_eq!(total, ExactProb::one());
            }
        }
    }

    #[test]
    fn odds_comparison_is_exact() {
        assert_eq!(cmp_odds((7, 1), (2, 1)), Ordering::Greater);
        assert_eq!(cmp_odds((1, 2), (2, 4)), Ordering::Equal);
        assert_eq!(cmp_odds((u64::MAX - 1, u64::MAX), (u64::MAX, u64::MAX - 1)), Ordering::Less);
    }

    #[test]
    fn matrix_agrees_with_win_prob() {
        let m = prob_matrix(3).unwrap();
        assert_eq!(*m.entry(&p("THH"), &p("HHH")).unwrap(), ExactProb::new(7, 8));
        assert!(m.entry(&p("HHH"), &p("HHH")).is_none());
        let mut count = 0;
        for b in m.strings() {
            for a in m.strings() {
                if let Some(entry) = m.entry(&b, &a) {
                    count += 1;
                    assert_eq!(*entry, win_prob(&b, &a).unwrap());
                }
            }
        }
        assert_eq!(count, 56);
    }

    #[test]
    fn nontransitive_cycle_exists_for_small_n() {
        let half = ExactProb::half();
        for n in 3..=6 {
            let cycle = find_nontransitive_cycle(n).unwrap().expect("cycle should exist");
            assert!(cycle.len() == 3 || cycle.len() == 4);
            for pair in cycle.windows(2) {
                assert!(win_prob(&pair[1], &pair[0]).unwrap() > half);
            }
            assert!(win_prob(&cycle[0], cycle.last().unwrap()).unwrap() > half);
        }
        // the length-3 table admits no strict three-cycle
        assert_eq!(find_nontransitive_cycle(3).unwrap().unwrap().len(), 4);
    }
}
