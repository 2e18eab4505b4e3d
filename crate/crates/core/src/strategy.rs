//! Player II's best response and Player I's optimal strings.
//!
//! The best response to `A` is one of the two candidates `H A'` and
//! `T A'`, where `A'` is the first `n - 1` characters of `A`, and the
//! better candidate always wins strictly. Player I's optimal strings are
//! the argmin of the best-responder's probability; for `n >= 5` they are
//! characterized as the strings starting `HT` and ending `THH` (or the
//! complement form) whose `(n-1)`-prefix has the bookend autocorrelation
//! `2^(n-2) + 1`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::correlation::{autocorrelation, Correlation};
use crate::error::{Error, Result};
use crate::odds::{cmp_odds, conway_odds, prob_from_odds};
use crate::pattern::{Coin, Fragment, PatternString};
use crate::rational::ExactProb;

/// Player II's unique best response to one query string.
#[derive(Clone, Debug, Serialize)]
pub struct BestResponse {
    pub responder: PatternString,
    /// Player II's winning probability with `responder`.
    pub prob: ExactProb,
    /// The losing candidate and its probability. Absent in the degenerate
    /// case where one candidate coincides with the query string itself.
    pub runner_up: Option<(PatternString, ExactProb)>,
    /// True when a candidate coincided with the query (only `H^n`/`T^n`).
    pub degenerate: bool,
}

/// Player I's set of optimal strings for one length.
#[derive(Clone, Debug, Serialize)]
pub struct OptimalSet {
    pub n: usize,
    /// Sorted by packed bits ascending.
    pub strings: Vec<PatternString>,
    /// The common probability that Player I wins under best play by II.
    pub player1_win_prob: ExactProb,
    pub method: OptimalMethod,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimalMethod {
    BruteForce,
    Csirik,
}

/// Best-response odds `(for_b, for_a)` for Player II playing `b` against
/// `a`, computed without allocating.
fn responder_odds(b: &PatternString, a: &PatternString) -> (u64, u64) {
    conway_odds(b, a).expect("candidates are distinct from the query by construction")
}

/// The two Guibas-Odlyzko candidates `H A'` and `T A'`.
fn candidates(a: &PatternString) -> [PatternString; 2] {
    let head = a.prefix(a.len() - 1).expect("n >= 3");
    [Coin::Heads, Coin::Tails].map(|coin| {
        Fragment::single(coin)
            .concat(&head)
            .to_pattern()
            .expect("candidate has the same length as the query")
    })
}

/// Player II's best response via the two-candidate rule. For the two
/// degenerate queries (`H^n`, `T^n`) one candidate equals the query and is
/// excluded; up to n = 14 the surviving candidate is then verified against
/// a full argmax before being returned.
pub fn best_response(a: &PatternString) -> BestResponse {
    let [hc, tc] = candidates(a);
    if hc == *a || tc == *a {
        let survivor = if hc == *a { tc } else { hc };
        let odds = responder_odds(&survivor, a);
        if a.len() <= 14 {
            let brute = best_response_bruteforce(a)
                .expect("uniqueness holds on every degenerate query in range");
            assert_eq!(
                brute.responder, survivor,
                "surviving candidate must be the global argmax for {a}"
            );
        }
        return BestResponse {
            responder: survivor,
            prob: prob_from_odds(odds.0, odds.1),
            runner_up: None,
            degenerate: true,
        };
    }
    let h_odds = responder_odds(&hc, a);
    let t_odds = responder_odds(&tc, a);
    let ((winner, wo), (loser, lo)) = match cmp_odds(h_odds, t_odds) {
        Ordering::Greater => ((hc, h_odds), (tc, t_odds)),
        Ordering::Less => ((tc, t_odds), (hc, h_odds)),
        Ordering::Equal => unreachable!("one candidate always performs strictly better ({a})"),
    };
    BestResponse {
        responder: winner,
        prob: prob_from_odds(wo.0, wo.1),
        runner_up: Some((loser, prob_from_odds(lo.0, lo.1))),
        degenerate: false,
    }
}

/// Full argmax of `P(b beats a)` over all `b != a`. The maximizer is
/// provably unique; a tie is reported as `TieDetected` because it would
/// contradict the uniqueness theorem.
pub fn best_response_bruteforce(a: &PatternString) -> Result<BestResponse> {
    let n = a.len();
    if n > 14 {
        return Err(Error::bad_length(n, "brute-force best response is capped at n = 14"));
    }
    let mut best: Option<(PatternString, (u64, u64))> = None;
    let mut second: Option<(PatternString, (u64, u64))> = None;
    let mut tied = false;
    for b in PatternString::enumerate(n)? {
        if b == *a {
            continue;
        }
        let odds = responder_odds(&b, a);
        match &best {
            None => best = Some((b, odds)),
            Some((_, top)) => match cmp_odds(odds, *top) {
                Ordering::Greater => {
                    second = best.take();
                    best = Some((b, odds));
                    tied = false;
                }
                Ordering::Equal => tied = true,
                Ordering::Less => {
                    let beats_second = second
                        .as_ref()
                        .is_none_or(|(_, s)| cmp_odds(odds, *s) == Ordering::Greater);
                    if beats_second {
                        second = Some((b, odds));
                    }
                }
            },
        }
    }
    let (responder, odds) = best.expect("at least one competitor exists for n >= 3");
    if tied {
        return Err(Error::TieDetected {
            detail: format!("multiple best responses to {a} share probability {}", {
                prob_from_odds(odds.0, odds.1)
            }),
        });
    }
    Ok(BestResponse {
        responder,
        prob: prob_from_odds(odds.0, odds.1),
        runner_up: second.map(|(s, o)| (s, prob_from_odds(o.0, o.1))),
        degenerate: false,
    })
}

/// Player I's optimal strings by full argmin over all strings of length
/// `n`, each evaluated against Player II's best response.
pub fn optimal_strings_bruteforce(n: usize) -> Result<OptimalSet> {
    if !(3..=14).contains(&n) {
        return Err(Error::bad_length(n, "brute-force optimal sets are capped at n in 3..=14"));
    }
    let evaluated: Vec<(PatternString, (u64, u64))> = PatternString::enumerate(n)?
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            let response = best_response(&a);
            let (fore, against) = response.prob.odds();
            // odds of u64 size by construction (n <= 14)
            let fore = u64::try_from(&fore).unwrap();
            let against = u64::try_from(&against).unwrap();
            (a, (fore, against))
        })
        .collect();
    let minimum = evaluated
        .iter()
        .map(|(_, odds)| *odds)
        .min_by(|x, y| cmp_odds(*x, *y))
        .expect("nonempty enumeration");
    let mut strings: Vec<PatternString> = evaluated
        .iter()
        .filter(|(_, odds)| cmp_odds(*odds, minimum) == Ordering::Equal)
        .map(|(a, _)| *a)
        .collect();
    strings.sort();
    Ok(OptimalSet {
        n,
        strings,
        player1_win_prob: prob_from_odds(minimum.0, minimum.1).complement(),
        method: OptimalMethod::BruteForce,
    })
}

/// Player I's winning probability under mutual best play for `n >= 5`:
/// `(2^(n-2) + 1) / (3 * 2^(n-2) + 2)`.
pub fn player1_value(n: usize) -> Result<ExactProb> {
    if n < 5 {
        return Err(Error::bad_length(n, "the closed form holds for n >= 5"));
    }
    let base = BigInt::from(1u8) << (n - 2);
    Ok(ExactProb::new(&base + 1, base * 3 + 2))
}

/// Player I's optimal strings for `n >= 5` by the prefix-autocorrelation
/// characterization: strings starting `HT` and ending `THH` whose
/// `(n-1)`-bit prefix has autocorrelation `2^(n-2) + 1`, plus their
/// complements (the `TH ... HTT` form).
pub fn optimal_strings_csirik(n: usize) -> Result<OptimalSet> {
    if n < 5 {
        return Err(Error::bad_length(n, "the characterization requires n >= 5; use brute force"));
    }
    if n > 28 {
        return Err(Error::bad_length(n, "materializing the set is capped at n = 28"));
    }
    let free = n - 5;
    let target = Correlation::bookend(n - 1);
    // template: HT | free bits | THH, with H = 1
    let head = 0b10u64 << (n - 2);
    let tail = 0b011u64;
    let mut strings: Vec<PatternString> = (0u64..1 << free)
        .into_par_iter()
        .filter_map(|mid| {
            let bits = head | (mid << 3) | tail;
            let candidate = PatternString::from_bits(n, bits).unwrap();
            let prefix = candidate.prefix(n - 1).unwrap().to_pattern().unwrap();
            (autocorrelation(&prefix) == target).then_some(candidate)
        })
        .collect();
    let complements: Vec<PatternString> = strings.iter().map(|s| s.complement()).collect();
    strings.extend(complements);
    strings.sort();
    Ok(OptimalSet {
        n,
        strings,
        player1_win_prob: player1_value(n)?,
        method: OptimalMethod::Csirik,
    })
}

/// `c*_m`: the number of strings of length `m` beginning `HT`, ending
/// `TH`, with the bookend autocorrelation `2^(m-1) + 1`, counted by
/// scanning the `2^(m-4)` strings with that prefix and suffix.
pub fn count_cstar(m: usize) -> Result<BigUint> {
    if !(4..=28).contains(&m) {
        return Err(Error::bad_length(m, "enumerative c* is capped at m in 4..=28"));
    }
    let free = m - 4;
    let target = (1u64 << (m - 1)) | 1;
    let head = 0b10u64 << (m - 2);
    let tail = 0b01u64;
    let count: u64 = (0u64..1 << free)
        .into_par_iter()
        .filter(|mid| {
            let bits = head | (mid << 2) | tail;
            crate::correlation::correlation_bits(m, bits, bits) == target
        })
        .count() as u64;
    Ok(BigUint::from(count))
}
