//! The flipped game: the player whose string appears *last* wins.
//!
//! Equivalently, the pairwise probability matrix is the transpose of the
//! standard one: Player II holding `b` against `a` wins the flipped game
//! exactly when `a` appears first, so her winning probability is
//! `P(a before b)`. The odds in favor of `a` are
//! `q(a, b) = (C(a,a) - C(a,b)) / (C(b,b) - C(b,a))`, the reciprocal of
//! the standard odds. Unlike the standard game, best responses here are
//! genuinely non-unique, so maximizer *sets* are first-class.

use std::cmp::Ordering;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::odds::{cmp_odds, conway_odds, prob_from_odds, win_prob};
use crate::pattern::{Coin, PatternString};
use crate::rational::ExactProb;
use crate::strategy::{OptimalMethod, OptimalSet};

/// Player II's best responses in the flipped game; ties are real and kept.
#[derive(Clone, Debug, Serialize)]
pub struct FlippedBestResponse {
    pub queried: PatternString,
    /// All maximizers, sorted by packed bits ascending.
    pub maximizers: Vec<PatternString>,
    /// The shared winning probability of every maximizer.
    pub prob: ExactProb,
}

/// Odds `(for_a, for_b)` in favor of `a` in the flipped game:
/// `(C(a,a) - C(a,b), C(b,b) - C(b,a))`.
pub fn q_odds(a: &PatternString, b: &PatternString) -> Result<(u64, u64)> {
    let (for_a_standard, for_b_standard) = conway_odds(a, b)?;
    Ok((for_b_standard, for_a_standard))
}

/// `q(a, b)` as an exact ratio; `q(a, b) * q(b, a) = 1`.
pub fn q_value(a: &PatternString, b: &PatternString) -> Result<BigRational> {
    let (fore, against) = q_odds(a, b)?;
    Ok(BigRational::new(fore.into(), against.into()))
}

/// Probability that `a` wins the flipped game against `b`, i.e. that `a`
/// appears last; exactly `1 - P(a before b)`.
pub fn flipped_win_prob(a: &PatternString, b: &PatternString) -> Result<ExactProb> {
    Ok(win_prob(a, b)?.complement())
}

fn sweep_gate(n: usize) -> Result<()> {
    if !(3..=12).contains(&n) {
        return Err(Error::bad_length(n, "flipped-game sweeps are capped at n in 3..=12"));
    }
    Ok(())
}

/// Odds that Player II (holding `b`) wins the flipped game against `a`:
/// the standard odds of `a` appearing first.
fn responder_odds(b: &PatternString, a: &PatternString) -> (u64, u64) {
    conway_odds(a, b).expect("lengths equal and strings distinct by construction")
}

/// All of Player II's best responses to `a`, by full argmax with exact
/// tie preservation. The queried string itself is never a legal response.
pub fn flipped_best_response(a: &PatternString) -> Result<FlippedBestResponse> {
    sweep_gate(a.len())?;
    let mut best: Option<(u64, u64)> = None;
    let mut maximizers: Vec<PatternString> = Vec::new();
    for b in PatternString::enumerate(a.len())? {
        if b == *a {
            continue;
        }
        let odds = responder_odds(&b, a);
        match best {
            None => {
                best = Some(odds);
                maximizers.push(b);
            }
            Some(top) => match cmp_odds(odds, top) {
                Ordering::Greater => {
                    best = Some(odds);
                    maximizers.clear();
                    maximizers.push(b);
                }
                Ordering::Equal => maximizers.push(b),
                Ordering::Less => {}
            },
        }
    }
    let (fore, against) = best.expect("every length admits at least one response");
    maximizers.sort();
    Ok(FlippedBestResponse { queried: *a, maximizers, prob: prob_from_odds(fore, against) })
}

/// Player I's optimal strings in the flipped game by brute force: the
/// argmax over `a` of `min over b != a` of Player I's winning probability.
pub fn flipped_optimal_strings(n: usize) -> Result<OptimalSet> {
    sweep_gate(n)?;
    let evaluated: Vec<(PatternString, (u64, u64))> = PatternString::enumerate(n)?
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|a| {
            // Player I's guaranteed value is the complement of Player II's
            // best-response probability; track II's max odds per a.
            let top = PatternString::enumerate(n)
                .unwrap()
                .filter(|b| *b != a)
                .map(|b| responder_odds(&b, &a))
                .max_by(|x, y| cmp_odds(*x, *y))
                .unwrap();
            (a, top)
        })
        .collect();
    // maximize 1 - p(top) = minimize p(top)
    let best = evaluated
        .iter()
        .map(|(_, odds)| *odds)
        .min_by(|x, y| cmp_odds(*x, *y))
        .unwrap();
    let mut strings: Vec<PatternString> = evaluated
        .iter()
        .filter(|(_, odds)| cmp_odds(*odds, best) == Ordering::Equal)
        .map(|(a, _)| *a)
        .collect();
    strings.sort();
    Ok(OptimalSet {
        n,
        strings,
        player1_win_prob: prob_from_odds(best.0, best.1).complement(),
        method: OptimalMethod::BruteForce,
    })
}

/// One query whose maximizer set escapes the conjectured four candidates.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureCounterexample {
    pub queried: PatternString,
    pub outside: Vec<PatternString>,
    pub response: FlippedBestResponse,
}

/// Exhaustive check that every flipped best response lies among
/// `{H^n, T^n, suffix(a, n-1) + H, suffix(a, n-1) + T}`, excluding `a`
/// itself. Counterexamples are content, not errors: lengths past the
/// verified range stay explorable without redefining success.
#[derive(Clone, Debug, Serialize)]
pub struct Conjecture3Report {
    pub n: usize,
    pub holds: bool,
    pub queries: u64,
    pub counterexamples: Vec<ConjectureCounterexample>,
}

pub fn check_conjecture3(n: usize) -> Result<Conjecture3Report> {
    sweep_gate(n)?;
    let all_heads = PatternString::repeated(Coin::Heads, n)?;
    let all_tails = PatternString::repeated(Coin::Tails, n)?;
    let mut counterexamples: Vec<ConjectureCounterexample> = PatternString::enumerate(n)?
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|a| {
            let response = flipped_best_response(&a).unwrap();
            let tail = a.suffix(n - 1).unwrap();
            let allowed = [
                all_heads,
                all_tails,
                tail.push(Coin::Heads).to_pattern().unwrap(),
                tail.push(Coin::Tails).to_pattern().unwrap(),
            ];
            let outside: Vec<PatternString> = response
                .maximizers
                .iter()
                .filter(|m| !allowed.contains(m))
                .copied()
                .collect();
            (!outside.is_empty()).then_some(ConjectureCounterexample {
                queried: a,
                outside,
                response,
            })
        })
        .collect();
    counterexamples.sort_by_key(|c| c.queried);
    Ok(Conjecture3Report {
        n,
        holds: counterexamples.is_empty(),
        queries: 1 << n,
        counterexamples,
    })
}
