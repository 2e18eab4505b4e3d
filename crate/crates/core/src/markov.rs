//! Absorbing-chain oracle for first-occurrence probabilities.
//!
//! Independent of Conway's formula: the game is modeled as a Markov chain
//! whose states are the longest toss-history suffixes that are prefixes of
//! either chosen string, and the hitting probabilities of the two
//! absorbing states are solved exactly by rational Gaussian elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pattern::{Coin, Fragment, PatternString};
use crate::rational::ExactProb;

/// Where a toss leads from a transient state.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
enum Successor {
    Transient(usize),
    AbsorbA,
    AbsorbB,
}

/// The absorbing chain of one game `(a, b)`. State 0 is always the empty
/// history; every other transient state is a proper prefix of `a` or `b`.
pub struct GameChain {
    a: PatternString,
    b: PatternString,
    states: Vec<Fragment>,
    transitions: Vec<[Successor; 2]>,
}

impl GameChain {
    pub fn a(&self) -> &PatternString {
        &self.a
    }

    pub fn b(&self) -> &PatternString {
        &self.b
    }

    /// Transient states (the two absorbers are not listed).
    pub fn states(&self) -> &[Fragment] {
        &self.states
    }

    /// Transient states plus the two absorbers.
    pub fn state_count(&self) -> usize {
        self.states.len() + 2
    }

    /// Exact probability, from every transient state, of being absorbed at
    /// `a` before `b`. Index 0 is the empty state.
    pub fn hitting_probabilities(&self) -> Result<Vec<ExactProb>> {
        let k = self.states.len();
        let mut matrix = vec![vec![BigRational::zero(); k]; k];
        let mut rhs = vec![BigRational::zero(); k];
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for (i, succs) in self.transitions.iter().enumerate() {
            matrix[i][i] = BigRational::one();
            for succ in succs {
                match succ {
                    Successor::Transient(j) => matrix[i][*j] -= &half,
                    Successor::AbsorbA => rhs[i] += &half,
                    Successor::AbsorbB => {}
                }
            }
        }
        let solution = solve_linear(matrix, rhs)?;
        solution
            .into_iter()
            .map(|value| {
                if value < BigRational::zero() || value > BigRational::one() {
                    Err(Error::SingularSystem)
                } else {
                    Ok(ExactProb::from_ratio(value))
                }
            })
            .collect()
    }
}

/// Build the chain for the game `(a, b)`.
pub fn build_chain(a: &PatternString, b: &PatternString) -> Result<GameChain> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    if a == b {
        return Err(Error::SameString);
    }
    let n = a.len();
    // every proper prefix of a or b, deduplicated, empty state first
    let mut states: Vec<Fragment> = vec![Fragment::empty()];
    for k in 1..n {
        for s in [a.prefix(k)?, b.prefix(k)?] {
            if !states.contains(&s) {
                states.push(s);
            }
        }
    }
    let index_of = |frag: &Fragment| states.iter().position(|s| s == frag);
    let transitions = states
        .iter()
        .map(|state| {
            [Coin::Tails, Coin::Heads].map(|toss| {
                let history = state.push(toss);
                if history == a.as_fragment() {
                    return Successor::AbsorbA;
                }
                if history == b.as_fragment() {
                    return Successor::AbsorbB;
                }
                // longest suffix of the extended history that is a prefix
                // of a or b; the empty suffix always qualifies
                for len in (0..=history.len().min(n - 1)).rev() {
                    let candidate = history.suffix(len);
                    if candidate.is_prefix_of(a) || candidate.is_prefix_of(b) {
                        return Successor::Transient(
                            index_of(&candidate).expect("prefix states are pre-registered"),
                        );
                    }
                }
                unreachable!("the empty suffix is a prefix of every string")
            })
        })
        .collect();
    Ok(GameChain { a: *a, b: *b, states, transitions })
}

/// Exact probability that `a` appears before `b`, from the empty history.
pub fn first_occurrence_prob(chain: &GameChain) -> Result<ExactProb> {
    Ok(chain.hitting_probabilities()?[0].clone())
}

/// Plain rational Gaussian elimination with partial pivoting by first
/// nonzero entry. System sizes stay below ~2n, so coefficient growth is a
/// non-issue; exactness is the point.
fn solve_linear(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&row| !m[row][col].is_zero())
            .ok_or(Error::SingularSystem)?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip();
        for entry in m[col].iter_mut() {
            *entry *= &inv;
        }
        rhs[col] *= &inv;
        for row in 0..k {
            if row == col || m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone();
            let (pivot_row, target_row) = if row < col {
                let (head, tail) = m.split_at_mut(col);
                (&tail[0], &mut head[row])
            } else {
                let (head, tail) = m.split_at_mut(row);
                (&head[col], &mut tail[0])
            };
            for (entry, pivot) in target_row[col..].iter_mut().zip(&pivot_row[col..]) {
                let delta = &factor * pivot;
                *entry -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[row] -= delta;
        }
    }
    Ok(rhs)
}
