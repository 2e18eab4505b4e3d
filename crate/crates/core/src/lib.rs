//! Exact-arithmetic analysis engine for the Penney-Ante coin game.
//!
//! Two players pick distinct head/tail strings of a common length `n >= 3`;
//! a fair coin is tossed until one string appears as a contiguous run, and
//! that player wins. This crate computes, with exact rational arithmetic
//! throughout: Conway correlations, pairwise winning probabilities (both by
//! Conway's formula and by an independent absorbing-chain solver), best
//! responses, Player I's optimal strings and their counts `c_n`, the
//! asymptotic density constant of optimal strings to arbitrary precision,
//! the "appears last wins" variant, and exact random-vs-optimal strategy
//! statistics.

pub mod correlation;
pub mod error;
pub mod flipped;
pub mod markov;
pub mod odds;
pub mod pattern;
pub mod rational;
pub mod rng;
pub mod sequence;
pub mod stats;
pub mod strategy;
pub mod verify;

pub use correlation::{autocorrelation, conway, Correlation};
pub use error::{Error, Result};
pub use flipped::FlippedBestResponse;
pub use markov::{build_chain, first_occurrence_prob, GameChain};
pub use odds::{prob_matrix, win_prob, ProbMatrix};
pub use pattern::{Coin, Fragment, PatternString, MAX_LEN, MIN_LEN};
pub use rational::{decimal_string, ExactProb};
pub use sequence::{alpha, AlphaApprox, CnRecord, CnTable};
pub use strategy::{best_response, BestResponse, OptimalSet};
