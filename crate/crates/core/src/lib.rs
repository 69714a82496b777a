//! Wiener–Hopf Monte Carlo for first-passage functionals of Lévy processes.
//!
//! The walk `V_k = V_{k-1} + S_k + I_k`, `J_k = max(J_{k-1}, V_{k-1} + S_k)`
//! with `S_k ~ X̄_{e(n/t)}` and `I_k ~ X̲_{e(n/t)}` has the law of
//! `(X, X̄)` sampled on a Poisson grid of rate `n/t`. From it we read off
//! the first passage time over a barrier, the overshoot, the undershoot and
//! the gap to the pre-passage maximum, and estimate their expectations with
//! plain or multilevel Monte Carlo.

pub mod baselines;
pub mod cli;
pub mod engine;
pub mod error;
pub mod estimators;
pub mod levy;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{Result, WhmcError};
