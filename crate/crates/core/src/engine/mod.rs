//! Stochastic-grid random walk `(V, J)` and first-passage extraction.

pub mod grid;
pub mod passage;
pub mod path;

pub use grid::{generate_grid_times, grid_overshoot, GridSpec};
pub use passage::{first_passage_tuple, simulate_trial, FourTuple, PassageTracker, Trial};
pub use path::{simulate_wh_path, terminal_pair, walk_from_increments, wh_step, WhPath};
