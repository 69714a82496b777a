use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::grid::GridSpec;
use crate::engine::path::{check_rate, wh_step, WhPath};
use crate::error::{Result, WhmcError};
use crate::levy::WhFactorSampler;

/// Approximation of `(τ_u∧t, X_{τ_u∧t} - u, u - X_{(τ_u∧t)-}, u - X̄_{(τ_u∧t)-})`.
///
/// `crossed` is false when the running maximum never strictly exceeded `u`
/// within `n` steps; the tuple is then evaluated at `κ∧n = n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourTuple {
    pub time: f64,
    pub overshoot: f64,
    pub undershoot: f64,
    pub gap_to_max: f64,
    pub crossed: bool,
}

/// Streaming detector of the first index `κ` with `J_κ > u`.
#[derive(Debug, Clone)]
pub struct PassageTracker {
    u: f64,
    n: usize,
    k: usize,
    prev: (f64, f64),
    cur: (f64, f64),
    crossed_at: Option<usize>,
}

impl PassageTracker {
    pub fn new(u: f64, n: usize) -> Self {
        PassageTracker {
            u,
            n,
            k: 0,
            prev: (0.0, 0.0),
            cur: (0.0, 0.0),
            crossed_at: None,
        }
    }

    /// True once crossed or `n` states have been pushed.
    #[inline]
    pub fn is_done(&self) -> bool {
        self.crossed_at.is_some() || self.k >= self.n
    }

    /// Feeds `(V_k, J_k)` for the next index `k`. Ignored once done.
    #[inline]
    pub fn push(&mut self, v: f64, j: f64) {
        if self.is_done() {
            return;
        }
        self.k += 1;
        self.prev = self.cur;
        self.cur = (v, j);
        if j > self.u {
            self.crossed_at = Some(self.k);
        }
    }

    /// `(V, J)` at index `κ∧n`, the last state pushed.
    pub fn state(&self) -> (f64, f64) {
        self.cur
    }

    pub fn finish(&self, t: f64) -> FourTuple {
        match self.crossed_at {
            Some(kappa) => FourTuple {
                time: t * kappa as f64 / self.n as f64,
                overshoot: self.cur.0 - self.u,
                undershoot: self.u - self.prev.0,
                gap_to_max: self.u - self.prev.1,
                crossed: true,
            },
            None => FourTuple {
                time: t,
                overshoot: self.cur.0 - self.u,
                undershoot: self.u - self.cur.0,
                gap_to_max: self.u - self.cur.1,
                crossed: false,
            },
        }
    }
}

fn check_barrier(u: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    Ok(())
}

/// Extracts the 4-tuple from a materialized walk.
pub fn first_passage_tuple(path: &WhPath, grid: &GridSpec, u: f64) -> Result<FourTuple> {
    check_barrier(u)?;
    if path.steps() < grid.n {
        return Err(WhmcError::Contract(format!(
            "path has {} steps but the grid needs {}",
            path.steps(),
            grid.n
        )));
    }
    let mut tracker = PassageTracker::new(u, grid.n);
    for k in 1..=grid.n {
        tracker.push(path.v[k], path.j[k]);
        if tracker.is_done() {
            break;
        }
    }
    Ok(tracker.finish(grid.t))
}

/// Result of one streamed trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub tuple: FourTuple,
    /// `(V_n, J_n)`; only meaningful when simulated with `full_horizon`.
    pub terminal: (f64, f64),
    pub steps: u64,
}

/// Fold form of the walk: never materializes the path. Without
/// `full_horizon` it stops at the first passage.
pub fn simulate_trial<R: Rng + ?Sized>(
    sampler: &WhFactorSampler,
    grid: &GridSpec,
    u: f64,
    full_horizon: bool,
    rng: &mut R,
) -> Result<Trial> {
    check_rate(sampler, grid)?;
    check_barrier(u)?;
    Ok(run_trial(sampler, grid, u, full_horizon, rng))
}

#[inline]
pub(crate) fn run_trial<R: Rng + ?Sized>(
    sampler: &WhFactorSampler,
    grid: &GridSpec,
    u: f64,
    full_horizon: bool,
    rng: &mut R,
) -> Trial {
    let mut tracker = PassageTracker::new(u, grid.n);
    let (mut v, mut j) = (0.0, 0.0);
    let mut steps = 0u64;
    for _ in 0..grid.n {
        let s = sampler.sample_sup(rng);
        let i = sampler.sample_inf(rng);
        (v, j) = wh_step(v, j, s, i);
        steps += 1;
        tracker.push(v, j);
        if tracker.is_done() && !full_horizon {
            break;
        }
    }
    Trial {
        tuple: tracker.finish(grid.t),
        terminal: (v, j),
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::path::{simulate_wh_path, walk_from_increments};
    use crate::levy::{BetaFamilyParams, LevyModel};
    use crate::rng::stream;

    fn path_from(v: &[f64], j: &[f64]) -> WhPath {
        WhPath {
            v: v.to_vec(),
            j: j.to_vec(),
        }
    }

    #[test]
    fn first_strict_exceedance() {
        let p = path_from(&[0.0, 0.5, 0.7, 0.1], &[0.0, 0.5, 1.2, 1.2]);
        let g = GridSpec::new(3, 3.0).unwrap();
        let tup = first_passage_tuple(&p, &g, 1.0).unwrap();
        assert!(tup.crossed);
        assert_eq!(tup.time, 2.0);
    }

    #[test]
    fn formula_substitution() {
        let p = path_from(&[0.0, 0.2, 0.8, 1.3, 1.0], &[0.0, 0.4, 0.9, 1.4, 1.4]);
        let g = GridSpec::new(4, 2.0).unwrap();
        let tup = first_passage_tuple(&p, &g, 1.0).unwrap();
        assert!(tup.crossed);
        assert_eq!(tup.time, 1.5);
        assert!((tup.overshoot - 0.3).abs() < 1e-15);
        assert!((tup.undershoot - 0.2).abs() < 1e-15);
        assert!((tup.gap_to_max - 0.1).abs() < 1e-15);
    }

    #[test]
    fn tie_at_barrier_is_not_a_crossing() {
        let p = path_from(&[0.0, 1.0, 0.5], &[0.0, 1.0, 1.0]);
        let g = GridSpec::new(2, 1.0).unwrap();
        let tup = first_passage_tuple(&p, &g, 1.0).unwrap();
        assert!(!tup.crossed);
        assert_eq!(tup.time, 1.0);
        assert_eq!(tup.overshoot, -0.5);
        assert_eq!(tup.undershoot, 0.5);
        assert_eq!(tup.gap_to_max, 0.0);
    }

    #[test]
    fn rejects_non_positive_barrier() {
        let p = walk_from_increments(&[1.0], &[-1.0]);
        let g = GridSpec::new(1, 1.0).unwrap();
        assert!(matches!(
            first_passage_tuple(&p, &g, 0.0),
            Err(WhmcError::Domain(_))
        ));
    }

    #[test]
    fn streamed_trial_matches_materialized_path() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        let g = GridSpec::new(32, 1.0).unwrap();
        let s = WhFactorSampler::new(&m, g.lambda(), 30).unwrap();
        for seed in 0..200 {
            let path = simulate_wh_path(&s, &g, &mut stream(seed, 0)).unwrap();
            let trial = simulate_trial(&s, &g, 0.5, true, &mut stream(seed, 0)).unwrap();
            assert_eq!(trial.tuple, first_passage_tuple(&path, &g, 0.5).unwrap());
            assert_eq!(trial.terminal, (path.v[32], path.j[32]));
            let early = simulate_trial(&s, &g, 0.5, false, &mut stream(seed, 0)).unwrap();
            assert_eq!(early.tuple, trial.tuple);
        }
    }

    #[test]
    fn tuple_invariants_on_random_paths() {
        let g = GridSpec::new(16, 1.0).unwrap();
        let s = WhFactorSampler::new(&LevyModel::standard_brownian(), 16.0, 0).unwrap();
        let mut rng = stream(8, 0);
        for _ in 0..2000 {
            let t = simulate_trial(&s, &g, 0.7, false, &mut rng).unwrap().tuple;
            if t.crossed {
                assert!(t.time <= 1.0);
                assert!(t.gap_to_max >= 0.0 && t.gap_to_max <= 0.7);
            } else {
                assert_eq!(t.time, 1.0);
                assert!(t.overshoot <= 0.0);
            }
        }
    }
}
