//! Law-exact coupling of consecutive levels by geometric thinning.
//!
//! The fine walk runs at rate `n_f / t = 2 n_c / t`. After every fine step
//! a fair coin decides whether that step closes a coarse block. A block
//! spans a Geometric(1/2) number of `Exp(2λ_c)` grid spacings, i.e. an
//! `Exp(λ_c)` duration, and the fine recursion already tracks the running
//! maximum inside the block. Hence the coarse walk is the fine walk
//! observed at block ends, and both marginals are exact WHMC laws.

use rand::Rng;

use crate::engine::passage::PassageTracker;
use crate::engine::{wh_step, FourTuple, GridSpec, Trial};
use crate::error::{Result, WhmcError};
use crate::levy::{LevyModel, WhFactorSampler, DEFAULT_TRUNCATION};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledTrial {
    pub fine: Trial,
    pub coarse: Trial,
    /// Fine steps drawn; coarse states are read off the fine walk for free.
    pub steps: u64,
}

/// Sampler for `(fine, coarse)` tuple pairs at `n_fine = 2 n_coarse`.
#[derive(Debug, Clone)]
pub struct CoupledSampler {
    pub fine_sampler: WhFactorSampler,
    pub fine_grid: GridSpec,
    pub n_coarse: usize,
}

impl CoupledSampler {
    pub fn new(model: &LevyModel, t: f64, n_fine: usize, truncation_n: usize) -> Result<Self> {
        if n_fine < 2 || !n_fine.is_multiple_of(2) {
            return Err(WhmcError::Parameter(format!(
                "n_fine must be an even number >= 2, got {n_fine}"
            )));
        }
        let fine_grid = GridSpec::new(n_fine, t)?;
        let fine_sampler = WhFactorSampler::new(model, fine_grid.lambda(), truncation_n)?;
        Ok(CoupledSampler {
            fine_sampler,
            fine_grid,
            n_coarse: n_fine / 2,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, u: f64, full_horizon: bool, rng: &mut R) -> CoupledTrial {
        self.sample_with_marks(u, full_horizon, 0.5, rng)
    }

    /// `mark_probability = 1` makes every fine step its own block.
    pub(crate) fn sample_with_marks<R: Rng + ?Sized>(
        &self,
        u: f64,
        full_horizon: bool,
        mark_probability: f64,
        rng: &mut R,
    ) -> CoupledTrial {
        let n_f = self.fine_grid.n;
        let n_c = self.n_coarse;
        let t = self.fine_grid.t;
        let mut fine = PassageTracker::new(u, n_f);
        let mut coarse = PassageTracker::new(u, n_c);
        let (mut v, mut j) = (0.0, 0.0);
        let mut fine_terminal = (0.0, 0.0);
        let mut coarse_terminal = (0.0, 0.0);
        let mut steps = 0usize;
        let mut blocks = 0usize;
        loop {
            let fine_needed = if full_horizon {
                steps < n_f
            } else {
                !fine.is_done()
            };
            let coarse_needed = if full_horizon {
                blocks < n_c
            } else {
                !coarse.is_done()
            };
            if !fine_needed && !coarse_needed {
                break;
            }
            let s = self.fine_sampler.sample_sup(rng);
            let i = self.fine_sampler.sample_inf(rng);
            (v, j) = wh_step(v, j, s, i);
            steps += 1;
            if steps <= n_f {
                fine.push(v, j);
                if steps == n_f {
                    fine_terminal = (v, j);
                }
            }
            if rng.random_bool(mark_probability) {
                blocks += 1;
                if blocks <= n_c {
                    coarse.push(v, j);
                    if blocks == n_c {
                        coarse_terminal = (v, j);
                    }
                }
            }
        }
        let steps = steps as u64;
        CoupledTrial {
            fine: Trial {
                tuple: fine.finish(t),
                terminal: fine_terminal,
                steps: steps.min(n_f as u64),
            },
            coarse: Trial {
                tuple: coarse.finish(t),
                terminal: coarse_terminal,
                steps,
            },
            steps,
        }
    }
}

/// One coupled `(fine, coarse)` pair of 4-tuples.
///
/// Builds the fine-level sampler on every call; use [`CoupledSampler`]
/// directly when drawing many pairs.
pub fn coupled_pair_sample<R: Rng + ?Sized>(
    model: &LevyModel,
    u: f64,
    t: f64,
    n_fine: usize,
    rng: &mut R,
) -> Result<(FourTuple, FourTuple)> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    let sampler = CoupledSampler::new(model, t, n_fine, DEFAULT_TRUNCATION)?;
    let pair = sampler.sample(u, false, rng);
    Ok((pair.fine.tuple, pair.coarse.tuple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::passage::simulate_trial;
    use crate::levy::BetaFamilyParams;
    use crate::rng::stream;
    use crate::stats::{ks_two_sample, Moments};

    #[test]
    fn all_marks_make_coarse_a_prefix_of_fine() {
        let m = LevyModel::standard_brownian();
        let cs = CoupledSampler::new(&m, 1.0, 16, 0).unwrap();
        for seed in 0..300 {
            let mut rng = stream(seed, 0);
            let pair = cs.sample_with_marks(0.6, true, 1.0, &mut rng);
            // coarse sees fine steps 1..=8 with time index doubled
            let fine8 = {
                let mut rng = stream(seed, 0);
                let mut tr = PassageTracker::new(0.6, 8);
                let (mut v, mut j) = (0.0, 0.0);
                for _ in 0..8 {
                    let s = cs.fine_sampler.sample_sup(&mut rng);
                    let i = cs.fine_sampler.sample_inf(&mut rng);
                    (v, j) = wh_step(v, j, s, i);
                    let _: bool = rng.random_bool(1.0);
                    tr.push(v, j);
                    if tr.is_done() {
                        break;
                    }
                }
                tr.finish(1.0)
            };
            assert_eq!(pair.coarse.tuple, fine8);
        }
    }

    #[test]
    fn coarse_marginal_matches_independent_run() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        let cs = CoupledSampler::new(&m, 1.0, 32, 60).unwrap();
        let g = GridSpec::new(16, 1.0).unwrap();
        let direct = WhFactorSampler::new(&m, g.lambda(), 60).unwrap();
        let mut rng = stream(21, 0);
        let coupled: Vec<f64> = (0..5000)
            .map(|_| cs.sample(1.0, false, &mut rng).coarse.tuple.time)
            .collect();
        let indep: Vec<f64> = (0..5000)
            .map(|_| {
                simulate_trial(&direct, &g, 1.0, false, &mut rng)
                    .unwrap()
                    .tuple
                    .time
            })
            .collect();
        assert!(ks_two_sample(&coupled, &indep).p_value > 0.01);
    }

    #[test]
    fn coupling_reduces_squared_difference() {
        let m = LevyModel::standard_brownian();
        let cs = CoupledSampler::new(&m, 1.0, 256, 0).unwrap();
        let mut rng = stream(5, 0);
        let mut diff = Moments::default();
        let mut fine = Moments::default();
        for _ in 0..4000 {
            let p = cs.sample(0.5, false, &mut rng);
            diff.push((p.fine.tuple.time - p.coarse.tuple.time).powi(2));
            fine.push(p.fine.tuple.time);
        }
        assert!(diff.mean() * 4.0 < 2.0 * fine.variance());
    }

    #[test]
    fn full_horizon_terminals() {
        let m = LevyModel::standard_brownian();
        let cs = CoupledSampler::new(&m, 2.0, 8, 0).unwrap();
        let mut rng = stream(2, 0);
        let p = cs.sample(100.0, true, &mut rng);
        assert!(!p.fine.tuple.crossed && !p.coarse.tuple.crossed);
        assert_eq!(p.fine.tuple.overshoot, p.fine.terminal.0 - 100.0);
        assert_eq!(p.coarse.tuple.overshoot, p.coarse.terminal.0 - 100.0);
        assert!(p.steps >= 8);
    }

    #[test]
    fn rejects_odd_fine_level() {
        assert!(CoupledSampler::new(&LevyModel::standard_brownian(), 1.0, 7, 0).is_err());
    }
}
