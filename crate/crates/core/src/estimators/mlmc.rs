use serde::Serialize;

use crate::engine::passage::run_trial;
use crate::engine::GridSpec;
use crate::error::{Result, WhmcError};
use crate::estimators::coupling::CoupledSampler;
use crate::estimators::functional::Functional;
use crate::estimators::mc::{check_finite, sharded};
use crate::estimators::report::{EstimateReport, LevelSummary};
use crate::levy::{LevyModel, WhFactorSampler};
use crate::rng::StreamPlan;
use crate::stats::Moments;

/// Floor applied to pilot variances before allocation.
pub const VARIANCE_FLOOR: f64 = 1e-12;

pub const DEFAULT_PILOT_SAMPLES: u64 = 1000;

/// Random-stream tags: production level `ℓ` uses `LEVEL_TAG + ℓ`, pilot
/// level `ℓ` uses `PILOT_TAG + ℓ`.
const LEVEL_TAG: u32 = 1;
const PILOT_TAG: u32 = 1 << 16;

/// `n_ℓ = 2^ℓ n0` for `ℓ = 0..=levels`, with `m[ℓ]` samples on level `ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSchedule {
    pub n0: usize,
    pub levels: usize,
    pub m: Vec<u64>,
}

impl LevelSchedule {
    pub fn new(n0: usize, m: Vec<u64>) -> Result<Self> {
        if n0 == 0 {
            return Err(WhmcError::Parameter("n0 must be >= 1".into()));
        }
        if m.is_empty() || m.contains(&0) {
            return Err(WhmcError::Parameter(
                "every level needs at least one sample".into(),
            ));
        }
        Ok(LevelSchedule {
            n0,
            levels: m.len() - 1,
            m,
        })
    }

    pub fn n_level(&self, level: usize) -> usize {
        self.n0 << level
    }
}

/// Pilot statistics per level: mean and variance of the level correction
/// and the average cost (walk steps) per sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PilotRun {
    pub n0: usize,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    pub costs: Vec<f64>,
}

/// Samples of level `ℓ`: `f(n0)` for `ℓ = 0`, else the coupled difference
/// `f(n_ℓ) - f(n_{ℓ-1})`.
#[allow(clippy::too_many_arguments)]
fn run_level(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    t: f64,
    n0: usize,
    level: usize,
    m: u64,
    truncation_n: usize,
    plan: &StreamPlan,
    tag: u32,
) -> Result<LevelSummary> {
    let full = functional.needs_full_horizon();
    let n_fine = n0 << level;
    let shards = if level == 0 {
        let grid = GridSpec::new(n0, t)?;
        let sampler = WhFactorSampler::new(model, grid.lambda(), truncation_n)?;
        sharded(plan, tag, m, |rng, count, offset| {
            let mut acc = Moments::default();
            let mut steps = 0;
            for i in 0..count {
                let trial = run_trial(&sampler, &grid, u, full, rng);
                steps += trial.steps;
                acc.push(check_finite(functional.evaluate(&trial), offset + i)?);
            }
            Ok((acc, steps))
        })?
    } else {
        let coupled = CoupledSampler::new(model, t, n_fine, truncation_n)?;
        sharded(plan, tag, m, |rng, count, offset| {
            let mut acc = Moments::default();
            let mut steps = 0;
            for i in 0..count {
                let pair = coupled.sample(u, full, rng);
                steps += pair.steps;
                let fine = check_finite(functional.evaluate(&pair.fine), offset + i)?;
                let coarse = check_finite(functional.evaluate(&pair.coarse), offset + i)?;
                acc.push(fine - coarse);
            }
            Ok((acc, steps))
        })?
    };
    let mut total = Moments::default();
    let mut steps = 0;
    for (acc, s) in &shards {
        total.merge(acc);
        steps += s;
    }
    let variance = if total.count >= 2 {
        total.variance()
    } else {
        0.0
    };
    Ok(LevelSummary {
        level,
        n_fine,
        samples: total.count,
        mean: total.mean(),
        variance,
        steps,
    })
}

fn check_inputs(u: f64, t: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(WhmcError::Parameter(format!(
            "horizon t must be > 0, got {t}"
        )));
    }
    Ok(())
}

/// Multilevel estimate `Σ_ℓ mean_ℓ` following `schedule`.
pub fn mlmc_estimate(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    t: f64,
    schedule: &LevelSchedule,
    truncation_n: usize,
    plan: &StreamPlan,
) -> Result<EstimateReport> {
    check_inputs(u, t)?;
    let levels = (0..=schedule.levels)
        .map(|l| {
            run_level(
                model,
                functional,
                u,
                t,
                schedule.n0,
                l,
                schedule.m[l],
                truncation_n,
                plan,
                LEVEL_TAG + l as u32,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport::from_levels(levels))
}

/// Pilot run over levels `0..=max_level` with `m` samples each.
#[allow(clippy::too_many_arguments)]
pub fn mlmc_pilot(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    t: f64,
    n0: usize,
    max_level: usize,
    m: u64,
    truncation_n: usize,
    plan: &StreamPlan,
) -> Result<PilotRun> {
    check_inputs(u, t)?;
    let mut pilot = PilotRun {
        n0,
        means: Vec::new(),
        variances: Vec::new(),
        costs: Vec::new(),
    };
    for l in 0..=max_level {
        let s = run_level(
            model,
            functional,
            u,
            t,
            n0,
            l,
            m,
            truncation_n,
            plan,
            PILOT_TAG + l as u32,
        )?;
        pilot.means.push(s.mean);
        pilot.variances.push(s.variance);
        pilot.costs.push(s.steps as f64 / s.samples as f64);
    }
    Ok(pilot)
}

/// Chooses the finest level and per-level sample counts for a target
/// standard error `ε`.
///
/// `L` is the first level `ℓ >= 1` whose correction satisfies
/// `|mean_ℓ| < ε/√2` (the last level if none does), and
/// `M_ℓ = ⌈(Σ_k √(V_k C_k)) √(V_ℓ/C_ℓ) / ε²⌉`.
pub fn mlmc_plan(
    n0: usize,
    level_means: &[f64],
    level_variances: &[f64],
    level_costs: &[f64],
    target_stderr: f64,
) -> Result<LevelSchedule> {
    let n = level_variances.len();
    if n == 0 || level_costs.len() != n || level_means.len() != n {
        return Err(WhmcError::Parameter(
            "pilot means, variances and costs must be non-empty and of equal length".into(),
        ));
    }
    if !(target_stderr > 0.0 && target_stderr.is_finite()) {
        return Err(WhmcError::Parameter(format!(
            "target standard error must be > 0, got {target_stderr}"
        )));
    }
    let bias_tol = target_stderr / std::f64::consts::SQRT_2;
    let last = (1..n)
        .find(|&l| level_means[l].abs() < bias_tol)
        .unwrap_or(n - 1);
    let v: Vec<f64> = level_variances[..=last]
        .iter()
        .map(|&x| {
            if x > VARIANCE_FLOOR {
                x
            } else {
                VARIANCE_FLOOR
            }
        })
        .collect();
    let c: Vec<f64> = level_costs[..=last].iter().map(|&x| x.max(1.0)).collect();
    let root_sum: f64 = v.iter().zip(&c).map(|(v, c)| (v * c).sqrt()).sum();
    let eps2 = target_stderr * target_stderr;
    let m = v
        .iter()
        .zip(&c)
        .map(|(v, c)| ((root_sum * (v / c).sqrt() / eps2).ceil() as u64).max(1))
        .collect();
    LevelSchedule::new(n0, m)
}

/// Pilot, plan and production run in one call.
#[allow(clippy::too_many_arguments)]
pub fn mlmc_auto(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    t: f64,
    n0: usize,
    max_level: usize,
    target_stderr: f64,
    pilot_m: u64,
    truncation_n: usize,
    plan: &StreamPlan,
) -> Result<(PilotRun, LevelSchedule, EstimateReport)> {
    let pilot = mlmc_pilot(
        model,
        functional,
        u,
        t,
        n0,
        max_level,
        pilot_m,
        truncation_n,
        plan,
    )?;
    let schedule = mlmc_plan(
        n0,
        &pilot.means,
        &pilot.variances,
        &pilot.costs,
        target_stderr,
    )?;
    let report = mlmc_estimate(model, functional, u, t, &schedule, truncation_n, plan)?;
    Ok((pilot, schedule, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::mc::mc_estimate_with;

    #[test]
    fn plan_single_level() {
        let s = mlmc_plan(4, &[0.3], &[1.0], &[1.0], 0.1).unwrap();
        assert_eq!(s.m, vec![100]);
        assert_eq!(s.levels, 0);
    }

    #[test]
    fn plan_symmetric_two_levels() {
        let eps = 0.05;
        let s = mlmc_plan(4, &[0.3, 0.0], &[2.0, 2.0], &[3.0, 3.0], eps).unwrap();
        let expected = (2.0 * 2.0 / (eps * eps)).ceil() as u64;
        assert_eq!(s.m, vec![expected, expected]);
    }

    #[test]
    fn plan_floors_degenerate_variance() {
        let s = mlmc_plan(1, &[1.0, 0.0], &[1.0, 0.0], &[1.0, 2.0], 0.1).unwrap();
        assert_eq!(s.m.len(), 2);
        assert!(s.m[1] >= 1);
    }

    #[test]
    fn plan_stops_at_first_small_correction() {
        let s = mlmc_plan(
            1,
            &[0.5, 0.2, 0.001, 0.0005],
            &[1.0, 0.5, 0.25, 0.125],
            &[1.0, 2.0, 4.0, 8.0],
            0.01,
        )
        .unwrap();
        assert_eq!(s.levels, 2);
        // halving variance with doubling cost halves the sample count
        assert!((s.m[0] as f64 / s.m[1] as f64 - 2.0).abs() < 0.01);
    }

    #[test]
    fn single_level_matches_plain_monte_carlo() {
        let m = LevyModel::standard_brownian();
        let plan = StreamPlan::new(9, 2);
        let schedule = LevelSchedule::new(16, vec![500]).unwrap();
        let ml = mlmc_estimate(
            &m,
            &Functional::FirstPassageTime,
            0.5,
            1.0,
            &schedule,
            0,
            &plan,
        )
        .unwrap();
        let grid = GridSpec::new(16, 1.0).unwrap();
        let sampler = WhFactorSampler::new(&m, 16.0, 0).unwrap();
        let mc = mc_estimate_with(
            &sampler,
            &Functional::FirstPassageTime,
            0.5,
            &grid,
            500,
            &plan,
            LEVEL_TAG,
        )
        .unwrap();
        assert_eq!(ml.value, mc.value);
        assert_eq!(ml.steps_consumed, mc.steps_consumed);
    }
}
