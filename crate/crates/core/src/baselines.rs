//! Brownian-motion references for first-passage cdfs: the closed form, a
//! plain Gaussian random walk and the WHMC walk with exact exponential
//! factors.

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::engine::passage::run_trial;
use crate::engine::{GridSpec, PassageTracker, Trial};
use crate::error::{Result, WhmcError};
use crate::estimators::mc::{check_finite, sharded};
use crate::estimators::{EstimateReport, Functional};
use crate::levy::{LevyModel, WhFactorSampler};
use crate::rng::StreamPlan;
use crate::stats::{normal_cdf, Moments};

/// Absolute slack when comparing simulated times to table grid points.
const TIME_EPS: f64 = 1e-9;

/// `P(τ_u ≤ s) = 2(1 - Φ(u/√s))` for standard Brownian motion.
///
/// This is the normalization whose Laplace transform is `e^{-u√(2q)}`,
/// matching the `Exp(√(2q))` supremum at an independent `Exp(q)` time.
pub fn bm_fptime_cdf(u: f64, s: f64) -> Result<f64> {
    if !(u > 0.0 && s > 0.0) {
        return Err(WhmcError::Domain(format!(
            "first-passage cdf needs u > 0 and s > 0, got u = {u}, s = {s}"
        )));
    }
    if s.is_infinite() {
        return Ok(1.0);
    }
    Ok(2.0 * (1.0 - normal_cdf(u / s.sqrt())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfMeta {
    pub u: f64,
    pub method: String,
    /// Step count `n` for WHMC, step size `h` for plain Monte Carlo; absent
    /// for the analytic table.
    pub resolution: Option<f64>,
    pub samples: Option<u64>,
}

/// Cdf values `P(τ_u ≤ grid[i])` on an ascending time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfTable {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: CdfMeta,
}

impl CdfTable {
    fn from_times(mut times: Vec<f64>, m: u64, grid: Vec<f64>, meta: CdfMeta) -> Self {
        times.sort_by(f64::total_cmp);
        let mut values = Vec::with_capacity(grid.len());
        let mut idx = 0;
        for &s in &grid {
            while idx < times.len() && times[idx] <= s + TIME_EPS {
                idx += 1;
            }
            values.push(idx as f64 / m as f64);
        }
        CdfTable { grid, values, meta }
    }

    /// Right-continuous step interpolation; 0 before the first grid point.
    pub fn value_at(&self, s: f64) -> f64 {
        let k = self.grid.partition_point(|&g| g <= s + TIME_EPS);
        if k == 0 {
            0.0
        } else {
            self.values[k - 1]
        }
    }

    /// `max_i |F(grid_i) - reference(grid_i)|` over `points`.
    pub fn sup_error(&self, points: &[f64], reference: impl Fn(f64) -> f64) -> f64 {
        points
            .iter()
            .map(|&s| (self.value_at(s) - reference(s)).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
            && self.values.iter().all(|v| (0.0..=1.0).contains(v))
    }
}

pub fn analytic_cdf_table(u: f64, grid: &[f64]) -> Result<CdfTable> {
    if grid.is_empty() {
        return Err(WhmcError::Parameter("empty time grid".into()));
    }
    let values = grid
        .iter()
        .map(|&s| bm_fptime_cdf(u, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(CdfTable {
        grid: grid.to_vec(),
        values,
        meta: CdfMeta {
            u,
            method: "analytic".into(),
            resolution: None,
            samples: None,
        },
    })
}

/// Multiples `t k / n`, `k = 1..=n`.
pub fn uniform_grid(t: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| t * k as f64 / n as f64).collect()
}

/// Empirical cdf of the first time a Gaussian random walk with `N(0, h)`
/// increments strictly exceeds `u`, monitored at multiples of `h` up to `t`.
pub fn bm_plain_mc_fptime_cdf(
    u: f64,
    t: f64,
    h: f64,
    m: u64,
    plan: &StreamPlan,
) -> Result<CdfTable> {
    if !(h > 0.0 && h.is_finite() && t > 0.0 && u > 0.0) {
        return Err(WhmcError::Parameter(format!(
            "plain Monte Carlo needs u, t, h > 0, got u = {u}, t = {t}, h = {h}"
        )));
    }
    if m == 0 {
        return Err(WhmcError::Parameter("need at least one sample".into()));
    }
    let steps = (t / h + 1e-9).floor() as usize;
    let sd = h.sqrt();
    let shards = sharded(plan, 0, m, |rng, count, _| {
        let mut times = Vec::new();
        for _ in 0..count {
            let mut x = 0.0;
            for k in 1..=steps {
                let z: f64 = StandardNormal.sample(rng);
                x += sd * z;
                if x > u {
                    times.push(k as f64 * h);
                    break;
                }
            }
        }
        Ok(times)
    })?;
    let grid: Vec<f64> = (1..=steps).map(|k| k as f64 * h).collect();
    Ok(CdfTable::from_times(
        shards.into_iter().flatten().collect(),
        m,
        grid,
        CdfMeta {
            u,
            method: "plain".into(),
            resolution: Some(h),
            samples: Some(m),
        },
    ))
}

/// Empirical cdf of the WHMC first-passage time for standard Brownian
/// motion with `n` steps over `[0, t]`. Uncrossed trials add no mass.
pub fn whmc_bm_fptime_cdf(u: f64, t: f64, n: usize, m: u64, plan: &StreamPlan) -> Result<CdfTable> {
    if u.is_nan() || u <= 0.0 {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    if m == 0 {
        return Err(WhmcError::Parameter("need at least one sample".into()));
    }
    let grid = GridSpec::new(n, t)?;
    let sampler = WhFactorSampler::new(&LevyModel::standard_brownian(), grid.lambda(), 0)?;
    let shards = sharded(plan, 0, m, |rng, count, _| {
        let mut times = Vec::new();
        for _ in 0..count {
            let trial = run_trial(&sampler, &grid, u, false, rng);
            if trial.tuple.crossed {
                times.push(trial.tuple.time);
            }
        }
        Ok(times)
    })?;
    Ok(CdfTable::from_times(
        shards.into_iter().flatten().collect(),
        m,
        uniform_grid(t, n),
        CdfMeta {
            u,
            method: "whmc".into(),
            resolution: Some(n as f64),
            samples: Some(m),
        },
    ))
}

/// Plain Monte Carlo on a Gaussian random walk with `n` steps of size
/// `t/n`, for Brownian motion with the given drift and volatility. The
/// 4-tuple is read off the walk exactly like the WHMC walk.
#[allow(clippy::too_many_arguments)]
pub fn bm_plain_mc_estimate(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    t: f64,
    n: usize,
    m: u64,
    plan: &StreamPlan,
    tag: u32,
) -> Result<EstimateReport> {
    let (drift, vol) = match *model {
        LevyModel::BrownianMotion { drift, volatility } => (drift, volatility),
        LevyModel::BetaFamily { .. } => {
            return Err(WhmcError::Parameter(
                "plain Monte Carlo needs Gaussian increments (brownian_motion only)".into(),
            ))
        }
    };
    model.validate()?;
    let grid = GridSpec::new(n, t)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    if m < 2 {
        return Err(WhmcError::Parameter(format!(
            "need at least 2 samples, got {m}"
        )));
    }
    let h = t / n as f64;
    let (mean, sd) = (drift * h, vol * h.sqrt());
    let full = functional.needs_full_horizon();
    let shards = sharded(plan, tag, m, |rng, count, offset| {
        let mut acc = Moments::default();
        let mut steps = 0u64;
        for i in 0..count {
            let mut tracker = PassageTracker::new(u, grid.n);
            let (mut x, mut max) = (0.0f64, 0.0f64);
            let mut used = 0u64;
            for _ in 0..grid.n {
                let z: f64 = StandardNormal.sample(rng);
                x += mean + sd * z;
                max = max.max(x);
                used += 1;
                tracker.push(x, max);
                if tracker.is_done() && !full {
                    break;
                }
            }
            steps += used;
            let trial = Trial {
                tuple: tracker.finish(grid.t),
                terminal: (x, max),
                steps: used,
            };
            acc.push(check_finite(functional.evaluate(&trial), offset + i)?);
        }
        Ok((acc, steps))
    })?;
    let mut total = Moments::default();
    let mut steps = 0;
    for (acc, s) in &shards {
        total.merge(acc);
        steps += s;
    }
    Ok(EstimateReport::from_moments(&total, steps))
}
