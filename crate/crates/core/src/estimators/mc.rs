use rayon::prelude::*;

use crate::engine::passage::run_trial;
use crate::engine::path::check_rate;
use crate::engine::{GridSpec, Trial};
use crate::error::{Result, WhmcError};
use crate::estimators::functional::Functional;
use crate::estimators::report::EstimateReport;
use crate::levy::{LevyModel, WhFactorSampler, DEFAULT_TRUNCATION};
use crate::rng::{shard_sizes, StreamPlan, WhmcRng};
use crate::stats::Moments;

/// Runs `body(worker, rng, count, first_trial_index)` on every shard in
/// parallel and returns the results in worker order.
pub(crate) fn sharded<T, F>(plan: &StreamPlan, tag: u32, total: u64, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut WhmcRng, u64, u64) -> Result<T> + Sync,
{
    let sizes = shard_sizes(total, plan.workers);
    let offsets: Vec<u64> = sizes
        .iter()
        .scan(0u64, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect();
    (0..sizes.len())
        .into_par_iter()
        .map(|w| {
            let mut rng = plan.rng(tag, w);
            body(&mut rng, sizes[w], offsets[w])
        })
        .collect()
}

pub(crate) fn check_finite(value: f64, trial: u64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(WhmcError::NonFinite { trial, value })
    }
}

/// Plain Monte Carlo with a prepared sampler. `tag` selects the random
/// substreams (see [`crate::rng`]).
pub fn mc_estimate_with(
    sampler: &WhFactorSampler,
    functional: &Functional,
    u: f64,
    grid: &GridSpec,
    m: u64,
    plan: &StreamPlan,
    tag: u32,
) -> Result<EstimateReport> {
    check_rate(sampler, grid)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    if m < 2 {
        return Err(WhmcError::Parameter(format!(
            "need at least 2 samples, got {m}"
        )));
    }
    let full = functional.needs_full_horizon();
    let shards = sharded(plan, tag, m, |rng, count, offset| {
        let mut acc = Moments::default();
        let mut steps = 0u64;
        for i in 0..count {
            let trial = run_trial(sampler, grid, u, full, rng);
            steps += trial.steps;
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

/// Plain Monte Carlo estimate of `E[f]` over `m` independent trials at `grid.n`
/// steps, building the factor sampler with the default truncation.
pub fn mc_estimate(
    model: &LevyModel,
    functional: &Functional,
    u: f64,
    grid: &GridSpec,
    m: u64,
    plan: &StreamPlan,
) -> Result<EstimateReport> {
    let sampler = WhFactorSampler::new(model, grid.lambda(), DEFAULT_TRUNCATION)?;
    mc_estimate_with(&sampler, functional, u, grid, m, plan, 0)
}

/// Raw trials in worker order, for diagnostics and distribution tests.
pub fn sample_trials(
    sampler: &WhFactorSampler,
    grid: &GridSpec,
    u: f64,
    full_horizon: bool,
    m: u64,
    plan: &StreamPlan,
    tag: u32,
) -> Result<Vec<Trial>> {
    check_rate(sampler, grid)?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    let shards = sharded(plan, tag, m, |rng, count, _| {
        Ok((0..count)
            .map(|_| run_trial(sampler, grid, u, full_horizon, rng))
            .collect::<Vec<_>>())
    })?;
    Ok(shards.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::BetaFamilyParams;

    #[test]
    fn constant_functional_has_zero_error() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let f = Functional::tuple(|_| 1.0);
        let r = mc_estimate(
            &LevyModel::standard_brownian(),
            &f,
            1.0,
            &g,
            100,
            &StreamPlan::new(1, 3),
        )
        .unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.std_error, 0.0);
        assert_eq!(r.samples, vec![100]);
    }

    #[test]
    fn non_finite_values_are_reported_with_trial_index() {
        let g = GridSpec::new(4, 1.0).unwrap();
        let f = Functional::tuple(|t| if t.crossed { f64::NAN } else { 0.0 });
        let err = mc_estimate(
            &LevyModel::standard_brownian(),
            &f,
            0.01,
            &g,
            50,
            &StreamPlan::new(1, 2),
        )
        .unwrap_err();
        assert!(matches!(err, WhmcError::NonFinite { .. }));
    }

    #[test]
    fn too_few_samples() {
        let g = GridSpec::new(4, 1.0).unwrap();
        let r = mc_estimate(
            &LevyModel::standard_brownian(),
            &Functional::FirstPassageTime,
            1.0,
            &g,
            1,
            &StreamPlan::new(1, 1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn reproducible_for_fixed_seed_and_workers() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        let g = GridSpec::new(32, 1.0).unwrap();
        let plan = StreamPlan::new(42, 4);
        let a = mc_estimate(&m, &Functional::FirstPassageTime, 1.0, &g, 2000, &plan).unwrap();
        let b = mc_estimate(&m, &Functional::FirstPassageTime, 1.0, &g, 2000, &plan).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn std_error_halves_when_samples_quadruple() {
        let m = LevyModel::standard_brownian();
        let g = GridSpec::new(16, 1.0).unwrap();
        let funcs = [
            Functional::FirstPassageTime,
            Functional::IndicatorCdf { s: 0.5 },
            Functional::DiscountedOvershootIndicator { q: 1.0, y: 0.3 },
        ];
        for f in &funcs {
            let a = mc_estimate(&m, f, 0.5, &g, 20_000, &StreamPlan::new(3, 2)).unwrap();
            let b = mc_estimate(&m, f, 0.5, &g, 80_000, &StreamPlan::new(4, 2)).unwrap();
            let ratio = a.std_error / b.std_error;
            assert!((ratio - 2.0).abs() < 0.4, "{f:?}: ratio {ratio}");
        }
    }
}
