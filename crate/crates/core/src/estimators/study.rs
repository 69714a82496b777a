use serde::Serialize;

use crate::engine::{FourTuple, GridSpec};
use crate::error::{Result, WhmcError};
use crate::estimators::coupling::CoupledSampler;
use crate::estimators::functional::gerber_shiu_value;
use crate::estimators::mc::{mc_estimate_with, sharded};
use crate::estimators::report::EstimateReport;
use crate::levy::{LevyModel, WhFactorSampler};
use crate::rng::StreamPlan;
use crate::stats::{fit_slope, Moments};

pub const COORDINATES: [&str; 4] = ["time", "overshoot", "undershoot", "gap_to_max"];

fn coordinates(t: &FourTuple) -> [f64; 4] {
    [t.time, t.overshoot, t.undershoot, t.gap_to_max]
}

/// One level of the consecutive-level study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub level: u32,
    pub n_fine: usize,
    pub samples: u64,
    /// `E[(c^{n_ℓ} - c^{n_{ℓ-1}})²]` per coordinate, in [`COORDINATES`] order.
    pub mse: [f64; 4],
    /// Standard error of each entry; NaN when it cannot be estimated (M = 1).
    pub mse_std_error: [f64; 4],
}

impl RateRow {
    pub fn std_error_defined(&self) -> bool {
        self.mse_std_error.iter().all(|s| s.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateStudy {
    pub rows: Vec<RateRow>,
    /// Fitted slope of `log2 mse` against `ℓ`; `None` with fewer than two
    /// levels or a zero MSE.
    pub slopes: [Option<f64>; 4],
}

/// Consecutive-level mean squared differences of the four tuple
/// coordinates with `n_ℓ = 2^ℓ`, using `m` coupled pairs per level.
#[allow(clippy::too_many_arguments)]
pub fn level_mse_study(
    model: &LevyModel,
    u: f64,
    t: f64,
    levels: std::ops::RangeInclusive<u32>,
    m: u64,
    truncation_n: usize,
    plan: &StreamPlan,
) -> Result<RateStudy> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(WhmcError::Domain(format!("barrier u must be > 0, got {u}")));
    }
    if *levels.start() == 0 || levels.is_empty() {
        return Err(WhmcError::Parameter(
            "levels must be a non-empty range starting at >= 1".into(),
        ));
    }
    if m == 0 {
        return Err(WhmcError::Parameter(
            "need at least one sample per level".into(),
        ));
    }
    let mut rows = Vec::new();
    for level in levels {
        let n_fine = 1usize << level;
        let coupled = CoupledSampler::new(model, t, n_fine, truncation_n)?;
        let shards = sharded(plan, level, m, |rng, count, _| {
            let mut acc = [Moments::default(); 4];
            for _ in 0..count {
                let pair = coupled.sample(u, false, rng);
                let f = coordinates(&pair.fine.tuple);
                let c = coordinates(&pair.coarse.tuple);
                for k in 0..4 {
                    acc[k].push((f[k] - c[k]).powi(2));
                }
            }
            Ok(acc)
        })?;
        let mut acc = [Moments::default(); 4];
        for shard in &shards {
            for k in 0..4 {
                acc[k].merge(&shard[k]);
            }
        }
        rows.push(RateRow {
            level,
            n_fine,
            samples: m,
            mse: acc.map(|a| a.mean()),
            mse_std_error: acc.map(|a| {
                if a.count >= 2 {
                    a.std_error()
                } else {
                    f64::NAN
                }
            }),
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.level as f64).collect();
    let slopes = std::array::from_fn(|k| {
        if rows.iter().any(|r| r.mse[k].is_nan() || r.mse[k] <= 0.0) {
            return None;
        }
        let y: Vec<f64> = rows.iter().map(|r| r.mse[k].log2()).collect();
        fit_slope(&x, &y)
    });
    Ok(RateStudy { rows, slopes })
}

/// `v(u, y, q)` estimates for each step count in `ns`.
#[allow(clippy::too_many_arguments)]
pub fn gerber_shiu_sweep(
    model: &LevyModel,
    u: f64,
    y: f64,
    q: f64,
    t: f64,
    ns: &[usize],
    m: u64,
    truncation_n: usize,
    plan: &StreamPlan,
) -> Result<Vec<(usize, EstimateReport)>> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(WhmcError::Parameter(format!(
            "discount rate q must be > 0, got {q}"
        )));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(WhmcError::Parameter(format!(
            "overshoot threshold y must be > 0, got {y}"
        )));
    }
    let functional =
        crate::estimators::functional::Functional::tuple(move |tup| gerber_shiu_value(tup, q, y));
    ns.iter()
        .enumerate()
        .map(|(i, &n)| {
            let grid = GridSpec::new(n, t)?;
            let sampler = WhFactorSampler::new(model, grid.lambda(), truncation_n)?;
            let r = mc_estimate_with(&sampler, &functional, u, &grid, m, plan, i as u32)?;
            Ok((n, r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_rows_flag_undefined_error() {
        let s = level_mse_study(
            &LevyModel::standard_brownian(),
            0.5,
            1.0,
            3..=4,
            1,
            0,
            &StreamPlan::new(1, 1),
        )
        .unwrap();
        assert_eq!(s.rows.len(), 2);
        assert!(s.rows.iter().all(|r| !r.std_error_defined()));
        assert!(s.rows.iter().all(|r| r.mse.iter().all(|x| x.is_finite())));
    }

    #[test]
    fn single_level_has_no_slope() {
        let s = level_mse_study(
            &LevyModel::standard_brownian(),
            0.5,
            1.0,
            4..=4,
            200,
            0,
            &StreamPlan::new(1, 2),
        )
        .unwrap();
        assert_eq!(s.slopes, [None; 4]);
    }

    #[test]
    fn first_passage_mse_respects_bound_for_brownian_motion() {
        let t = 1.0;
        let s = level_mse_study(
            &LevyModel::standard_brownian(),
            0.5,
            t,
            3..=7,
            4000,
            0,
            &StreamPlan::new(3, 4),
        )
        .unwrap();
        for r in &s.rows {
            assert!(r.mse[0] <= 12.0 * t * t / r.n_fine as f64, "{r:?}");
        }
        let slope = s.slopes[0].unwrap();
        assert!((-1.3..=-0.7).contains(&slope), "slope {slope}");
    }

    #[test]
    fn sweep_rejects_bad_discount() {
        let r = gerber_shiu_sweep(
            &LevyModel::standard_brownian(),
            0.1,
            0.05,
            0.0,
            10.0,
            &[16],
            10,
            0,
            &StreamPlan::new(1, 1),
        );
        assert!(r.is_err());
    }
}
