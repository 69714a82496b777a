use serde::Serialize;
use serde_json::{json, Value};

use crate::baselines::{
    analytic_cdf_table, bm_fptime_cdf, bm_plain_mc_estimate, bm_plain_mc_fptime_cdf, uniform_grid,
    whmc_bm_fptime_cdf, CdfTable,
};
use crate::cli::config::{RunConfig, SampleSpec, SCHEMA_VERSION};
use crate::cli::output::{Artifact, Cell, Table};
use crate::engine::GridSpec;
use crate::error::{Result, WhmcError};
use crate::estimators::mlmc::DEFAULT_PILOT_SAMPLES;
use crate::estimators::{
    gerber_shiu_sweep, level_mse_study, mc_estimate_with, mlmc_auto, mlmc_estimate, EstimateReport,
    LevelSchedule, RateStudy, COORDINATES,
};
use crate::levy::{LevyModel, WhFactorSampler};

/// Stream tag of the pilot run that sizes a fixed-target plain/WHMC estimate.
const PILOT_TAG: u32 = 1 << 17;

/// A command's typed result together with its file artifact.
#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub result: T,
    pub artifact: Artifact,
}

fn prune_nulls(v: &mut Value) {
    if let Value::Object(map) = v {
        map.retain(|_, x| !x.is_null());
        map.values_mut().for_each(prune_nulls);
    }
}

fn envelope(command: &str, config: &RunConfig, result: Value) -> Value {
    // the output block is left out so --out does not change the artifact
    let mut echo = json!({
        "model": config.model,
        "functional": config.functional,
        "method": config.method,
        "rng": config.rng,
    });
    prune_nulls(&mut echo);
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": echo,
        "result": result,
    })
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| WhmcError::Io(e.to_string()))
}

/// Trials needed for standard error `target`, given a pilot report.
fn samples_for_target(pilot: &EstimateReport, target: f64) -> u64 {
    let m0 = pilot.samples.iter().sum::<u64>() as f64;
    let var = pilot.std_error * pilot.std_error * m0;
    ((var / (target * target)).ceil() as u64).max(2)
}

const ESTIMATE_HEADER: [&str; 9] = [
    "method",
    "n",
    "value",
    "std_error",
    "ci95_low",
    "ci95_high",
    "samples",
    "steps_consumed",
    "levels",
];

pub fn cmd_estimate(config: &RunConfig) -> Result<Outcome<EstimateReport>> {
    let model = config.model()?;
    let functional = config.functional()?;
    let u = config.barrier()?;
    let t = config.horizon()?;
    let plan = config.stream_plan()?;
    let kind = config.method_kind()?.to_string();

    let (report, n_finest) = match kind.as_str() {
        "plain" => {
            if !matches!(model, LevyModel::BrownianMotion { .. }) {
                return Err(WhmcError::config(
                    "method.kind",
                    "plain Monte Carlo needs Gaussian increments; use whmc or mlmc for beta_family",
                ));
            }
            let n = config.steps()?;
            let m = match config.sample_spec()? {
                SampleSpec::Fixed(m) => m,
                SampleSpec::Target(eps) => {
                    let pilot = bm_plain_mc_estimate(
                        &model,
                        &functional,
                        u,
                        t,
                        n,
                        DEFAULT_PILOT_SAMPLES,
                        &plan,
                        PILOT_TAG,
                    )?;
                    samples_for_target(&pilot, eps)
                }
            };
            (
                bm_plain_mc_estimate(&model, &functional, u, t, n, m, &plan, 0)?,
                n,
            )
        }
        "whmc" => {
            let n = config.steps()?;
            let grid = GridSpec::new(n, t)?;
            let sampler = WhFactorSampler::new(&model, grid.lambda(), config.truncation()?)?;
            let m = match config.sample_spec()? {
                SampleSpec::Fixed(m) => m,
                SampleSpec::Target(eps) => {
                    let pilot = mc_estimate_with(
                        &sampler,
                        &functional,
                        u,
                        &grid,
                        DEFAULT_PILOT_SAMPLES,
                        &plan,
                        PILOT_TAG,
                    )?;
                    samples_for_target(&pilot, eps)
                }
            };
            (
                mc_estimate_with(&sampler, &functional, u, &grid, m, &plan, 0)?,
                n,
            )
        }
        "mlmc" => {
            let b = config.method_block()?;
            let trunc = config.truncation()?;
            if let Some(s) = &b.schedule {
                let n0 = s.n0.ok_or_else(|| {
                    WhmcError::config("method.schedule.n0", "missing required value")
                })?;
                let m = s.m.clone().ok_or_else(|| {
                    WhmcError::config("method.schedule.m", "missing required value")
                })?;
                let schedule = LevelSchedule::new(n0, m)
                    .map_err(|e| WhmcError::config("method.schedule", e.to_string()))?;
                let r = mlmc_estimate(&model, &functional, u, t, &schedule, trunc, &plan)?;
                (r, schedule.n_level(schedule.levels))
            } else {
                if b.target_stderr.is_none() {
                    return Err(WhmcError::config(
                        "method.schedule",
                        "mlmc needs a schedule or target_stderr",
                    ));
                }
                let eps = config.target_stderr()?;
                let n0 =
                    b.n0.ok_or_else(|| WhmcError::config("method.n0", "missing required value"))?;
                if n0 == 0 {
                    return Err(WhmcError::config("method.n0", "must be >= 1"));
                }
                let max_level = b.max_level.ok_or_else(|| {
                    WhmcError::config("method.max_level", "missing required value")
                })?;
                if max_level > 30 {
                    return Err(WhmcError::config("method.max_level", "must be <= 30"));
                }
                let pilot_m = b.pilot_m.unwrap_or(DEFAULT_PILOT_SAMPLES);
                if pilot_m < 2 {
                    return Err(WhmcError::config("method.pilot_m", "must be >= 2"));
                }
                let (_, schedule, r) = mlmc_auto(
                    &model,
                    &functional,
                    u,
                    t,
                    n0,
                    max_level,
                    eps,
                    pilot_m,
                    trunc,
                    &plan,
                )?;
                (r, schedule.n_level(schedule.levels))
            }
        }
        other => {
            return Err(WhmcError::config(
                "method.kind",
                format!("unknown method `{other}` (expected plain, whmc or mlmc)"),
            ))
        }
    };

    let mut table = Table::new(&ESTIMATE_HEADER);
    table.push(vec![
        Cell::Text(kind.clone()),
        n_finest.into(),
        report.value.into(),
        report.std_error.into(),
        report.ci95.0.into(),
        report.ci95.1.into(),
        report.samples.iter().sum::<u64>().into(),
        report.steps_consumed.into(),
        report.samples.len().into(),
    ]);
    let json = envelope("estimate", config, to_value(&report)?);
    Ok(Outcome {
        result: report,
        artifact: Artifact { table, json },
    })
}

/// Analytic, plain and WHMC first-passage cdfs on the grid `t k / n`.
#[derive(Debug, Clone, Serialize)]
pub struct FptimeCdf {
    pub analytic: CdfTable,
    pub plain: CdfTable,
    pub whmc: CdfTable,
    pub plain_step: f64,
    pub sup_error_plain: f64,
    pub sup_error_whmc: f64,
}

/// Plain Monte Carlo runs `2n` Gaussian steps, matching the two factor
/// draws per WHMC step.
pub fn cmd_fptime_cdf(config: &RunConfig) -> Result<Outcome<FptimeCdf>> {
    let model = config.model()?;
    if model != LevyModel::standard_brownian() {
        return Err(WhmcError::config(
            "model",
            "fptime-cdf compares against the closed form for standard Brownian motion \
             (drift 0, volatility 1)",
        ));
    }
    let u = config.barrier()?;
    let t = config.horizon()?;
    let n = config.steps()?;
    let m = config.samples()?;
    let plan = config.stream_plan()?;

    let grid = uniform_grid(t, n);
    let analytic =
        analytic_cdf_table(u, &grid).map_err(|e| WhmcError::config("method.n", e.to_string()))?;
    let plain_step = t / (2 * n) as f64;
    let plain = bm_plain_mc_fptime_cdf(u, t, plain_step, m, &plan)?;
    let whmc = whmc_bm_fptime_cdf(u, t, n, m, &plan)?;
    let exact = |s: f64| bm_fptime_cdf(u, s).unwrap_or(f64::NAN);
    let sup_error_plain = plain.sup_error(&grid, exact);
    let sup_error_whmc = whmc.sup_error(&grid, exact);

    let mut table = Table::new(&[
        "s",
        "analytic",
        "plain",
        "whmc",
        "plain_abs_error",
        "whmc_abs_error",
    ]);
    for (i, &s) in grid.iter().enumerate() {
        let a = analytic.values[i];
        let p = plain.value_at(s);
        let w = whmc.value_at(s);
        table.push(vec![
            s.into(),
            a.into(),
            p.into(),
            w.into(),
            (p - a).abs().into(),
            (w - a).abs().into(),
        ]);
    }
    let result = FptimeCdf {
        analytic,
        plain,
        whmc,
        plain_step,
        sup_error_plain,
        sup_error_whmc,
    };
    let json = envelope("fptime-cdf", config, to_value(&result)?);
    Ok(Outcome {
        result,
        artifact: Artifact { table, json },
    })
}

pub fn cmd_rate_study(config: &RunConfig) -> Result<Outcome<RateStudy>> {
    let model = config.model()?;
    let u = config.barrier()?;
    let t = config.horizon()?;
    let (lo, hi) = config.level_range()?;
    if lo == 0 {
        return Err(WhmcError::config(
            "method.levels",
            "coupled levels start at 1",
        ));
    }
    let m = req_samples(config)?;
    let trunc = config.truncation()?;
    let plan = config.stream_plan()?;
    let study = level_mse_study(&model, u, t, lo..=hi, m, trunc, &plan)?;

    let mut header = vec!["level".to_string(), "n_fine".into(), "samples".into()];
    for prefix in ["mse", "mse_std_error", "slope"] {
        header.extend(COORDINATES.iter().map(|c| format!("{prefix}_{c}")));
    }
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for r in &study.rows {
        let mut row: Vec<Cell> = vec![u64::from(r.level).into(), r.n_fine.into(), r.samples.into()];
        row.extend(r.mse.iter().map(|&x| Cell::from(x)));
        row.extend(r.mse_std_error.iter().map(|&x| {
            if x.is_finite() {
                Cell::Float(x)
            } else {
                Cell::Absent
            }
        }));
        row.extend(study.slopes.iter().map(|&s| Cell::from(s)));
        table.push(row);
    }
    let json = envelope("rate-study", config, to_value(&study)?);
    Ok(Outcome {
        result: study,
        artifact: Artifact { table, json },
    })
}

fn req_samples(config: &RunConfig) -> Result<u64> {
    let m = config.method_block()?.m;
    match m {
        Some(0) => Err(WhmcError::config("method.m", "must be >= 1")),
        Some(m) => Ok(m),
        None => Err(WhmcError::config("method.m", "missing required value")),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub n: usize,
    pub report: EstimateReport,
}

pub fn cmd_gerber_shiu(config: &RunConfig) -> Result<Outcome<Vec<SweepPoint>>> {
    let model = config.model()?;
    let u = config.barrier()?;
    let t = config.horizon()?;
    let q = config.discount()?;
    let y = config.overshoot_level()?;
    let (lo, hi) = config.level_range()?;
    let m = config.samples()?;
    let trunc = config.truncation()?;
    let plan = config.stream_plan()?;
    let ns: Vec<usize> = (lo..=hi).map(|k| 1usize << k).collect();
    let points: Vec<SweepPoint> = gerber_shiu_sweep(&model, u, y, q, t, &ns, m, trunc, &plan)?
        .into_iter()
        .map(|(n, report)| SweepPoint { n, report })
        .collect();

    let mut table = Table::new(&[
        "n",
        "value",
        "std_error",
        "ci95_low",
        "ci95_high",
        "samples",
        "steps_consumed",
    ]);
    for p in &points {
        let r = &p.report;
        table.push(vec![
            p.n.into(),
            r.value.into(),
            r.std_error.into(),
            r.ci95.0.into(),
            r.ci95.1.into(),
            r.samples.iter().sum::<u64>().into(),
            r.steps_consumed.into(),
        ]);
    }
    let json = envelope("gerber-shiu", config, to_value(&points)?);
    Ok(Outcome {
        result: points,
        artifact: Artifact { table, json },
    })
}
