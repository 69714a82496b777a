//! Run configuration: one JSON document with `model`, `functional`,
//! `method`, `rng` and `output` blocks.
//!
//! Every block is parsed permissively (all fields optional) and then
//! resolved per command, so a missing or bad value is reported with its
//! dotted path, e.g. `functional.u`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Result, WhmcError};
use crate::estimators::Functional;
use crate::levy::{BetaFamilyParams, LevyModel, DEFAULT_TRUNCATION};
use crate::rng::StreamPlan;

/// Version tag written into JSON artifacts; bump on any schema change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<ModelBlock>,
    pub functional: Option<FunctionalBlock>,
    pub method: Option<MethodBlock>,
    pub rng: Option<RngBlock>,
    pub output: Option<OutputBlock>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    /// `brownian_motion` or `beta_family`.
    pub variant: Option<String>,
    pub drift: Option<f64>,
    pub volatility: Option<f64>,
    pub c1: Option<f64>,
    pub alpha1: Option<f64>,
    pub beta1: Option<f64>,
    pub lambda1: Option<f64>,
    pub c2: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta2: Option<f64>,
    pub lambda2: Option<f64>,
    pub sigma: Option<f64>,
    pub a: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalBlock {
    /// `first_passage_time`, `indicator_cdf` or `discounted_overshoot_indicator`.
    pub kind: Option<String>,
    pub u: Option<f64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub y: Option<f64>,
    pub q: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleBlock {
    pub n0: Option<usize>,
    pub m: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodBlock {
    /// `plain`, `whmc` or `mlmc`.
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub m: Option<u64>,
    pub target_stderr: Option<f64>,
    pub schedule: Option<ScheduleBlock>,
    pub n0: Option<usize>,
    pub max_level: Option<usize>,
    pub pilot_m: Option<u64>,
    pub truncation_n: Option<usize>,
    /// Inclusive `[lo, hi]` exponents for studies and sweeps.
    pub levels: Option<[u32; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RngBlock {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub path: Option<PathBuf>,
    /// `csv` (default) or `json`.
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn req<T: Copy>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| WhmcError::config(field, "missing required value"))
}

fn positive(value: Option<f64>, field: &str) -> Result<f64> {
    let v = req(value, field)?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(WhmcError::config(
            field,
            format!("must be a finite number > 0, got {v}"),
        ));
    }
    Ok(v)
}

/// Re-tags a library validation error with the config path it came from.
fn at(field: &str) -> impl Fn(WhmcError) -> WhmcError + '_ {
    move |e| match e {
        WhmcError::Config { .. } => e,
        other => WhmcError::config(field, other.to_string()),
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| WhmcError::config("<document>", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WhmcError::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies `--seed`, `--workers` and `--out`.
    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        workers: Option<usize>,
        out: Option<PathBuf>,
    ) {
        if seed.is_some() || workers.is_some() {
            let rng = self.rng.get_or_insert_with(RngBlock::default);
            if seed.is_some() {
                rng.seed = seed;
            }
            if workers.is_some() {
                rng.workers = workers;
            }
        }
        if out.is_some() {
            self.output.get_or_insert_with(OutputBlock::default).path = out;
        }
    }

    pub fn model(&self) -> Result<LevyModel> {
        let m = self
            .model
            .as_ref()
            .ok_or_else(|| WhmcError::config("model", "missing block"))?;
        let variant = m
            .variant
            .as_deref()
            .ok_or_else(|| WhmcError::config("model.variant", "missing required value"))?;
        match variant {
            "brownian_motion" => {
                let drift = m.drift.unwrap_or(0.0);
                let volatility = m.volatility.unwrap_or(1.0);
                LevyModel::brownian(drift, volatility).map_err(at("model"))
            }
            "beta_family" => {
                let p = BetaFamilyParams {
                    c1: req(m.c1, "model.c1")?,
                    alpha1: req(m.alpha1, "model.alpha1")?,
                    beta1: req(m.beta1, "model.beta1")?,
                    lambda1: req(m.lambda1, "model.lambda1")?,
                    c2: req(m.c2, "model.c2")?,
                    alpha2: req(m.alpha2, "model.alpha2")?,
                    beta2: req(m.beta2, "model.beta2")?,
                    lambda2: req(m.lambda2, "model.lambda2")?,
                    sigma: m.sigma.unwrap_or(0.0),
                    a: m.a.unwrap_or(0.0),
                };
                LevyModel::beta_family(p).map_err(at("model"))
            }
            other => Err(WhmcError::config(
                "model.variant",
                format!("unknown variant `{other}` (expected brownian_motion or beta_family)"),
            )),
        }
    }

    fn functional_block(&self) -> Result<&FunctionalBlock> {
        self.functional
            .as_ref()
            .ok_or_else(|| WhmcError::config("functional", "missing block"))
    }

    pub(crate) fn method_block(&self) -> Result<&MethodBlock> {
        self.method
            .as_ref()
            .ok_or_else(|| WhmcError::config("method", "missing block"))
    }

    pub fn barrier(&self) -> Result<f64> {
        positive(self.functional_block()?.u, "functional.u")
    }

    pub fn horizon(&self) -> Result<f64> {
        positive(self.functional_block()?.t, "functional.t")
    }

    pub fn discount(&self) -> Result<f64> {
        positive(self.functional_block()?.q, "functional.q")
    }

    pub fn overshoot_level(&self) -> Result<f64> {
        positive(self.functional_block()?.y, "functional.y")
    }

    pub fn functional(&self) -> Result<Functional> {
        let f = self.functional_block()?;
        let kind = f
            .kind
            .as_deref()
            .ok_or_else(|| WhmcError::config("functional.kind", "missing required value"))?;
        self.barrier()?;
        self.horizon()?;
        match kind {
            "first_passage_time" => Ok(Functional::FirstPassageTime),
            "indicator_cdf" => Ok(Functional::IndicatorCdf {
                s: positive(f.s, "functional.s")?,
            }),
            "discounted_overshoot_indicator" => Ok(Functional::DiscountedOvershootIndicator {
                q: self.discount()?,
                y: self.overshoot_level()?,
            }),
            other => Err(WhmcError::config(
                "functional.kind",
                format!(
                    "unknown kind `{other}` (expected first_passage_time, indicator_cdf or \
                     discounted_overshoot_indicator)"
                ),
            )),
        }
    }

    pub fn method_kind(&self) -> Result<&str> {
        self.method_block()?
            .kind
            .as_deref()
            .ok_or_else(|| WhmcError::config("method.kind", "missing required value"))
    }

    pub fn steps(&self) -> Result<usize> {
        let n = req(self.method_block()?.n, "method.n")?;
        if n == 0 {
            return Err(WhmcError::config("method.n", "must be >= 1"));
        }
        Ok(n)
    }

    pub fn samples(&self) -> Result<u64> {
        let m = req(self.method_block()?.m, "method.m")?;
        if m < 2 {
            return Err(WhmcError::config(
                "method.m",
                format!("must be >= 2, got {m}"),
            ));
        }
        Ok(m)
    }

    /// `method.m` or `method.target_stderr`, exactly one of them.
    pub fn sample_spec(&self) -> Result<SampleSpec> {
        let b = self.method_block()?;
        match (b.m, b.target_stderr) {
            (Some(_), Some(_)) => Err(WhmcError::config(
                "method.m",
                "give either m or target_stderr, not both",
            )),
            (Some(_), None) => Ok(SampleSpec::Fixed(self.samples()?)),
            (None, Some(_)) => Ok(SampleSpec::Target(positive(
                b.target_stderr,
                "method.target_stderr",
            )?)),
            (None, None) => Err(WhmcError::config(
                "method.m",
                "missing: give m or target_stderr",
            )),
        }
    }

    pub fn target_stderr(&self) -> Result<f64> {
        positive(self.method_block()?.target_stderr, "method.target_stderr")
    }

    pub fn truncation(&self) -> Result<usize> {
        let n = self
            .method_block()?
            .truncation_n
            .unwrap_or(DEFAULT_TRUNCATION);
        if n == 0 {
            return Err(WhmcError::config("method.truncation_n", "must be >= 1"));
        }
        Ok(n)
    }

    pub fn level_range(&self) -> Result<(u32, u32)> {
        let [lo, hi] = req(self.method_block()?.levels, "method.levels")?;
        if lo > hi {
            return Err(WhmcError::config(
                "method.levels",
                format!("empty range [{lo}, {hi}]"),
            ));
        }
        if hi >= 40 {
            return Err(WhmcError::config("method.levels", "exponents must be < 40"));
        }
        Ok((lo, hi))
    }

    pub fn stream_plan(&self) -> Result<StreamPlan> {
        let rng = self
            .rng
            .as_ref()
            .ok_or_else(|| WhmcError::config("rng", "missing block"))?;
        let seed = req(rng.seed, "rng.seed")?;
        let workers = rng.workers.unwrap_or(1);
        if workers == 0 {
            return Err(WhmcError::config("rng.workers", "must be >= 1"));
        }
        Ok(StreamPlan::new(seed, workers))
    }

    pub fn output_path(&self) -> Result<PathBuf> {
        self.output
            .as_ref()
            .and_then(|o| o.path.clone())
            .ok_or_else(|| WhmcError::config("output.path", "missing: set it or pass --out"))
    }

    /// `output.format`, or inferred from a `.json` extension, else CSV.
    pub fn format(&self) -> Result<Format> {
        match self.output.as_ref().and_then(|o| o.format.as_deref()) {
            None => {
                let json = self
                    .output
                    .as_ref()
                    .and_then(|o| o.path.as_ref())
                    .is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
                Ok(if json { Format::Json } else { Format::Csv })
            }
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(WhmcError::config(
                "output.format",
                format!("unknown format `{other}` (expected csv or json)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSpec {
    Fixed(u64),
    Target(f64),
}
