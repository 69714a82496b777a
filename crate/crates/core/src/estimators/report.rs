use serde::Serialize;

use crate::stats::Moments;

pub const Z95: f64 = 1.959_963_984_540_054;

/// Per-level breakdown of a multilevel run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub n_fine: usize,
    pub samples: u64,
    pub mean: f64,
    pub variance: f64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub value: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    /// Sample count per level (a single entry for plain Monte Carlo).
    pub samples: Vec<u64>,
    /// Total walk steps simulated; the cost measure.
    pub steps_consumed: u64,
    pub levels: Option<Vec<LevelSummary>>,
}

impl EstimateReport {
    pub fn from_moments(m: &Moments, steps: u64) -> Self {
        let value = m.mean();
        let std_error = if m.count >= 2 {
            m.std_error()
        } else {
            f64::NAN
        };
        EstimateReport {
            value,
            std_error,
            ci95: (value - Z95 * std_error, value + Z95 * std_error),
            samples: vec![m.count],
            steps_consumed: steps,
            levels: None,
        }
    }

    pub fn from_levels(levels: Vec<LevelSummary>) -> Self {
        let value: f64 = levels.iter().map(|l| l.mean).sum();
        let var: f64 = levels.iter().map(|l| l.variance / l.samples as f64).sum();
        let std_error = var.sqrt();
        EstimateReport {
            value,
            std_error,
            ci95: (value - Z95 * std_error, value + Z95 * std_error),
            samples: levels.iter().map(|l| l.samples).collect(),
            steps_consumed: levels.iter().map(|l| l.steps).sum(),
            levels: Some(levels),
        }
    }
}
