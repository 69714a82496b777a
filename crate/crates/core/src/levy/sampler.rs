use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Result, WhmcError};
use crate::levy::model::LevyModel;
use crate::levy::roots::{find_roots, RootTable};

pub const DEFAULT_TRUNCATION: usize = 100;

/// Law of `Σ_n Y_n`, each `Y_n` an atom at zero with probability
/// `atom_probability[n]` and otherwise `Exp(rate[n])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentialMixture {
    pub atom_probability: Vec<f64>,
    pub rate: Vec<f64>,
    /// `1 - atom_probability`, computed without cancellation.
    active_probability: Vec<f64>,
    /// `cum_log_atom[j] = Σ_{k<j} ln atom_probability[k]`, length `N + 1`,
    /// strictly decreasing.
    cum_log_atom: Vec<f64>,
}

impl ExponentialMixture {
    /// Builds the mixture from roots and poles with `0 < root/pole < 1`.
    fn from_roots(roots: &[f64], poles: &[f64]) -> Self {
        let n = roots.len();
        let mut atom_probability = Vec::with_capacity(n);
        let mut rate = Vec::with_capacity(n);
        let mut active_probability = Vec::with_capacity(n);
        let mut cum_log_atom = Vec::with_capacity(n + 1);
        cum_log_atom.push(0.0);
        for (&root, &pole) in roots.iter().zip(poles) {
            let atom = root / pole;
            let active = (pole - root) / pole;
            atom_probability.push(atom);
            active_probability.push(active);
            rate.push(root.abs());
            let last = *cum_log_atom.last().unwrap();
            cum_log_atom.push(last + (-active).ln_1p());
        }
        ExponentialMixture {
            atom_probability,
            rate,
            active_probability,
            cum_log_atom,
        }
    }

    pub fn len(&self) -> usize {
        self.rate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rate.is_empty()
    }

    /// Draws the (non-negative) magnitude.
    ///
    /// Rather than one Bernoulli per factor, the index of the next
    /// non-atomic factor is drawn by inverting `P(all atoms on n..j)`, so the
    /// cost is proportional to the number of active factors.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let n_factors = self.len();
        let mut total = 0.0;
        let mut start = 0usize;
        while start < n_factors {
            let u: f64 = 1.0 - rng.random::<f64>();
            let threshold = self.cum_log_atom[start] + u.ln();
            // first j >= start with cum_log_atom[j + 1] < threshold
            let tail = &self.cum_log_atom[start + 1..];
            let offset = tail.partition_point(|&c| c >= threshold);
            if offset == tail.len() {
                break;
            }
            let j = start + offset;
            let e: f64 = rng.sample(Exp1);
            total += e / self.rate[j];
            start = j + 1;
        }
        total
    }

    /// Reference sampler with one Bernoulli trial per factor.
    pub fn sample_by_factors<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut total = 0.0;
        for (&active, &rate) in self.active_probability.iter().zip(&self.rate) {
            if rng.random::<f64>() < active {
                let e: f64 = rng.sample(Exp1);
                total += e / rate;
            }
        }
        total
    }

    /// Characteristic function of the magnitude.
    pub fn characteristic_function(&self, z: f64) -> Complex64 {
        self.atom_probability
            .iter()
            .zip(&self.rate)
            .map(|(&p, &r)| p + (1.0 - p) / Complex64::new(1.0, -z / r))
            .product()
    }

    /// First two moments of the magnitude.
    pub fn moments(&self) -> (f64, f64) {
        let mut mean = 0.0;
        let mut var = 0.0;
        for (&a, &r) in self.active_probability.iter().zip(&self.rate) {
            let m1 = a / r;
            let m2 = 2.0 * a / (r * r);
            mean += m1;
            var += m2 - m1 * m1;
        }
        (mean, var + mean * mean)
    }
}

/// Law of one Wiener–Hopf factor magnitude.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorLaw {
    Exponential { rate: f64 },
    Mixture(ExponentialMixture),
}

impl FactorLaw {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FactorLaw::Exponential { rate } => {
                let e: f64 = rng.sample(Exp1);
                e / rate
            }
            FactorLaw::Mixture(m) => m.sample(rng),
        }
    }

    pub fn characteristic_function(&self, z: f64) -> Complex64 {
        match self {
            FactorLaw::Exponential { rate } => 1.0 / Complex64::new(1.0, -z / rate),
            FactorLaw::Mixture(m) => m.characteristic_function(z),
        }
    }

    pub fn as_mixture(&self) -> Option<&ExponentialMixture> {
        match self {
            FactorLaw::Mixture(m) => Some(m),
            FactorLaw::Exponential { .. } => None,
        }
    }
}

/// Prepared sampler for `X̄_{e(q)}` and `X̲_{e(q)}`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhFactorSampler {
    pub model: LevyModel,
    pub q: f64,
    pub truncation_n: usize,
    pub roots: Option<RootTable>,
    pub sup: FactorLaw,
    pub inf: FactorLaw,
}

impl WhFactorSampler {
    pub fn new(model: &LevyModel, q: f64, truncation_n: usize) -> Result<Self> {
        model.validate()?;
        if !(q > 0.0 && q.is_finite()) {
            return Err(WhmcError::Parameter(format!("q must be > 0, got {q}")));
        }
        match *model {
            LevyModel::BrownianMotion { drift, volatility } => {
                // roots of q + μζ - s²ζ²/2
                let s2 = volatility * volatility;
                let disc = (drift * drift + 2.0 * q * s2).sqrt();
                Ok(WhFactorSampler {
                    model: *model,
                    q,
                    truncation_n,
                    roots: None,
                    sup: FactorLaw::Exponential {
                        rate: (disc - drift) / s2,
                    },
                    inf: FactorLaw::Exponential {
                        rate: (disc + drift) / s2,
                    },
                })
            }
            LevyModel::BetaFamily { .. } => {
                if truncation_n == 0 {
                    return Err(WhmcError::Parameter("truncation_n must be >= 1".into()));
                }
                let roots = find_roots(model, q, truncation_n)?;
                let sup = ExponentialMixture::from_roots(&roots.zeta_neg, &roots.pole_neg);
                let inf = ExponentialMixture::from_roots(&roots.zeta_pos, &roots.pole_pos);
                Ok(WhFactorSampler {
                    model: *model,
                    q,
                    truncation_n,
                    roots: Some(roots),
                    sup: FactorLaw::Mixture(sup),
                    inf: FactorLaw::Mixture(inf),
                })
            }
        }
    }

    /// A draw of `X̄^N_{e(q)} >= 0`.
    #[inline]
    pub fn sample_sup<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sup.sample(rng)
    }

    /// A draw of `X̲^N_{e(q)} <= 0`.
    #[inline]
    pub fn sample_inf<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        -self.inf.sample(rng)
    }

    pub fn sup_characteristic_function(&self, z: f64) -> Complex64 {
        self.sup.characteristic_function(z)
    }

    /// `E[exp(iz X̲^N)]`; the factor law describes `-X̲`, hence `-z`.
    pub fn inf_characteristic_function(&self, z: f64) -> Complex64 {
        self.inf.characteristic_function(-z)
    }

    /// Analytic bound on the mean squared truncation error of either factor:
    /// `max_i 3 / (β_i² (α_i + N)²)`. Zero for the exact Brownian sampler.
    pub fn truncation_error_bound(&self) -> f64 {
        match self.model {
            LevyModel::BrownianMotion { .. } => 0.0,
            LevyModel::BetaFamily { params: p } => {
                let n = self.truncation_n as f64;
                let inf = 3.0 / (p.beta2 * p.beta2 * (p.alpha2 + n).powi(2));
                let sup = 3.0 / (p.beta1 * p.beta1 * (p.alpha1 + n).powi(2));
                inf.max(sup)
            }
        }
    }
}
