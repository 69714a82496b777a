use serde::{Deserialize, Serialize};

use crate::error::{Result, WhmcError};

/// Parameters of a β-family Lévy process.
///
/// Side 1 describes positive jumps, side 2 negative jumps; the Lévy density is
///
/// ```text
/// π(x) = 1{x>0} c1 e^{-α1 β1 x} / (1 - e^{-β1 x})^{λ1}
///      + 1{x<0} c2 e^{ α2 β2 x} / (1 - e^{ β2 x})^{λ2}
/// ```
///
/// `sigma` is the Gaussian coefficient and `a` the mean drift, so that
/// `E[X_1] = a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaFamilyParams {
    pub c1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub lambda1: f64,
    pub c2: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub lambda2: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub a: f64,
}

impl BetaFamilyParams {
    /// Driftless pure-jump parameter set used throughout the rate studies:
    /// `c_i = β_i = λ_i = 1`, `α1 = 1`, `α2 = 2`.
    pub fn reference() -> Self {
        BetaFamilyParams {
            c1: 1.0,
            alpha1: 1.0,
            beta1: 1.0,
            lambda1: 1.0,
            c2: 1.0,
            alpha2: 2.0,
            beta2: 1.0,
            lambda2: 1.0,
            sigma: 0.0,
            a: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let sides = [
            ("1", self.c1, self.alpha1, self.beta1, self.lambda1),
            ("2", self.c2, self.alpha2, self.beta2, self.lambda2),
        ];
        for (i, c, alpha, beta, lambda) in sides {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(WhmcError::Parameter(format!("c{i} must be >= 0, got {c}")));
            }
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(WhmcError::Parameter(format!(
                    "alpha{i} must be > 0, got {alpha}"
                )));
            }
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(WhmcError::Parameter(format!(
                    "beta{i} must be > 0, got {beta}"
                )));
            }
            if !(lambda > 0.0 && lambda < 3.0) {
                return Err(WhmcError::Parameter(format!(
                    "lambda{i} must lie in (0, 3), got {lambda}"
                )));
            }
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(WhmcError::Parameter(format!(
                "sigma must be >= 0, got {}",
                self.sigma
            )));
        }
        if !self.a.is_finite() {
            return Err(WhmcError::Parameter("a must be finite".into()));
        }
        if self.sigma == 0.0 && self.c1 == 0.0 && self.c2 == 0.0 {
            return Err(WhmcError::Parameter(
                "degenerate process: one of sigma, c1, c2 must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Parameters of `-X`: sides swapped, drift negated.
    pub fn reflected(&self) -> Self {
        BetaFamilyParams {
            c1: self.c2,
            alpha1: self.alpha2,
            beta1: self.beta2,
            lambda1: self.lambda2,
            c2: self.c1,
            alpha2: self.alpha1,
            beta2: self.beta1,
            lambda2: self.lambda1,
            sigma: self.sigma,
            a: -self.a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum LevyModel {
    BrownianMotion { drift: f64, volatility: f64 },
    BetaFamily { params: BetaFamilyParams },
}

impl LevyModel {
    pub fn standard_brownian() -> Self {
        LevyModel::BrownianMotion {
            drift: 0.0,
            volatility: 1.0,
        }
    }

    pub fn brownian(drift: f64, volatility: f64) -> Result<Self> {
        let m = LevyModel::BrownianMotion { drift, volatility };
        m.validate()?;
        Ok(m)
    }

    pub fn beta_family(params: BetaFamilyParams) -> Result<Self> {
        params.validate()?;
        Ok(LevyModel::BetaFamily { params })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyModel::BrownianMotion { drift, volatility } => {
                if !(*volatility > 0.0 && volatility.is_finite()) {
                    return Err(WhmcError::Parameter(format!(
                        "volatility must be > 0, got {volatility}"
                    )));
                }
                if !drift.is_finite() {
                    return Err(WhmcError::Parameter("drift must be finite".into()));
                }
                Ok(())
            }
            LevyModel::BetaFamily { params } => params.validate(),
        }
    }

    /// The law of `-X`.
    pub fn reflect(&self) -> Self {
        match *self {
            LevyModel::BrownianMotion { drift, volatility } => LevyModel::BrownianMotion {
                drift: -drift,
                volatility,
            },
            LevyModel::BetaFamily { params } => LevyModel::BetaFamily {
                params: params.reflected(),
            },
        }
    }

    /// Lévy density at `x ≠ 0`. Brownian motion has no jumps and returns 0.
    pub fn levy_density(&self, x: f64) -> Result<f64> {
        if x == 0.0 || !x.is_finite() {
            return Err(WhmcError::Domain(format!(
                "Levy density is defined for finite x != 0, got {x}"
            )));
        }
        let p = match self {
            LevyModel::BrownianMotion { .. } => return Ok(0.0),
            LevyModel::BetaFamily { params } => params,
        };
        let value = if x > 0.0 {
            if p.c1 == 0.0 {
                0.0
            } else {
                p.c1 * (-p.alpha1 * p.beta1 * x).exp() / (-(-p.beta1 * x).exp_m1()).powf(p.lambda1)
            }
        } else if p.c2 == 0.0 {
            0.0
        } else {
            p.c2 * (p.alpha2 * p.beta2 * x).exp() / (-(p.beta2 * x).exp_m1()).powf(p.lambda2)
        };
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_density_at_one() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        let e = (-1f64).exp();
        assert_relative_eq!(
            m.levy_density(1.0).unwrap(),
            e / (1.0 - e),
            max_relative = 1e-14
        );
    }

    #[test]
    fn density_vanishes_on_empty_side() {
        let mut p = BetaFamilyParams::reference();
        p.c2 = 0.0;
        let m = LevyModel::beta_family(p).unwrap();
        assert_eq!(m.levy_density(-0.7).unwrap(), 0.0);
        assert!(m.levy_density(0.7).unwrap() > 0.0);
    }

    #[test]
    fn density_rejects_zero_and_brownian_has_none() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        assert!(matches!(m.levy_density(0.0), Err(WhmcError::Domain(_))));
        assert_eq!(
            LevyModel::standard_brownian().levy_density(0.3).unwrap(),
            0.0
        );
    }

    #[test]
    fn reflection_mirrors_density() {
        let mut p = BetaFamilyParams::reference();
        p.lambda1 = 0.6;
        p.c2 = 2.5;
        p.beta2 = 1.7;
        let m = LevyModel::beta_family(p).unwrap();
        let r = m.reflect();
        for i in 1..50 {
            let x = 0.11 * i as f64;
            assert_relative_eq!(
                m.levy_density(x).unwrap(),
                r.levy_density(-x).unwrap(),
                max_relative = 1e-15
            );
            assert_relative_eq!(
                m.levy_density(-x).unwrap(),
                r.levy_density(x).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn reflection_is_an_involution() {
        let m = LevyModel::beta_family(BetaFamilyParams {
            a: 0.3,
            ..BetaFamilyParams::reference()
        })
        .unwrap();
        assert_eq!(m.reflect().reflect(), m);
        let bm = LevyModel::brownian(0.2, 1.3).unwrap();
        assert_eq!(bm.reflect().reflect(), bm);
        assert_eq!(
            LevyModel::standard_brownian().reflect(),
            LevyModel::standard_brownian()
        );
        match m.reflect() {
            LevyModel::BetaFamily { params } => {
                assert_eq!(params.alpha1, 2.0);
                assert_eq!(params.alpha2, 1.0);
                assert_eq!(params.a, -0.3);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn validation_catches_bad_parameters() {
        let bad = [
            BetaFamilyParams {
                lambda1: 3.0,
                ..BetaFamilyParams::reference()
            },
            BetaFamilyParams {
                alpha2: 0.0,
                ..BetaFamilyParams::reference()
            },
            BetaFamilyParams {
                c1: -1.0,
                ..BetaFamilyParams::reference()
            },
            BetaFamilyParams {
                c1: 0.0,
                c2: 0.0,
                ..BetaFamilyParams::reference()
            },
        ];
        for p in bad {
            assert!(LevyModel::beta_family(p).is_err(), "{p:?}");
        }
        assert!(LevyModel::brownian(0.0, 0.0).is_err());
    }
}
