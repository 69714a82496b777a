//! `F(ζ) = q + Ψ(iζ)` on the real line.
//!
//! For the β-family, writing `δ = 1 - λ` and `x = α ± ζ/β`, each jump side
//! contributes `-(c/β) R(α, x)` with the second-order Taylor remainder
//!
//! ```text
//! R(α, x) = B(x, δ) - B(α, δ) - (x - α) ∂_a B(α, δ)
//! ```
//!
//! which absorbs both the compensating constant γ and the jump part of the
//! drift ρ. Affine terms in `x` are annihilated by `R`, so the divergent
//! parts of `B(·, δ)` at `λ ∈ {1, 2}` cancel and the limits are finite.

use crate::error::{Result, WhmcError};
use crate::levy::model::{BetaFamilyParams, LevyModel};
use crate::special::{beta, beta_da, digamma, is_gamma_pole, trigamma};

/// Distance from λ = 1 or λ = 2 below which the analytic limit branch is used.
pub const LAMBDA_LIMIT_SWITCH: f64 = 1e-8;

/// Relative distance to a pole below which evaluation is refused.
const POLE_GUARD: f64 = 1e-15;

fn remainder(alpha: f64, x: f64, lambda: f64) -> f64 {
    if (lambda - 1.0).abs() < LAMBDA_LIMIT_SWITCH {
        // B(x, δ) = 1/δ - γ_E - ψ(x) + O(δ)
        return digamma(alpha) - digamma(x) + (x - alpha) * trigamma(alpha);
    }
    if (lambda - 2.0).abs() < LAMBDA_LIMIT_SWITCH {
        // B(x, -1 + ε) = -(x-1)/ε + (x-1)ψ(x) + affine(x) + O(ε)
        let g = |y: f64| (y - 1.0) * digamma(y);
        let dg = digamma(alpha) + (alpha - 1.0) * trigamma(alpha);
        return g(x) - g(alpha) - (x - alpha) * dg;
    }
    let delta = 1.0 - lambda;
    beta(x, delta) - beta(alpha, delta) - (x - alpha) * beta_da(alpha, delta)
}

fn near_pole(x: f64) -> bool {
    if x > 0.5 {
        return false;
    }
    let nearest = x.round().min(0.0);
    (x - nearest).abs() <= POLE_GUARD * nearest.abs().max(1.0) || is_gamma_pole(x)
}

fn beta_family_shifted(p: &BetaFamilyParams, q: f64, zeta: f64) -> Result<f64> {
    let mut f = q - 0.5 * p.sigma * p.sigma * zeta * zeta + p.a * zeta;
    if p.c1 > 0.0 {
        let x = p.alpha1 + zeta / p.beta1;
        if near_pole(x) {
            return Err(WhmcError::Domain(format!(
                "zeta = {zeta} is at a pole of the positive-jump term"
            )));
        }
        f -= p.c1 / p.beta1 * remainder(p.alpha1, x, p.lambda1);
    }
    if p.c2 > 0.0 {
        let x = p.alpha2 - zeta / p.beta2;
        if near_pole(x) {
            return Err(WhmcError::Domain(format!(
                "zeta = {zeta} is at a pole of the negative-jump term"
            )));
        }
        f -= p.c2 / p.beta2 * remainder(p.alpha2, x, p.lambda2);
    }
    Ok(f)
}

/// Evaluates `q + Ψ(iζ)` in real arithmetic.
///
/// Brownian motion with drift `μ` and volatility `s` gives `q - s²ζ²/2 + μζ`.
pub fn eval_psi_shifted(model: &LevyModel, q: f64, zeta: f64) -> Result<f64> {
    if !zeta.is_finite() || !q.is_finite() {
        return Err(WhmcError::Domain(format!(
            "non-finite input q = {q}, zeta = {zeta}"
        )));
    }
    match model {
        LevyModel::BrownianMotion { drift, volatility } => {
            Ok(q - 0.5 * volatility * volatility * zeta * zeta + drift * zeta)
        }
        LevyModel::BetaFamily { params } => {
            params.validate()?;
            beta_family_shifted(params, q, zeta)
        }
    }
}
