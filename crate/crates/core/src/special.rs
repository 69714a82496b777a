//! Real Gamma-family functions valid on the whole real line (away from poles).
//!
//! The characteristic exponent of the β-family evaluates `B(x, 1 - λ)` with
//! `x` ranging over negative non-integers and `1 - λ ∈ (-2, 1)`, so every
//! routine here accepts negative arguments through the reflection formulas.

use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Shift point above which the asymptotic series are used directly.
const ASYMPTOTIC_FROM: f64 = 20.0;

/// `sin(πx)` with the argument reduced modulo 2 before multiplying by π.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    if r <= 0.5 {
        (PI * r).sin()
    } else if r <= 1.5 {
        (PI * (1.0 - r)).sin()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

/// `cos(πx)`, reduced the same way as [`sin_pi`].
pub fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        return 0.0;
    }
    (PI * r).cos()
}

/// True when `x` is zero or a negative integer (a pole of Γ).
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Stirling series for `ln Γ(x)`, `x ≥ ASYMPTOTIC_FROM`.
fn ln_gamma_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + series
}

fn ln_gamma_positive(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x >= ASYMPTOTIC_FROM {
        return ln_gamma_asymptotic(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < ASYMPTOTIC_FROM {
        prod *= shifted;
        shifted += 1.0;
    }
    ln_gamma_asymptotic(shifted) - prod.ln()
}

/// Returns `(ln|Γ(x)|, sign Γ(x))`. At poles the log is `+∞` and the sign is `0`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if is_gamma_pole(x) {
        return (f64::INFINITY, 0.0);
    }
    if x > 0.0 {
        return (ln_gamma_positive(x), 1.0);
    }
    // Γ(x) Γ(1 - x) = π / sin(πx), with Γ(1 - x) > 0 for x < 0.
    let s = sin_pi(x);
    let ln_abs = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    (ln_abs, s.signum())
}

/// Γ(x) for real `x`; `±∞` is never returned at poles, the value is NaN there.
pub fn gamma(x: f64) -> f64 {
    let (l, s) = ln_gamma_signed(x);
    if s == 0.0 {
        return f64::NAN;
    }
    s * l.exp()
}

/// 1/Γ(x), which is entire: exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    let (l, s) = ln_gamma_signed(x);
    if s == 0.0 {
        return 0.0;
    }
    s * (-l).exp()
}

fn digamma_asymptotic(x: f64) -> f64 {
    let inv2 = 1.0 / (x * x);
    x.ln()
        - 0.5 / x
        - inv2
            * (1.0 / 12.0
                - inv2
                    * (1.0 / 120.0
                        - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))))
}

/// Digamma ψ(x) = d/dx ln Γ(x). NaN at poles.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || is_gamma_pole(x) {
        return f64::NAN;
    }
    if x < 0.0 {
        // ψ(x) = ψ(1 - x) - π cot(πx)
        return digamma(1.0 - x) - PI * cos_pi(x) / sin_pi(x);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < ASYMPTOTIC_FROM {
        acc -= 1.0 / y;
        y += 1.0;
    }
    acc + digamma_asymptotic(y)
}

fn trigamma_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    inv + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0
                - inv2
                    * (1.0 / 30.0
                        - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))))
}

/// Trigamma ψ'(x). NaN at poles.
pub fn trigamma(x: f64) -> f64 {
    if x.is_nan() || is_gamma_pole(x) {
        return f64::NAN;
    }
    if x < 0.0 {
        // ψ'(1 - x) + ψ'(x) = π² / sin²(πx)
        let s = sin_pi(x);
        return PI * PI / (s * s) - trigamma(1.0 - x);
    }
    let mut acc = 0.0;
    let mut y = x;
    while y < ASYMPTOTIC_FROM {
        acc += 1.0 / (y * y);
        y += 1.0;
    }
    acc + trigamma_asymptotic(y)
}

/// Euler Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)` for real arguments.
///
/// Evaluated in log space with sign tracking so large `|a|` does not
/// overflow. When `a + b` is a pole of Γ the result is exactly zero.
pub fn beta(a: f64, b: f64) -> f64 {
    let (la, sa) = ln_gamma_signed(a);
    let (lb, sb) = ln_gamma_signed(b);
    if sa == 0.0 || sb == 0.0 {
        return f64::NAN;
    }
    let (lc, sc) = ln_gamma_signed(a + b);
    if sc == 0.0 {
        return 0.0;
    }
    sa * sb * sc * (la + lb - lc).exp()
}

/// `∂B(a, b)/∂a = B(a, b) (ψ(a) − ψ(a + b))`, continuous through poles of Γ(a + b).
pub fn beta_da(a: f64, b: f64) -> f64 {
    let c = a + b;
    if is_gamma_pole(c) {
        // B ψ(c) → Γ(a)Γ(b) · lim ψ(c)/Γ(c) = Γ(a)Γ(b) (-1)^{m+1} m!, c = -m
        let m = -c;
        let sign = if (m as i64) % 2 == 0 { -1.0 } else { 1.0 };
        let fact = gamma(m + 1.0);
        return -gamma(a) * gamma(b) * sign * fact;
    }
    beta(a, b) * (digamma(a) - digamma(c))
}
