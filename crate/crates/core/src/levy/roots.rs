use serde::Serialize;

use crate::error::{Result, WhmcError};
use crate::levy::exponent::eval_psi_shifted;
use crate::levy::model::{BetaFamilyParams, LevyModel};

/// Bracket endpoints adjacent to a pole are pulled inwards by this fraction
/// of the bracket width.
pub const GUARD_BAND: f64 = 1e-10;

/// Lower bound on the pull-in relative to `|ζ|`, kept above the evaluator's
/// pole guard so far-out brackets never start on a refused point.
const RELATIVE_GUARD: f64 = 1e-14;

fn guarded(lo: f64, hi: f64) -> (f64, f64) {
    let guard = (GUARD_BAND * (hi - lo)).max(RELATIVE_GUARD * lo.abs().max(hi.abs()));
    (lo + guard, hi - guard)
}

const MAX_BISECTIONS: usize = 400;

/// Located roots of `ζ ↦ q + Ψ(iζ)` together with the interlacing poles.
///
/// Index `k` of `zeta_neg` holds `ζ_{-k}^-`, so both arrays are ordered by
/// increasing distance from the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootTable {
    pub q: f64,
    pub zeta_neg: Vec<f64>,
    pub zeta_pos: Vec<f64>,
    pub pole_neg: Vec<f64>,
    pub pole_pos: Vec<f64>,
}

impl RootTable {
    pub fn len(&self) -> usize {
        self.zeta_pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta_pos.is_empty()
    }

    /// Open bracket of `ζ_{-k}^-`.
    pub fn bracket_neg(p: &BetaFamilyParams, k: usize) -> (f64, f64) {
        let k = k as f64;
        if k == 0.0 {
            (-p.beta1 * p.alpha1, 0.0)
        } else {
            (-p.beta1 * (p.alpha1 + k), -p.beta1 * (p.alpha1 + k - 1.0))
        }
    }

    /// Open bracket of `ζ_k^+`.
    pub fn bracket_pos(p: &BetaFamilyParams, k: usize) -> (f64, f64) {
        let k = k as f64;
        if k == 0.0 {
            (0.0, p.beta2 * p.alpha2)
        } else {
            (p.beta2 * (p.alpha2 + k - 1.0), p.beta2 * (p.alpha2 + k))
        }
    }
}

fn bisect(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    side: &'static str,
    index: usize,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(WhmcError::RootBracket {
            side,
            index,
            detail: format!("F({a}) = {fa}, F({b}) = {fb}"),
        });
    }
    // Bisect down to adjacent floats: near the poles F is steep enough that
    // a few ulps in ζ already move |F| past 1e-10.
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Locates `count` roots on each side of the origin by bisection inside the
/// guard-banded pole intervals.
pub fn find_roots(model: &LevyModel, q: f64, count: usize) -> Result<RootTable> {
    let p = match model {
        LevyModel::BetaFamily { params } => *params,
        LevyModel::BrownianMotion { .. } => {
            return Err(WhmcError::Parameter(
                "root tables are only defined for the beta family".into(),
            ))
        }
    };
    p.validate()?;
    if !(q > 0.0 && q.is_finite()) {
        return Err(WhmcError::Parameter(format!("q must be > 0, got {q}")));
    }
    if count == 0 {
        return Err(WhmcError::Parameter("root count must be >= 1".into()));
    }
    if p.c1 == 0.0 || p.c2 == 0.0 {
        return Err(WhmcError::Parameter(
            "pole-bracketed root search needs jumps on both sides (c1 > 0 and c2 > 0)".into(),
        ));
    }
    let f = |z: f64| eval_psi_shifted(model, q, z);

    let mut table = RootTable {
        q,
        zeta_neg: Vec::with_capacity(count),
        zeta_pos: Vec::with_capacity(count),
        pole_neg: Vec::with_capacity(count),
        pole_pos: Vec::with_capacity(count),
    };
    for k in 0..count {
        let (lo, hi) = RootTable::bracket_neg(&p, k);
        let (a, b) = guarded(lo, hi);
        let root = bisect(f, a, b, "negative", k)?;
        table.zeta_neg.push(root);
        table.pole_neg.push(lo);

        let (lo, hi) = RootTable::bracket_pos(&p, k);
        let (a, b) = guarded(lo, hi);
        let root = bisect(f, a, b, "positive", k)?;
        table.zeta_pos.push(root);
        table.pole_pos.push(hi);
    }
    Ok(table)
}
