use std::fmt;
use std::sync::Arc;

use crate::engine::{FourTuple, Trial};

pub type TerminalMap = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type TupleMap = Arc<dyn Fn(&FourTuple) -> f64 + Send + Sync>;

/// The quantity `f` whose expectation is estimated.
#[derive(Clone)]
pub enum Functional {
    /// `τ_u ∧ t`.
    FirstPassageTime,
    /// `1{τ_u ≤ s}` (crossed paths only).
    IndicatorCdf { s: f64 },
    /// `e^{-q τ_u} 1{X_{τ_u} - u ≤ y}`; non-crossing paths contribute 0.
    DiscountedOvershootIndicator { q: f64, y: f64 },
    /// User map of `(V_n, J_n)`; forces full-horizon simulation.
    TerminalPayoff(TerminalMap),
    /// User map of the 4-tuple.
    TupleMap(TupleMap),
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functional::FirstPassageTime => write!(f, "FirstPassageTime"),
            Functional::IndicatorCdf { s } => write!(f, "IndicatorCdf {{ s: {s} }}"),
            Functional::DiscountedOvershootIndicator { q, y } => {
                write!(f, "DiscountedOvershootIndicator {{ q: {q}, y: {y} }}")
            }
            Functional::TerminalPayoff(_) => write!(f, "TerminalPayoff(..)"),
            Functional::TupleMap(_) => write!(f, "TupleMap(..)"),
        }
    }
}

impl Functional {
    pub fn terminal(map: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Functional::TerminalPayoff(Arc::new(map))
    }

    pub fn tuple(map: impl Fn(&FourTuple) -> f64 + Send + Sync + 'static) -> Self {
        Functional::TupleMap(Arc::new(map))
    }

    /// Whether the walk must run all `n` steps even after the passage.
    pub fn needs_full_horizon(&self) -> bool {
        matches!(self, Functional::TerminalPayoff(_))
    }

    #[inline]
    pub fn evaluate(&self, trial: &Trial) -> f64 {
        let t = &trial.tuple;
        match self {
            Functional::FirstPassageTime => t.time,
            Functional::IndicatorCdf { s } => f64::from(u8::from(t.crossed && t.time <= *s)),
            Functional::DiscountedOvershootIndicator { q, y } => gerber_shiu_value(t, *q, *y),
            Functional::TerminalPayoff(map) => map(trial.terminal.0, trial.terminal.1),
            Functional::TupleMap(map) => map(t),
        }
    }
}

/// `e^{-q·time} 1{overshoot ≤ y}` for crossed tuples, 0 otherwise.
pub fn gerber_shiu_value(tuple: &FourTuple, q: f64, y: f64) -> f64 {
    if tuple.crossed && tuple.overshoot <= y {
        (-q * tuple.time).exp()
    } else {
        0.0
    }
}
