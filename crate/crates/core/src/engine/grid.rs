use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WhmcError};

/// `n` steps over horizon `t`; the stochastic grid has rate `n / t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub t: f64,
}

impl GridSpec {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if n == 0 {
            return Err(WhmcError::Parameter("grid needs n >= 1 steps".into()));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(WhmcError::Parameter(format!(
                "horizon t must be > 0, got {t}"
            )));
        }
        Ok(GridSpec { n, t })
    }

    pub fn lambda(&self) -> f64 {
        self.n as f64 / self.t
    }

    /// Deterministic time attached to walk index `k`.
    pub fn time_of(&self, k: usize) -> f64 {
        self.t * k as f64 / self.n as f64
    }
}

/// Grid points `g(0..=n)`: `g(0) = 0` and i.i.d. `Exp(n/t)` spacings.
///
/// Diagnostic only; the walk itself never needs grid times.
pub fn generate_grid_times<R: Rng + ?Sized>(grid: &GridSpec, rng: &mut R) -> Vec<f64> {
    let rate = grid.lambda();
    let mut times = Vec::with_capacity(grid.n + 1);
    let mut g = 0.0;
    times.push(g);
    for _ in 0..grid.n {
        let e: f64 = rng.sample(Exp1);
        g += e / rate;
        times.push(g);
    }
    times
}

/// Overshoot `υ(x) - x` of the first grid point strictly past `x`, extending
/// the grid beyond `n` points if necessary.
pub fn grid_overshoot<R: Rng + ?Sized>(grid: &GridSpec, x: f64, rng: &mut R) -> f64 {
    let rate = grid.lambda();
    let mut g = 0.0;
    loop {
        let e: f64 = rng.sample(Exp1);
        g += e / rate;
        if g > x {
            return g - x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use crate::stats::Moments;

    #[test]
    fn zero_step_grid_has_only_origin() {
        let g = GridSpec { n: 0, t: 1.0 };
        let mut rng = stream(1, 0);
        assert_eq!(generate_grid_times(&g, &mut rng), vec![0.0]);
        assert!(GridSpec::new(0, 1.0).is_err());
    }

    #[test]
    fn last_grid_point_has_mean_t() {
        let g = GridSpec::new(16, 2.5).unwrap();
        let mut rng = stream(2, 0);
        let mut m = Moments::default();
        for _ in 0..20_000 {
            let times = generate_grid_times(&g, &mut rng);
            assert!(times.windows(2).all(|w| w[0] < w[1]));
            m.push(*times.last().unwrap());
        }
        assert!((m.mean() - 2.5).abs() < 3.0 * m.std_error());
    }

    #[test]
    fn time_of_index() {
        let g = GridSpec::new(4, 2.0).unwrap();
        assert_eq!(g.lambda(), 2.0);
        assert_eq!(g.time_of(3), 1.5);
        assert_eq!(g.time_of(4), 2.0);
    }
}
