use rand::Rng;
use serde::Serialize;

use crate::engine::grid::GridSpec;
use crate::error::{Result, WhmcError};
use crate::levy::WhFactorSampler;

/// Position/running-maximum walk `(V_k, J_k)`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WhPath {
    pub v: Vec<f64>,
    pub j: Vec<f64>,
}

impl WhPath {
    pub fn steps(&self) -> usize {
        self.v.len().saturating_sub(1)
    }
}

/// One step of the recursion: `V' = V + S + I`, `J' = max(J, V + S)`.
#[inline]
pub fn wh_step(v: f64, j: f64, sup: f64, inf: f64) -> (f64, f64) {
    let peak = v + sup;
    (peak + inf, if peak > j { peak } else { j })
}

/// Runs the recursion over pre-drawn supremum/infimum increments.
pub fn walk_from_increments(sups: &[f64], infs: &[f64]) -> WhPath {
    let n = sups.len().min(infs.len());
    let mut v = Vec::with_capacity(n + 1);
    let mut j = Vec::with_capacity(n + 1);
    v.push(0.0);
    j.push(0.0);
    let (mut cv, mut cj) = (0.0, 0.0);
    for k in 0..n {
        (cv, cj) = wh_step(cv, cj, sups[k], infs[k]);
        v.push(cv);
        j.push(cj);
    }
    WhPath { v, j }
}

pub(crate) fn check_rate(sampler: &WhFactorSampler, grid: &GridSpec) -> Result<()> {
    let lambda = grid.lambda();
    if (sampler.q - lambda).abs() > 1e-12 * lambda {
        return Err(WhmcError::Contract(format!(
            "sampler built for q = {} but grid rate n/t = {lambda}",
            sampler.q
        )));
    }
    Ok(())
}

/// Simulates the full `n`-step walk, drawing one `(S, I)` pair per step.
pub fn simulate_wh_path<R: Rng + ?Sized>(
    sampler: &WhFactorSampler,
    grid: &GridSpec,
    rng: &mut R,
) -> Result<WhPath> {
    check_rate(sampler, grid)?;
    let mut v = Vec::with_capacity(grid.n + 1);
    let mut j = Vec::with_capacity(grid.n + 1);
    v.push(0.0);
    j.push(0.0);
    let (mut cv, mut cj) = (0.0, 0.0);
    for _ in 0..grid.n {
        let s = sampler.sample_sup(rng);
        let i = sampler.sample_inf(rng);
        (cv, cj) = wh_step(cv, cj, s, i);
        v.push(cv);
        j.push(cj);
    }
    Ok(WhPath { v, j })
}

/// `(V_n, J_n)`, the approximation of `(X_t, X̄_t)`.
pub fn terminal_pair(path: &WhPath) -> (f64, f64) {
    match (path.v.last(), path.j.last()) {
        (Some(&v), Some(&j)) => (v, j),
        _ => (0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{BetaFamilyParams, LevyModel};
    use crate::rng::stream;

    #[test]
    fn one_and_two_steps() {
        let p = walk_from_increments(&[1.0], &[-0.4]);
        assert_eq!(p.v, vec![0.0, 0.6]);
        assert_eq!(p.j, vec![0.0, 1.0]);
        let p = walk_from_increments(&[1.0, 0.5], &[-0.4, -0.2]);
        assert!((p.v[2] - 0.9).abs() < 1e-15);
        assert!((p.j[2] - 1.1).abs() < 1e-15);
        let (v, j) = terminal_pair(&p);
        assert!((v - 0.9).abs() < 1e-15 && (j - 1.1).abs() < 1e-15);
    }

    #[test]
    fn empty_walk() {
        let p = walk_from_increments(&[], &[]);
        assert_eq!(terminal_pair(&p), (0.0, 0.0));
        assert_eq!(p.steps(), 0);
    }

    #[test]
    fn rate_mismatch_is_a_contract_error() {
        let s = WhFactorSampler::new(&LevyModel::standard_brownian(), 2.0, 0).unwrap();
        let g = GridSpec::new(10, 1.0).unwrap();
        let mut rng = stream(0, 0);
        assert!(matches!(
            simulate_wh_path(&s, &g, &mut rng),
            Err(WhmcError::Contract(_))
        ));
    }

    #[test]
    fn simulated_paths_satisfy_invariants() {
        let m = LevyModel::beta_family(BetaFamilyParams::reference()).unwrap();
        let g = GridSpec::new(64, 1.0).unwrap();
        let s = WhFactorSampler::new(&m, g.lambda(), 50).unwrap();
        let mut rng = stream(4, 0);
        for _ in 0..200 {
            let p = simulate_wh_path(&s, &g, &mut rng).unwrap();
            assert_eq!(p.v[0], 0.0);
            assert_eq!(p.j[0], 0.0);
            for k in 1..=64 {
                assert!(p.j[k] >= p.j[k - 1]);
                assert!(p.j[k] >= p.v[k]);
            }
        }
    }
}
