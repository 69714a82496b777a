//! Pins the closed-form Brownian first-passage cdf with an independent
//! simulation: a Gaussian walk whose between-step crossings are added back
//! with the Brownian-bridge probability `exp(-2 (u-a)(u-b) / h)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use whmc_core::baselines::bm_fptime_cdf;
use whmc_core::stats::normal_cdf;

fn bridge_corrected_crossing(u: f64, s: f64, steps: usize, m: usize, seed: u64) -> (f64, f64) {
    let h = s / steps as f64;
    let sd = h.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..m {
        let mut x = 0.0f64;
        for _ in 0..steps {
            let z: f64 = StandardNormal.sample(&mut rng);
            let next = x + sd * z;
            if next > u {
                hits += 1;
                break;
            }
            let p = (-2.0 * (u - x) * (u - next) / h).exp();
            if rng.random_bool(p.clamp(0.0, 1.0)) {
                hits += 1;
                break;
            }
            x = next;
        }
    }
    let p = hits as f64 / m as f64;
    (p, (p * (1.0 - p) / m as f64).sqrt())
}

#[test]
fn closed_form_matches_bridge_corrected_walk() {
    for (u, s, seed) in [(1.0, 1.0, 1u64), (2.0, 5.0, 2), (0.5, 0.3, 3)] {
        let (p, se) = bridge_corrected_crossing(u, s, 64, 100_000, seed);
        let exact = bm_fptime_cdf(u, s).unwrap();
        assert!(
            (p - exact).abs() < 4.0 * se,
            "u {u} s {s}: {p} ± {se} vs {exact}"
        );
        // the sqrt(2s) normalization is far outside the noise
        let other = 2.0 * (1.0 - normal_cdf(u / (2.0 * s).sqrt()));
        assert!((p - other).abs() > 10.0 * se, "u {u} s {s}");
    }
}
