use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use whmc_core::engine::{simulate_trial, simulate_wh_path, walk_from_increments, GridSpec};
use whmc_core::estimators::CoupledSampler;
use whmc_core::levy::{BetaFamilyParams, LevyModel, WhFactorSampler};
use whmc_core::rng::shard_sizes;

fn beta() -> LevyModel {
    LevyModel::beta_family(BetaFamilyParams::reference()).unwrap()
}

proptest! {
    #[test]
    fn running_maximum_dominates_and_never_decreases(
        pairs in proptest::collection::vec((0.0f64..5.0, -5.0f64..=0.0), 1..80)
    ) {
        let (s, i): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let p = walk_from_increments(&s, &i);
        for k in 0..p.v.len() {
            prop_assert!(p.j[k] >= 0.0);
            prop_assert!(p.j[k] >= p.v[k]);
            if k > 0 {
                prop_assert!(p.j[k] >= p.j[k - 1]);
            }
        }
    }

    #[test]
    fn tuple_invariants_hold_on_simulated_walks(seed in any::<u64>(), n in 1usize..128, u in 0.05f64..3.0) {
        let model = beta();
        let grid = GridSpec::new(n, 1.0).unwrap();
        let sampler = WhFactorSampler::new(&model, grid.lambda(), 30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trial = simulate_trial(&sampler, &grid, u, false, &mut rng).unwrap();
        let tup = trial.tuple;
        prop_assert!(tup.time > 0.0 && tup.time <= 1.0);
        prop_assert!(trial.steps as usize <= n);
        if tup.crossed {
            // J before the passage is at most u, and V never exceeds J
            prop_assert!(tup.gap_to_max >= 0.0);
            prop_assert!(tup.undershoot >= tup.gap_to_max);
        } else {
            prop_assert_eq!(trial.steps as usize, n);
            prop_assert!(tup.gap_to_max >= 0.0);
        }
    }

    #[test]
    fn coupled_pair_has_ordered_passage_times(seed in any::<u64>(), level in 1u32..8, u in 0.1f64..2.0) {
        let n = 1usize << level;
        let c = CoupledSampler::new(&beta(), 1.0, n, 30).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pair = c.sample(u, false, &mut rng);
        // the coarse walk reads the fine maxima at block ends; it can only
        // cross first by running past the fine horizon
        if pair.coarse.tuple.crossed && !pair.fine.tuple.crossed {
            prop_assert!(pair.steps > n as u64);
        }
        prop_assert!(pair.steps >= pair.fine.steps);
        prop_assert!(pair.fine.tuple.time <= 1.0 && pair.coarse.tuple.time <= 1.0);
    }

    #[test]
    fn shards_cover_the_total(total in 0u64..100_000, workers in 1usize..64) {
        let s = shard_sizes(total, workers);
        prop_assert_eq!(s.len(), workers);
        prop_assert_eq!(s.iter().sum::<u64>(), total);
        prop_assert!(s.iter().max().unwrap() - s.iter().min().unwrap() <= 1);
    }
}

#[test]
fn same_seed_same_path() {
    let grid = GridSpec::new(50, 2.0).unwrap();
    let sampler = WhFactorSampler::new(&beta(), grid.lambda(), 50).unwrap();
    let a = simulate_wh_path(&sampler, &grid, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    let b = simulate_wh_path(&sampler, &grid, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mismatched_sampler_rate_is_a_contract_error() {
    let grid = GridSpec::new(10, 1.0).unwrap();
    let sampler = WhFactorSampler::new(&LevyModel::standard_brownian(), 11.0, 0).unwrap();
    let err = simulate_wh_path(&sampler, &grid, &mut ChaCha8Rng::seed_from_u64(1)).unwrap_err();
    assert!(matches!(err, whmc_core::WhmcError::Contract(_)));
}
