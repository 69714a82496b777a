use std::ffi::CStr;
use std::ptr;

use whmc_ffi::*;

fn reference() -> WhmcBetaParams {
    WhmcBetaParams {
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

fn last_error() -> String {
    let p = whmc_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn brownian_factors_have_the_right_means() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(
            whmc_model_new_brownian(0.0, 1.0, &mut model),
            WhmcStatus::Ok
        );
        let mut sampler = ptr::null_mut();
        assert_eq!(
            whmc_sampler_new(model, 2.0, 0, &mut sampler),
            WhmcStatus::Ok
        );
        let mut rng = ptr::null_mut();
        assert_eq!(whmc_rng_new(3, 0, &mut rng), WhmcStatus::Ok);

        let mut buf = vec![0.0; 200_000];
        assert_eq!(
            whmc_sample_sup(sampler, rng, buf.as_mut_ptr(), buf.len()),
            WhmcStatus::Ok
        );
        let mean = buf.iter().sum::<f64>() / buf.len() as f64;
        // X̄_{e(2)} ~ Exp(2): mean 1/2, sd 1/2
        assert!(
            (mean - 0.5).abs() < 4.0 * 0.5 / (buf.len() as f64).sqrt(),
            "{mean}"
        );
        assert!(buf.iter().all(|&x| x >= 0.0));

        assert_eq!(
            whmc_sample_inf(sampler, rng, buf.as_mut_ptr(), buf.len()),
            WhmcStatus::Ok
        );
        assert!(buf.iter().all(|&x| x <= 0.0));

        let mut bound = f64::NAN;
        assert_eq!(
            whmc_sampler_truncation_bound(sampler, &mut bound),
            WhmcStatus::Ok
        );
        assert_eq!(bound, 0.0);

        whmc_rng_free(rng);
        whmc_sampler_free(sampler);
        whmc_model_free(model);
    }
}

#[test]
fn beta_model_exponent_and_estimate() {
    unsafe {
        let p = reference();
        let mut model = ptr::null_mut();
        assert_eq!(whmc_model_new_beta(&p, &mut model), WhmcStatus::Ok);
        let mut f = 0.0;
        assert_eq!(
            whmc_eval_psi_shifted(model, 2.5, 0.0, &mut f),
            WhmcStatus::Ok
        );
        assert_eq!(f, 2.5);

        let mut a = WhmcEstimate::default();
        let mut b = WhmcEstimate::default();
        for out in [&mut a, &mut b] {
            let s = whmc_mc_estimate(
                model,
                WhmcFunctionalKind::FirstPassageTime,
                0.0,
                0.0,
                1.0,
                1.0,
                16,
                2000,
                50,
                11,
                3,
                out,
            );
            assert_eq!(s, WhmcStatus::Ok);
        }
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.samples, 2000);
        assert!(a.value > 0.0 && a.value <= 1.0);
        assert!(a.ci95_low < a.value && a.value < a.ci95_high);
        whmc_model_free(model);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(
            whmc_model_new_brownian(0.0, -1.0, &mut model),
            WhmcStatus::InvalidParameter
        );
        assert!(model.is_null());
        assert!(last_error().contains("volatility"));

        let mut p = reference();
        p.lambda1 = 3.5;
        assert_eq!(
            whmc_model_new_beta(&p, &mut model),
            WhmcStatus::InvalidParameter
        );
        assert_eq!(
            whmc_model_new_beta(ptr::null(), &mut model),
            WhmcStatus::NullPointer
        );
        assert_eq!(
            whmc_model_new_brownian(0.0, 1.0, ptr::null_mut()),
            WhmcStatus::NullPointer
        );

        let p = reference();
        assert_eq!(whmc_model_new_beta(&p, &mut model), WhmcStatus::Ok);
        let mut f = 0.0;
        // ζ = -1 sits on the first pole of the positive-jump term
        assert_eq!(
            whmc_eval_psi_shifted(model, 1.0, -1.0, &mut f),
            WhmcStatus::Domain
        );
        let mut est = WhmcEstimate::default();
        let s = whmc_mc_estimate(
            model,
            WhmcFunctionalKind::FirstPassageTime,
            0.0,
            0.0,
            -1.0,
            1.0,
            8,
            10,
            10,
            1,
            1,
            &mut est,
        );
        assert_eq!(s, WhmcStatus::Domain);
        let mut sampler = ptr::null_mut();
        assert_eq!(
            whmc_sampler_new(model, 0.0, 10, &mut sampler),
            WhmcStatus::InvalidParameter
        );
        whmc_model_free(model);

        whmc_model_free(ptr::null_mut());
        whmc_sampler_free(ptr::null_mut());
        whmc_rng_free(ptr::null_mut());
    }
}
