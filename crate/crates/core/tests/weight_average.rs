use cuspmoment::exact_formula::{v1_error_series, ShiftParams, TruncationParams, WeightParam};
use cuspmoment::weight_average::{
    averaged_moment, error_exponent_fit, make_bump, mollified_first_moment, mollifier_coeffs, poisson_check,
    split_diagnostics, w1_bound_shape, w2_is_empty, FitStatus, MollifierReading,
};

#[test]
fn average_close_to_main_term() {
    let h = make_bump(1.0, 2.0).unwrap();
    let a = averaged_moment(1, 64.0, &h, &TruncationParams::default()).unwrap();
    assert!((a.main_term - 2.0 * h.h_integral() * 64.0 / 4.0).abs() < 1e-15);
    assert!(a.abs_error / a.main_term <= 0.05);
    let b = averaged_moment(1, 128.0, &h, &TruncationParams::default()).unwrap();
    assert!(b.abs_error < a.abs_error);
}

#[test]
fn averages_positive_and_real() {
    let h = make_bump(1.0, 2.0).unwrap();
    let trunc = TruncationParams::default();
    for l in [1u64, 2, 7, 13, 30] {
        for k in [32.0, 64.0, 128.0] {
            let a = averaged_moment(l, k, &h, &trunc).unwrap();
            assert!(a.value > 0.0, "l={l} K={k}");
            assert!(a.value_imag.abs() <= 1e-9);
        }
    }
}

#[test]
fn few_weights_can_go_negative() {
    let h = make_bump(1.0, 2.0).unwrap();
    let a = averaged_moment(27, 32.0, &h, &TruncationParams::default()).unwrap();
    assert!(a.weights <= 9);
    assert!(a.value < 0.0);
    assert!(a.abs_error * 32.0 / 27f64.sqrt() <= 1.0);
}

#[test]
fn scaling_covariance() {
    let h = make_bump(1.0, 2.0).unwrap();
    let c = 3.7;
    let hc = h.scaled(c);
    let trunc = TruncationParams::default();
    let a = averaged_moment(5, 64.0, &h, &trunc).unwrap();
    let b = averaged_moment(5, 64.0, &hc, &trunc).unwrap();
    for (x, y) in [(a.value, b.value), (a.main_term, b.main_term), (a.abs_error, b.abs_error)] {
        assert!((c * x - y).abs() <= 1e-13 * b.value.abs(), "{x} {y}");
    }
}

#[test]
fn error_bounded_uniformly() {
    let h = make_bump(1.0, 2.0).unwrap();
    let trunc = TruncationParams::default();
    let mut worst = 0.0f64;
    for l in 1..=30u64 {
        for k in [32.0, 64.0, 128.0, 256.0] {
            let a = averaged_moment(l, k, &h, &trunc).unwrap();
            worst = worst.max(a.abs_error * k / (l as f64).sqrt());
        }
    }
    assert!(worst <= 1.0, "sup abs_error·K/√l = {worst}");
}

#[test]
fn poisson_defect_decays() {
    let h = make_bump(1.0, 2.0).unwrap();
    let d: Vec<f64> = [64.0, 128.0, 256.0, 512.0]
        .iter()
        .map(|&k| poisson_check(&h, k, 2).unwrap().scaled_defect)
        .collect();
    assert!(d.windows(2).all(|w| w[1] <= w[0]), "{d:?}");
    for k in [64.0, 128.0] {
        let a = poisson_check(&h, k, 2).unwrap().defect;
        let b = poisson_check(&h, 2.0 * k, 2).unwrap().defect;
        assert!(b <= a / 4.0);
    }
}

#[test]
fn split_partitions_and_bounds() {
    let trunc = TruncationParams::default();
    for weight in [24u32, 32, 40, 48, 64, 80, 100, 128] {
        let wp = WeightParam::from_weight(weight).unwrap();
        for l in [1u64, 2, 3, 5, 10] {
            let s = split_diagnostics(l, wp, &trunc).unwrap();
            let full = v1_error_series(l, wp, &ShiftParams::central(), &trunc).unwrap();
            assert!((s.w1 + s.w2 - full.value).norm() <= 1e-12);
            assert!(s.w1.norm() <= 10.0 * w1_bound_shape(l, wp), "weight {weight} l {l}");
            if w2_is_empty(l, wp) {
                assert_eq!(s.w2.norm(), 0.0);
            }
        }
    }
}

#[test]
fn exponent_fit_for_l_four() {
    let h = make_bump(1.0, 2.0).unwrap();
    let f = error_exponent_fit(4, &[32.0, 64.0, 128.0, 256.0], &h, &TruncationParams::default()).unwrap();
    assert_eq!(f.status, FitStatus::Fitted);
    assert!(f.slope.unwrap() <= -0.8);
    let g = error_exponent_fit(4, &[32.0, 64.0, 128.0, 256.0], &h.scaled(5.0), &TruncationParams::default()).unwrap();
    assert!((f.slope.unwrap() - g.slope.unwrap()).abs() < 1e-4);
    assert!(error_exponent_fit(4, &[32.0, 64.0], &h, &TruncationParams::default()).is_err());
    assert!(error_exponent_fit(4, &[64.0, 32.0, 128.0], &h, &TruncationParams::default()).is_err());
}

#[test]
fn mollified_moment_unrolls() {
    let h = make_bump(1.0, 2.0).unwrap();
    let trunc = TruncationParams::default();
    let x = mollifier_coeffs(2, MollifierReading::LogRatio).unwrap();
    let m = mollified_first_moment(2, 64.0, &h, &trunc, MollifierReading::LogRatio).unwrap();
    let a1 = averaged_moment(1, 64.0, &h, &trunc).unwrap().value;
    let a2 = averaged_moment(2, 64.0, &h, &trunc).unwrap().value;
    assert!((m.value - (x[1] * a1 + x[2] / 2f64.sqrt() * a2)).abs() < 1e-15);
    let p = mollified_first_moment(8, 64.0, &h, &trunc, MollifierReading::LogRatio).unwrap();
    assert!(p.value > 0.0);
}

#[test]
fn mollifier_size_desk_check() {
    for big_m in [2u64, 10, 100, 1000, 10_000] {
        let x = mollifier_coeffs(big_m, MollifierReading::LogRatio).unwrap();
        let log_m = (big_m as f64).ln();
        assert!(x.iter().all(|v| v.abs() <= log_m), "M = {big_m}");
    }
}
