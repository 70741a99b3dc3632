use cuspmoment::arith::gcd;
use cuspmoment::exact_formula::{twisted_moment_exact, ShiftParams, TruncationParams, WeightParam};
use cuspmoment::legendre_asym::{bg_error_scan, DELTA};
use cuspmoment::oracle::{eigenform_q_expansion, QExpansion, SUPPORTED_WEIGHTS};
use cuspmoment::specfun::legendre_p;
use cuspmoment::weight_average::{averaged_moment, make_bump, mollifier_coeffs, poisson_check, MollifierReading};
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

const LEN: usize = 2000;

fn forms() -> &'static Vec<QExpansion> {
    static FORMS: OnceLock<Vec<QExpansion>> = OnceLock::new();
    FORMS.get_or_init(|| {
        SUPPORTED_WEIGHTS
            .iter()
            .map(|&w| eigenform_q_expansion(w, LEN).unwrap())
            .collect()
    })
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn legendre_explicit(n: u32, x: f64) -> f64 {
    let mut s = 0.0;
    for j in 0..=n / 2 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binom(n, j) * binom(2 * n - 2 * j, n) * x.powi((n - 2 * j) as i32);
    }
    s / 2f64.powi(n as i32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hecke_multiplicative(idx in 0usize..6, m in 1usize..44, n in 1usize..44) {
        prop_assume!(gcd(m as u64, n as u64) == 1);
        let f = &forms()[idx];
        let prod = f.lambda[m] * f.lambda[n];
        prop_assert!((prod - f.lambda[m * n]).abs() <= 1e-10 * prod.abs().max(1.0));
    }

    #[test]
    fn hecke_prime_power(idx in 0usize..6, p in prop::sample::select(vec![2usize, 3, 5, 7, 11, 13]), e in 1u32..3) {
        let f = &forms()[idx];
        let pe = p.pow(e);
        prop_assume!(pe * p < LEN);
        let lhs = f.lambda[p] * f.lambda[pe];
        let rhs = f.lambda[pe * p] + f.lambda[pe / p];
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn legendre_bounded(n in 0u32..2000, x in -1.0f64..=1.0) {
        prop_assert!(legendre_p(n, x).unwrap().abs() <= 1.0 + 1e-14);
    }

    #[test]
    fn legendre_matches_explicit(n in 0u32..=8, x in -1.0f64..=1.0) {
        prop_assert!((legendre_p(n, x).unwrap() - legendre_explicit(n, x)).abs() <= 1e-13);
    }

    #[test]
    fn mollifier_size(big_m in 1u64..10_000) {
        let x = mollifier_coeffs(big_m, MollifierReading::LogRatio).unwrap();
        let bound = (big_m as f64).ln().max(0.0);
        prop_assert!(x.iter().all(|v| v.abs() <= bound + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deligne_bound(idx in 0usize..6, p in 2usize..LEN) {
        prop_assume!((2..p).take_while(|d| d * d <= p).all(|d| p % d != 0));
        prop_assert!(forms()[idx].lambda[p].abs() <= 2.0);
    }

    #[test]
    fn averaged_moment_scales(c in 0.1f64..20.0, l in 1u64..=30, k in prop::sample::select(vec![40.0, 48.0, 64.0, 96.0])) {
        let h = make_bump(1.0, 2.0).unwrap();
        let trunc = TruncationParams::default();
        let a = averaged_moment(l, k, &h, &trunc).unwrap();
        let b = averaged_moment(l, k, &h.scaled(c), &trunc).unwrap();
        prop_assert!((c * a.value - b.value).abs() <= 1e-13 * b.value.abs());
        prop_assert!(a.value > 0.0);
        prop_assert!(a.value_imag.abs() <= 1e-9);
    }

    #[test]
    fn poisson_scaled(k in 64.0f64..512.0) {
        let h = make_bump(1.0, 2.0).unwrap();
        let p = poisson_check(&h, k, 2).unwrap();
        prop_assert!(p.scaled_defect <= 1e-2);
    }

    #[test]
    fn forced_zero(kh in prop::sample::select(vec![7u32, 9, 11, 13, 15, 17]), l in 1u64..=30) {
        let w = WeightParam::new(kh).unwrap();
        let m = twisted_moment_exact(l, w, &ShiftParams::central(), &TruncationParams::default()).unwrap();
        prop_assert!(m.value.norm() <= 2.0 * m.certified_tail + 1e-13);
    }

    #[test]
    fn bg_order_one_better(n in 20u32..600) {
        let lo = 1.0 / (n as f64 + 0.5);
        let grid: Vec<f64> = (0..25).map(|i| (lo + (PI - DELTA - lo) * i as f64 / 24.0).min(PI - DELTA)).collect();
        let e = |m| bg_error_scan(&[n], &grid, m).unwrap().rows.iter().map(|r| r.error).fold(0.0, f64::max);
        prop_assert!(e(1) < e(0));
    }
}
