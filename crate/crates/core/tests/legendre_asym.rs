use cuspmoment::legendre_asym::{bg_a1, bg_b0, bg_error_scan, legendre_bg_approx, DELTA, SMALL_THETA_C};
use cuspmoment::specfun::legendre_p;
use std::f64::consts::PI;

fn theta_grid(n: u32, points: usize, upper: f64) -> Vec<f64> {
    let lo = SMALL_THETA_C / (n as f64 + 0.5);
    (0..points).map(|i| (lo + (upper - lo) * i as f64 / (points - 1) as f64).min(upper)).collect()
}

#[test]
fn endpoint_limits() {
    assert!(bg_a1(1e-8).unwrap().abs() <= 1e-9);
    assert!((bg_b0(1e-8).unwrap() + 1.0 / 24.0).abs() <= 1e-9);
    assert!((bg_a1(0.01).unwrap() / 1e-4).abs() < 0.01);
}

#[test]
fn order_one_example() {
    let n = 99;
    let theta = 0.8;
    let approx = legendre_bg_approx(n, theta, 1).unwrap();
    let exact = legendre_p(n, theta.cos()).unwrap();
    let big_n = n as f64 + 0.5;
    assert!((approx - exact).abs() <= 10.0 * theta.sqrt() * big_n.powf(-3.5));
}

#[test]
fn order_zero_small_angle() {
    let n = 200;
    let theta = 0.5 / (n as f64 + 0.5);
    let approx = legendre_bg_approx(n, theta, 0).unwrap();
    let exact = legendre_p(n, theta.cos()).unwrap();
    assert!((approx - exact).abs() <= theta * theta);
}

#[test]
fn fitted_exponents_at_one_radian() {
    let ns = [50u32, 100, 200, 400, 800];
    let s1 = bg_error_scan(&ns, &[1.0], 1).unwrap();
    assert!((s1.fits[0].fit.slope + 3.5).abs() <= 0.5);
    let s0 = bg_error_scan(&ns, &[1.0], 0).unwrap();
    assert!((s0.fits[0].fit.slope + 1.5).abs() <= 0.5);
}

/// `|E₁| ≤ C θ^{1/2} N^{-7/2}` on `1/N ≤ θ ≤ π - δ`. The calibrated constant
/// is 10 away from the endpoint and 25 up to it.
#[test]
fn order_one_error_constant() {
    for n in [20u32, 50, 100, 200, 400, 800] {
        let s = bg_error_scan(&[n], &theta_grid(n, 61, PI - DELTA), 1).unwrap();
        for r in &s.rows {
            let c = if r.theta <= 3.0 { 10.0 } else { 25.0 };
            assert!(r.scaled <= c, "n={} θ={} ratio={}", r.n, r.theta, r.scaled);
        }
    }
}

#[test]
fn order_one_beats_order_zero() {
    for n in [20u32, 40, 100, 300] {
        let grid = theta_grid(n, 41, PI - DELTA);
        let max = |m| {
            bg_error_scan(&[n], &grid, m)
                .unwrap()
                .rows
                .iter()
                .map(|r| r.error)
                .fold(0.0, f64::max)
        };
        assert!(max(1) < max(0), "n = {n}");
    }
}
