//! Bessel functions of the first kind for the orders the moment formulas use.

use super::dd::DoubleDouble;
use super::gamma::ln_gamma;
use super::SeriesTolerance;
use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Above this argument `bessel_j_int` leaves the power series for Miller's
/// backward recurrence; below it the double-double series loses at most
/// about `e^z` of its 32 digits.
const SERIES_MAX_ARG: f64 = 30.0;

const RESCALE_AT: f64 = 1e250;

/// Starting index for backward recurrence so that index `n` is exact to
/// working precision.
fn miller_start(n: usize, z: f64) -> usize {
    let top = (n as f64).max(z);
    (top + (160.0 * top.max(1.0)).sqrt()).ceil() as usize + 16
}

/// Spherical Bessel function `j_n(z)` for `z > 0`.
///
/// Upward recurrence is stable while the order stays below the argument, so
/// it is used up to `min(n, ⌊z⌋)`. Past that point the values are fixed by a
/// backward (Miller) recurrence anchored on whichever of the last two
/// upward values is larger in magnitude.
pub(crate) fn spherical_jn(n: usize, z: f64) -> f64 {
    let (s, c) = z.sin_cos();
    let j0 = s / z;
    if n == 0 {
        return j0;
    }
    let m = z.floor() as usize;
    if m >= 1 {
        let mut prev = j0;
        let mut cur = (j0 - c) / z;
        if n == 1 {
            return cur;
        }
        let top = n.min(m);
        for l in 1..top {
            let next = (2 * l + 1) as f64 / z * cur - prev;
            prev = cur;
            cur = next;
        }
        if n <= m {
            return cur;
        }
        // cur = j_m, prev = j_{m-1}
        let (anchor_idx, anchor_val) = if cur.abs() >= prev.abs() {
            (m, cur)
        } else {
            (m - 1, prev)
        };
        backward_spherical(n, z, anchor_idx, anchor_val)
    } else {
        backward_spherical(n, z, 0, j0)
    }
}

fn backward_spherical(n: usize, z: f64, anchor_idx: usize, anchor_val: f64) -> f64 {
    let start = miller_start(n, z);
    let mut f_next = 0.0; // f_{l+1}
    let mut f = 1.0; // f_l
    let mut f_n = if start == n { f } else { 0.0 };
    let mut f_anchor = 0.0;
    let mut rescales_since_n = 0i32;
    let mut l = start;
    while l > anchor_idx {
        let f_prev = (2 * l + 1) as f64 / z * f - f_next;
        f_next = f;
        f = f_prev;
        l -= 1;
        if l == n {
            f_n = f;
            rescales_since_n = 0;
        }
        if f.abs() > RESCALE_AT {
            f /= RESCALE_AT;
            f_next /= RESCALE_AT;
            if l <= n {
                rescales_since_n += 1;
            } else {
                f_n /= RESCALE_AT;
            }
        }
        if l == anchor_idx {
            f_anchor = f;
        }
    }
    let mut v = anchor_val * (f_n / f_anchor);
    for _ in 0..rescales_since_n {
        v /= RESCALE_AT;
    }
    v
}

/// `J_{k-1/2}(z)` for integer `k ≥ 1` and `z > 0`.
pub fn bessel_j_half(k: u32, z: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::domain("bessel_j_half", "order index k must be >= 1"));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_j_half", format!("z = {z} must be finite and positive")));
    }
    Ok((2.0 * z / PI).sqrt() * spherical_jn((k - 1) as usize, z))
}

/// Power series `J_ν(z) = Σ (-1)^m (z/2)^{2m+ν} / (m! Γ(m+ν+1))` for real
/// `ν ≥ 0`, `z ≥ 0`, summed in double-double arithmetic.
pub fn bessel_j_series(nu: f64, z: f64, tol: SeriesTolerance) -> Result<f64> {
    if !(nu >= 0.0) || !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_j_series", format!("nu = {nu}, z = {z}")));
    }
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let q = DoubleDouble::from_f64(-0.25 * z * z);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ZERO;
    let mut max_term = 1.0f64;
    let half_z2 = 0.25 * z * z;
    for m in 0..tol.max_terms {
        sum = sum + term;
        let mf = m as f64;
        let den = DoubleDouble::from_f64(mf + 1.0) * DoubleDouble::from_f64(mf + 1.0 + nu);
        term = term * q / den;
        let t = term.abs().to_f64();
        max_term = max_term.max(t);
        let ratio = half_z2 / ((mf + 2.0) * (mf + 2.0 + nu));
        if ratio < 0.5 && mf + 1.0 > 0.5 * z {
            let tail = t / (1.0 - ratio);
            let s = sum.abs().to_f64();
            if tail <= tol.rel_tol * s || tail <= 1e-30 * max_term {
                let prefactor = (nu * (0.5 * z).ln() - ln_gamma(nu + 1.0)?).exp();
                return Ok(prefactor * (sum + term).to_f64());
            }
        }
    }
    Err(Error::NonConvergence {
        function: "bessel_j_series",
        max_terms: tol.max_terms,
    })
}

/// `J_n(z)` for integer `n ≥ 0`, `z ≥ 0`.
///
/// Power series for `z ≤ 30`; Miller's backward recurrence normalized by
/// `J_0 + 2 Σ J_{2k} = 1` beyond.
pub fn bessel_j_int(n: u32, z: f64, tol: SeriesTolerance) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_j_int", format!("z = {z} must be finite and >= 0")));
    }
    if z <= SERIES_MAX_ARG {
        return bessel_j_series(n as f64, z, tol);
    }
    Ok(miller_j_int(n as usize, z))
}

fn miller_j_int(n: usize, z: f64) -> f64 {
    let start = miller_start(n, z);
    let start = start + (start & 1); // even start keeps the normalization pairing simple
    let mut f_next = 0.0;
    let mut f = 1e-30;
    let mut norm = 0.0;
    let mut f_n = 0.0;
    if start == n {
        f_n = f;
    }
    if start % 2 == 0 {
        norm += 2.0 * f;
    }
    let mut l = start;
    while l > 0 {
        let f_prev = 2.0 * l as f64 / z * f - f_next;
        f_next = f;
        f = f_prev;
        l -= 1;
        if l == n {
            f_n = f;
        }
        if l == 0 {
            norm += f;
        } else if l % 2 == 0 {
            norm += 2.0 * f;
        }
        if f.abs() > RESCALE_AT {
            f /= RESCALE_AT;
            f_next /= RESCALE_AT;
            norm /= RESCALE_AT;
            if l >= n {
                f_n /= RESCALE_AT;
            }
        }
    }
    f_n / norm
}

/// Largest asymptotic order accepted by [`bessel_j0_asymptotic`].
pub const J0_ASYMPTOTIC_MAX_ORDER: u32 = 7;

/// `C_d` in `|R| ≤ C_d / (2z)^{2d}`, relative to `√(2/(πz))`, for
/// `d = 1..=7`. Each entry is twice the largest deviation observed against a
/// 40-digit reference over `z ∈ [1, 10³]` (601 log-spaced points).
const J0_REMAINDER_CONSTANTS: [f64; 7] = [0.57, 3.6, 74.0, 3110.0, 2.26e5, 2.49e7, 3.9e9];

/// Coefficient `a_j = Γ(j+1/2) / (2^j j! Γ(1/2-j))` of the Hankel expansion
/// of `J_0`, via `a_j / a_{j-1} = -(2j-1)² / (8j)`.
pub fn j0_asymptotic_coefficient(j: u32) -> f64 {
    let mut a = 1.0;
    for i in 1..=j {
        let t = (2 * i - 1) as f64;
        a *= -t * t / (8.0 * i as f64);
    }
    a
}

/// Hankel expansion of `J_0(z)` truncated after `d` terms in each of the
/// cosine and sine sums, together with a bound on the deviation from
/// `J_0(z)`.
///
/// The bound is `√(2/(πz)) (C_d / (2z)^{2d} + 64 ε)`; the second term is the
/// floor set by evaluating either side in double precision.
pub fn bessel_j0_asymptotic(z: f64, d: u32) -> Result<(f64, f64)> {
    if !(z >= 1.0) || !z.is_finite() {
        return Err(Error::domain("bessel_j0_asymptotic", format!("z = {z} must be >= 1")));
    }
    if d < 1 || d > J0_ASYMPTOTIC_MAX_ORDER {
        return Err(Error::domain(
            "bessel_j0_asymptotic",
            format!("order d = {d} outside 1..={J0_ASYMPTOTIC_MAX_ORDER}"),
        ));
    }
    let mut p = 0.0;
    let mut q = 0.0;
    let inv = 1.0 / z;
    let mut pow = 1.0;
    for j in 0..d {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        p += sign * j0_asymptotic_coefficient(2 * j) * pow;
        pow *= inv;
        q += sign * j0_asymptotic_coefficient(2 * j + 1) * pow;
        pow *= inv;
    }
    let (s, c) = z.sin_cos();
    // cos(z - π/4), sin(z - π/4) without rounding the shifted phase
    let cos_chi = (c + s) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    let amp = (2.0 / (PI * z)).sqrt();
    let value = amp * (cos_chi * p - sin_chi * q);
    let c_d = J0_REMAINDER_CONSTANTS[(d - 1) as usize];
    let bound = amp * (c_d * (2.0 * z).powi(-2 * d as i32) + 64.0 * f64::EPSILON);
    Ok((value, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::gamma_ln;
    use num_complex::Complex64;

    fn tol() -> SeriesTolerance {
        SeriesTolerance::default()
    }

    fn closed_half(z: f64) -> f64 {
        (2.0 / (PI * z)).sqrt() * z.sin()
    }

    #[test]
    fn half_order_closed_form() {
        for &z in &[0.01, 0.5, 2.0, 7.3, 40.0, 900.0] {
            let v = bessel_j_half(1, z).unwrap();
            assert!((v - closed_half(z)).abs() <= 1e-15 * (1.0 + z.sqrt()), "z = {z}");
        }
        // J_{1/2}(π) = 0
        assert!(bessel_j_half(1, PI).unwrap().abs() < 1e-15);
        // closed form against the power series
        for &z in &[0.3, 2.0, 9.0] {
            let s = bessel_j_series(0.5, z, tol()).unwrap();
            assert!((s - closed_half(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn three_halves_closed_form() {
        for &z in &[0.05, 0.9, 1.0, 3.0, 25.0] {
            let exact = (2.0 / (PI * z)).sqrt() * (z.sin() / z - z.cos());
            let v = bessel_j_half(2, z).unwrap();
            assert!((v - exact).abs() <= 1e-14 * exact.abs().max(1e-2), "z = {z}");
        }
    }

    #[test]
    fn small_argument_leading_term() {
        let z = 1e-3;
        let lead = (z / 2.0f64).powf(3.5) / ln_gamma(4.5).unwrap().exp();
        let v = bessel_j_half(4, z).unwrap();
        assert!((v / lead - 1.0).abs() <= 1e-5);
    }

    #[test]
    fn power_series_bound() {
        let (k, z) = (6u32, 2.0);
        let bound = (z / 2.0f64).powf(k as f64 - 0.5) / ln_gamma(k as f64 + 0.5).unwrap().exp();
        assert!(bessel_j_half(k, z).unwrap().abs() <= bound);
    }

    #[test]
    fn domain_errors() {
        assert!(bessel_j_half(3, 0.0).is_err());
        assert!(bessel_j_half(3, -1.0).is_err());
        assert!(bessel_j_half(0, 1.0).is_err());
        assert!(bessel_j0_asymptotic(0.5, 2).is_err());
        assert!(bessel_j0_asymptotic(5.0, 0).is_err());
    }

    #[test]
    fn recurrence_and_series_agree_across_regimes() {
        for k in 1..=60u32 {
            for &z in &[0.2, 1.0, 3.5, 10.0, 17.0, 29.0] {
                let a = bessel_j_half(k, z).unwrap();
                let b = bessel_j_series(k as f64 - 0.5, z, tol()).unwrap();
                let scale = a.abs().max(1e-300);
                assert!(
                    (a - b).abs() <= 1e-11 * scale || (a - b).abs() <= 1e-15,
                    "k = {k}, z = {z}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn large_order_small_argument_is_relatively_accurate() {
        // (z/2)^ν / Γ(ν+1) · Σ (-z²/4)^m / (m! (ν+1)_m), all terms positive-dominated here
        let (k, z) = (128u32, 3.0);
        let nu = k as f64 - 0.5;
        let lead = (nu * (z / 2.0f64).ln() - ln_gamma(nu + 1.0).unwrap()).exp();
        let (mut t, mut s) = (1.0, 0.0);
        for m in 0..30 {
            s += t;
            t *= -0.25 * z * z / ((m as f64 + 1.0) * (nu + m as f64 + 1.0));
        }
        let v = bessel_j_half(k, z).unwrap();
        assert!((v / (lead * s) - 1.0).abs() < 1e-12);
    }

    /// Values from a 40-digit evaluation of the defining series.
    #[test]
    fn frozen_reference_values() {
        let cases = [
            (6u32, 100.0, -0.074124664027219353),
            (30, 20.0, 0.00020246755025460768),
            (200, 1000.0, -0.012664385911469422),
            (50, 400.0, -0.023537323174719099),
        ];
        for (k, z, want) in cases {
            let v = bessel_j_half(k, z).unwrap();
            assert!((v - want).abs() <= 1e-11 * want.abs(), "k = {k}, z = {z}: {v} vs {want}");
        }
    }

    #[test]
    fn integer_order_basics() {
        assert_eq!(bessel_j_int(0, 0.0, tol()).unwrap(), 1.0);
        assert_eq!(bessel_j_int(1, 0.0, tol()).unwrap(), 0.0);
        assert!(bessel_j_int(0, 2.404_825_557_695_772_7, tol()).unwrap().abs() < 1e-9);
    }

    #[test]
    fn first_zero_of_j0_by_bisection() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if bessel_j_series(0.0, mid, tol()).unwrap() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_772_7).abs() < 1e-12);
    }

    #[test]
    fn miller_matches_series_at_switchover() {
        for n in [0u32, 1, 5, 11, 40] {
            for &z in &[12.0, 25.0, 29.5] {
                let s = bessel_j_series(n as f64, z, tol()).unwrap();
                let m = miller_j_int(n as usize, z);
                assert!((s - m).abs() < 1e-14, "n = {n}, z = {z}: {s} vs {m}");
            }
        }
    }

    #[test]
    fn integer_order_frozen_values() {
        let cases = [
            (0u32, 50.0, 0.055812327669251815),
            (1, 800.0, 0.026775138722323195),
            (11, 12.566370614359172, 0.29133796793896607),
        ];
        for (n, z, want) in cases {
            let v = bessel_j_int(n, z, tol()).unwrap();
            assert!((v - want).abs() <= 1e-13, "n = {n}, z = {z}: {v} vs {want}");
        }
    }

    #[test]
    fn asymptotic_coefficients_from_gamma() {
        assert_eq!(j0_asymptotic_coefficient(0), 1.0);
        assert_eq!(j0_asymptotic_coefficient(1), -0.125);
        for j in 0..8u32 {
            let num = gamma_ln(Complex64::new(j as f64 + 0.5, 0.0)).unwrap().exp();
            let den = gamma_ln(Complex64::new(0.5 - j as f64, 0.0)).unwrap().exp();
            let fact: f64 = (1..=j).map(|i| i as f64).product();
            let want = (num / den).re / (2f64.powi(j as i32) * fact);
            let got = j0_asymptotic_coefficient(j);
            assert!((got - want).abs() <= 1e-13 * want.abs(), "j = {j}");
        }
    }

    #[test]
    fn asymptotic_at_fifty() {
        let (v, _) = bessel_j0_asymptotic(50.0, 3).unwrap();
        let s = bessel_j_series(0.0, 50.0, SeriesTolerance::new(1e-15, 400).unwrap()).unwrap();
        assert!((v - s).abs() <= 1e-10);
    }

    #[test]
    fn asymptotic_remainder_is_dominated() {
        for d in 1..=3u32 {
            let mut z: f64 = 10.0;
            while z <= 1000.0 {
                let (v, bound) = bessel_j0_asymptotic(z, d).unwrap();
                let reference = bessel_j_int(0, z, tol()).unwrap();
                assert!((v - reference).abs() <= bound, "d = {d}, z = {z}");
                z *= 1.037;
            }
        }
    }
}
