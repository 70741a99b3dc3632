//! Residual checks of the analytic identities the library relies on.
//!
//! Each check evaluates both sides of an identity over a fixed grid and
//! reports the largest residual against a pinned threshold.

use crate::error::Result;
use crate::exact_formula::{i_central, i_central_legendre, i_general, ShiftParams, Sign, WeightParam};
use crate::specfun::{
    bessel_half_via_legendre, bessel_j0_asymptotic, bessel_j_half, bessel_j_int, gamma, hyp1f1, legendre_p, ln_gamma,
    SeriesTolerance,
};
use crate::ComplexValue;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Number of grid points evaluated.
    pub points: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(name: &str, residuals: &[f64], threshold: f64) -> Self {
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        IdentityCheck {
            name: name.to_string(),
            points: residuals.len(),
            max_residual,
            threshold,
            passed: residuals.iter().all(|r| r.is_finite()) && max_residual <= threshold,
        }
    }
}

/// `|Γ(2z) - π^{-1/2} 2^{2z-1} Γ(z) Γ(z+1/2)| / |Γ(2z)|` on 20 points with
/// `Re z ∈ [0.5, 10]`, `|Im z| ≤ 5`.
pub fn gamma_duplication() -> Result<IdentityCheck> {
    let mut r = Vec::new();
    for i in 0..20 {
        let z = ComplexValue::new(0.5 + 9.5 * (i as f64) / 19.0, -5.0 + 10.0 * ((i * 7) % 20) as f64 / 19.0);
        let lhs = gamma(2.0 * z)?;
        let rhs = gamma(z)? * gamma(z + 0.5)? * (ComplexValue::new(2.0, 0.0).powc(2.0 * z - 1.0) / PI.sqrt());
        r.push((lhs - rhs).norm() / lhs.norm());
    }
    Ok(IdentityCheck::new("gamma duplication", &r, 1e-12))
}

fn bessel_series_complex(nu: f64, z: ComplexValue) -> Result<ComplexValue> {
    let half = z / 2.0;
    let mut term = half.powf(nu) / ln_gamma(nu + 1.0)?.exp();
    let mut s = ComplexValue::new(0.0, 0.0);
    for m in 0..500 {
        s += term;
        let mf = m as f64;
        term = -term * half * half / ((mf + 1.0) * (mf + 1.0 + nu));
        if term.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    Ok(s)
}

/// `1F1(k, 2k; 2z) = Γ(k+1/2) e^z (z/2)^{1/2-k} e(ε(1/2-k)/4) J_{k-1/2}(z e(ε/4))`
/// for `k ∈ 2..=20`, `z ∈ {0.1, 0.5, 1, 2, 5, 10}`, `ε = ±1`.
pub fn confluent_bessel() -> Result<IdentityCheck> {
    let tol = SeriesTolerance::default();
    let mut r = Vec::new();
    for k in 2..=20u32 {
        let kf = k as f64;
        for &z in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let lhs = hyp1f1(ComplexValue::new(kf, 0.0), ComplexValue::new(2.0 * kf, 0.0), ComplexValue::new(2.0 * z, 0.0), tol)?;
            for eps in [1.0, -1.0] {
                let j = bessel_series_complex(kf - 0.5, ComplexValue::new(0.0, eps * z))?;
                let phase = ComplexValue::from_polar(1.0, 2.0 * PI * eps * (0.5 - kf) / 4.0);
                let pref = (ln_gamma(kf + 0.5)? + z + (0.5 - kf) * (z / 2.0).ln()).exp();
                r.push((lhs - phase * j * pref).norm() / lhs.norm());
            }
        }
    }
    Ok(IdentityCheck::new("1F1(k,2k;2z) Bessel form", &r, 1e-10))
}

/// Hypergeometric against Bessel form of `I_ε(0, 0, k; x)`, relative, on
/// `k ∈ 6..=20`, `x ∈ {0.05, …, 5}`.
pub fn kernel_routes() -> Result<IdentityCheck> {
    let tol = SeriesTolerance::default();
    let mut r = Vec::new();
    for k in 6..=20u32 {
        let w = WeightParam::new(k)?;
        for &x in &[0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
            for eps in Sign::BOTH {
                let g = i_general(eps, &ShiftParams::central(), w, x, tol)?;
                let c = i_central(eps, w, x)?;
                r.push((g - c).norm() / c.norm());
            }
        }
    }
    Ok(IdentityCheck::new("I_eps hypergeometric vs Bessel route", &r, 1e-9))
}

/// Legendre-integral against Bessel form of `I_ε(0, 0, k; 1/(2z))`,
/// absolute, on `k ∈ {6, 8, 12}`, `z ∈ {0.5, 2, 10}`.
pub fn kernel_legendre_route() -> Result<IdentityCheck> {
    let mut r = Vec::new();
    for &k in &[6u32, 8, 12] {
        let w = WeightParam::new(k)?;
        for &z in &[0.5, 2.0, 10.0] {
            for eps in Sign::BOTH {
                let q = i_central_legendre(eps, w, z, 1e-12)?;
                let c = i_central(eps, w, 1.0 / (2.0 * z))?;
                r.push((q - c).norm());
            }
        }
    }
    Ok(IdentityCheck::new("I_eps Legendre-integral route", &r, 1e-8))
}

/// `J_{n+1/2}` by the Legendre integral against the direct evaluation,
/// on `n ≤ 19`, `z ∈ {0.5, 2, 7, 20}`.
pub fn bessel_legendre_route() -> Result<IdentityCheck> {
    let mut r = Vec::new();
    for n in 0..20u32 {
        for &z in &[0.5, 2.0, 7.0, 20.0] {
            let q = bessel_half_via_legendre(n, z, 1e-12)?;
            r.push((q - bessel_j_half(n + 1, z)?).abs());
        }
    }
    Ok(IdentityCheck::new("J_{n+1/2} Legendre-integral route", &r, 1e-9))
}

/// `P_n(-x) = (-1)^n P_n(x)` for `n ≤ 60` on 21 points of `[0, 1]`.
pub fn legendre_parity() -> Result<IdentityCheck> {
    let mut r = Vec::new();
    for n in 0..=60u32 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            r.push((legendre_p(n, -x)? - sign * legendre_p(n, x)?).abs());
        }
    }
    Ok(IdentityCheck::new("Legendre parity", &r, 1e-14))
}

/// Largest `|J₀(z) - Hankel_d(z)| / bound_d(z)` over 61 log-spaced
/// `z ∈ [10, 10³]` and `d ∈ {1, 2, 3}`; passes when at most 1.
pub fn j0_remainder() -> Result<IdentityCheck> {
    let tol = SeriesTolerance::default();
    let mut r = Vec::new();
    for i in 0..=60 {
        let z = 10f64.powf(1.0 + 2.0 * i as f64 / 60.0);
        let exact = bessel_j_int(0, z, tol)?;
        for d in 1..=3 {
            let (v, bound) = bessel_j0_asymptotic(z, d)?;
            r.push((v - exact).abs() / bound);
        }
    }
    Ok(IdentityCheck::new("J0 Hankel remainder within bound", &r, 1.0))
}

/// All checks, in a fixed order.
pub fn identity_suite() -> Result<Vec<IdentityCheck>> {
    Ok(vec![
        gamma_duplication()?,
        confluent_bessel()?,
        kernel_routes()?,
        kernel_legendre_route()?,
        bessel_legendre_route()?,
        legendre_parity()?,
        j0_remainder()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for c in identity_suite().unwrap() {
            assert!(c.passed, "{c:?}");
        }
    }
}
