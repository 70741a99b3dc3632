//! The kernel `I_ε(u, v, k; x)` and its three evaluation routes.
//!
//! * [`i_general`]: the confluent hypergeometric definition, valid for any
//!   admissible shift.
//! * [`i_central`]: the closed Bessel form at `u = v = 0`; this is what the
//!   error series uses.
//! * [`i_central_legendre`]: a Legendre-polynomial integral at `u = v = 0`
//!   for even `k`.
//!
//! Phases `e(m/8)` are taken from an exact table of eighth roots of unity so
//! that only the residual exponential carries rounding.

use super::{ShiftParams, WeightParam};
use crate::error::{Error, Result};
use crate::specfun::legendre::legendre_p_unchecked;
use crate::specfun::{bessel_j_half, gamma_ln, hyp1f1, integrate, ln_gamma, QuadOptions, SeriesTolerance};
use crate::ComplexValue;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `ε = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    #[inline]
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// `e(j/8)` for integer `j`.
pub(crate) fn eighth_root(j: i64) -> ComplexValue {
    let h = FRAC_1_SQRT_2;
    match j.rem_euclid(8) {
        0 => ComplexValue::new(1.0, 0.0),
        1 => ComplexValue::new(h, h),
        2 => ComplexValue::new(0.0, 1.0),
        3 => ComplexValue::new(-h, h),
        4 => ComplexValue::new(-1.0, 0.0),
        5 => ComplexValue::new(-h, -h),
        6 => ComplexValue::new(0.0, -1.0),
        _ => ComplexValue::new(h, -h),
    }
}

/// `e(ε/8 - εk/4) = e(ε(1 - 2k)/8)`.
#[inline]
fn leading_phase(eps: Sign, k: u32) -> ComplexValue {
    eighth_root(eps.value() * (1 - 2 * k as i64))
}

fn check_x(x: f64, function: &'static str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(function, format!("x = {x} must be finite and positive")));
    }
    Ok(())
}

/// `I_ε(u, v, k; x) = e(ε/8 - εk/4) x^{1/2-k} Γ(k-u-v)/Γ(2k) · 1F1(k-u-v; 2k; -e(-ε/4)/x)`.
///
/// Powers and Gamma ratios are combined in log space; `-e(-ε/4) = iε`
/// exactly.
pub fn i_general(
    eps: Sign,
    shift: &ShiftParams,
    w: WeightParam,
    x: f64,
    tol: SeriesTolerance,
) -> Result<ComplexValue> {
    shift.validate(w)?;
    check_x(x, "i_general")?;
    let k = w.k() as f64;
    let a = ComplexValue::new(k, 0.0) - shift.total();
    let b = ComplexValue::new(2.0 * k, 0.0);
    let log_pref = (0.5 - k) * x.ln() + gamma_ln(a)? - ln_gamma(2.0 * k)?;
    let arg = ComplexValue::new(0.0, eps.value() as f64 / x);
    let f = hyp1f1(a, b, arg, tol)?;
    Ok(leading_phase(eps, w.k()) * log_pref.exp() * f)
}

/// `I_ε(0, 0, k; x) = e(ε/8) √π e(ε/(4πx)) e(-εk/4) J_{k-1/2}(1/(2x))`.
pub fn i_central(eps: Sign, w: WeightParam, x: f64) -> Result<ComplexValue> {
    check_x(x, "i_central")?;
    let z = 0.5 / x;
    let j = bessel_j_half(w.k(), z)?;
    Ok(central_from_bessel(eps, w, z, j))
}

/// `I_ε(0, 0, k; 1/(2z))` from a precomputed `J_{k-1/2}(z)`.
#[inline]
pub(crate) fn central_from_bessel(eps: Sign, w: WeightParam, z: f64, j: f64) -> ComplexValue {
    let residual = ComplexValue::from_polar(1.0, eps.value() as f64 * z);
    leading_phase(eps, w.k()) * residual * (PI.sqrt() * j)
}

/// `√π (4x)^{1/2-k} / Γ(k+1/2)`, the bound on `|I_ε(0, 0, k; x)|` that
/// follows from `|J_ν(z)| ≤ (z/2)^ν / Γ(ν+1)`.
pub fn central_kernel_bound(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    let ln_gamma_k = ln_gamma(kf + 0.5).expect("k >= 1");
    (0.5 * PI.ln() + (0.5 - kf) * (4.0 * x).ln() - ln_gamma_k).exp()
}

/// `I_ε(0, 0, k; 1/(2z)) = -e(ε/8) e(εz/(2π)) √(2z) ∫₀^{π/2} sin(z cos θ) P_{k-1}(cos θ) sin θ dθ`
/// for even `k`.
pub fn i_central_legendre(eps: Sign, w: WeightParam, z: f64, quad_tol: f64) -> Result<ComplexValue> {
    if w.k() % 2 != 0 {
        return Err(Error::Weight {
            weight: w.weight() as i64,
            detail: "the Legendre route needs k even".into(),
        });
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("i_central_legendre", format!("z = {z} must be positive")));
    }
    let degree = w.k() - 1;
    let scale = (2.0 * z).sqrt();
    let opts = QuadOptions::with_abs_tol(0.5 * quad_tol / scale)
        .panel_width(2.0 * PI / (degree as f64 + 0.5 + z));
    let integral = integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            (z * c).sin() * legendre_p_unchecked(degree, c) * s
        },
        0.0,
        0.5 * PI,
        opts,
    )?
    .value;
    let residual = ComplexValue::from_polar(1.0, eps.value() as f64 * z);
    Ok(-eighth_root(eps.value()) * residual * (scale * integral))
}
