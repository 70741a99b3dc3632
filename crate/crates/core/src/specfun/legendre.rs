//! Legendre polynomials and the Legendre-integral route to `J_{n+1/2}`.

use super::quad::{integrate, QuadOptions};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// `P_n(x)` by the three-term recurrence.
pub fn legendre_p(n: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain("legendre_p", format!("|x| = {} exceeds 1", x.abs())));
    }
    Ok(legendre_p_unchecked(n, x))
}

#[inline]
pub(crate) fn legendre_p_unchecked(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Largest `n` accepted by [`bessel_half_via_legendre`].
pub const LEGENDRE_ROUTE_MAX_DEGREE: u32 = 200;

/// `J_{n+1/2}(z) = (-i)^n √(z/2π) ∫₀^π e^{iz cos θ} P_n(cos θ) sin θ dθ`.
///
/// Both parts of the integral are computed; after multiplying by `(-i)^n`
/// the imaginary part is zero up to quadrature error and is dropped.
pub fn bessel_half_via_legendre(n: u32, z: f64, quad_tol: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain("bessel_half_via_legendre", format!("z = {z} must be positive")));
    }
    if n > LEGENDRE_ROUTE_MAX_DEGREE {
        return Err(Error::domain(
            "bessel_half_via_legendre",
            format!("degree {n} above {LEGENDRE_ROUTE_MAX_DEGREE}"),
        ));
    }
    let prefactor = (z / (2.0 * PI)).sqrt();
    // scale the tolerance so the final value meets quad_tol
    let opts = QuadOptions::with_abs_tol(0.5 * quad_tol / prefactor)
        .panel_width(2.0 * PI / (n as f64 + 0.5 + z));
    let re = integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            (z * c).cos() * legendre_p_unchecked(n, c) * s
        },
        0.0,
        PI,
        opts,
    )?
    .value;
    let im = integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            (z * c).sin() * legendre_p_unchecked(n, c) * s
        },
        0.0,
        PI,
        opts,
    )?
    .value;
    // (-i)^n (re + i im)
    let value = match n % 4 {
        0 => re,
        1 => im,
        2 => -re,
        _ => -im,
    };
    Ok(prefactor * value)
}
