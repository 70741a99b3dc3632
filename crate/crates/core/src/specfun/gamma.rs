//! Log-Gamma on the complex plane via shifted Stirling series.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `B_{2j} / (2j (2j - 1))` for `j = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// Below this modulus the argument is shifted upward before Stirling.
const SHIFT_RADIUS: f64 = 15.0;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    for &c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr * inv
}

/// Principal-branch `ln Γ(z)`.
///
/// Reflection is used for `Re z < 1/2`; there the imaginary part may differ
/// from the continuous branch by a multiple of `2π`, which leaves `exp` of
/// the result unchanged.
pub fn gamma_ln(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("gamma_ln", format!("non-finite argument {z}")));
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("{}", z.re),
        });
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        let lg = gamma_ln(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - s.ln() - lg);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x} must be finite and positive")));
    }
    let mut w = x;
    let mut shift = 0.0;
    while w < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    for &c in STIRLING.iter().rev() {
        corr = corr * inv2 + c;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr * inv - shift)
}

/// `Γ(z)` for complex `z`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(gamma_ln(z)?.exp())
}
