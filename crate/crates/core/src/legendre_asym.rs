//! Uniform Bessel-type asymptotics of `P_n(cos θ)` (Baratella–Gatteschi).
//!
//! With `N = n + 1/2`,
//!
//! ```text
//! P_n(cos θ) = √(θ/sin θ) [ J₀(Nθ) Σ_{s≤m} A_s(θ)/N^{2s}
//!                          + θ J₁(Nθ) Σ_{s<m} B_s(θ)/N^{2s+1} + E_m ],
//! ```
//!
//! with `A₀ ≡ 1`, `θ B_s = -A_s'/2 + (1/2)∫₀^θ f A_s`, and
//! `A_{s+1} = θ B_s'/2 - (1/2)∫₀^θ t f B_s + λ_{s+1}`,
//! `f(t) = 1/(4t²) - 1/(16 sin²(t/2)) - 1/(16 cos²(t/2)) = 1/(4t²) - 1/(4 sin² t)`.
//!
//! Only `m ≤ 1` is implemented. Differentiating `θ B₀ = (1/2)∫₀^θ f` gives
//! `B₀' = (f/2 - B₀)/θ`, hence `A₁ = f/4 - B₀/2 - (1/2)∫₀^θ t f B₀ + λ₁`;
//! the first two terms cancel at `θ = 0` (both tend to `-1/48`), so `λ₁ = 0`.

use crate::error::{Error, Result};
use crate::specfun::{bessel_j_int, integrate, legendre_p, log_log_fit, LineFit, QuadOptions, SeriesTolerance};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Exclusion width at `θ = π`.
pub const DELTA: f64 = 0.1;
/// Lower edge `c/N` of the scanned range, with `c = 1`.
pub const SMALL_THETA_C: f64 = 1.0;
/// Below this `f` and its integrals switch to Taylor series.
pub const TAYLOR_SWITCH: f64 = 1e-2;
/// Nodes of the default interpolation grid.
pub const DEFAULT_NODES: usize = 128;

/// Taylor coefficients of `f` in powers of `t²`.
const F_TAYLOR: [f64; 4] = [-1.0 / 12.0, -1.0 / 60.0, -1.0 / 378.0, -1.0 / 2700.0];

const QUAD_TOL: f64 = 1e-15;

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: QUAD_TOL,
        rel_tol: 1e-14,
        ..Default::default()
    }
}

fn check_theta(theta: f64, function: &'static str) -> Result<()> {
    if !(theta > 0.0 && theta <= PI - DELTA) {
        return Err(Error::domain(function, format!("θ = {theta} outside (0, π - {DELTA}]")));
    }
    Ok(())
}

fn f_taylor(t: f64) -> f64 {
    let t2 = t * t;
    F_TAYLOR.iter().rev().fold(0.0, |acc, c| acc * t2 + c)
}

/// `f(t) = 1/(4t²) - 1/(4 sin² t)` for `0 ≤ t < π`; `f(0) = -1/12`.
pub fn f_bg(t: f64) -> Result<f64> {
    if !(t >= 0.0 && t < PI) {
        return Err(Error::domain("f_bg", format!("t = {t} outside [0, π)")));
    }
    if t < TAYLOR_SWITCH {
        return Ok(f_taylor(t));
    }
    let s = t.sin();
    Ok(0.25 / (t * t) - 0.25 / (s * s))
}

fn f_unchecked(t: f64) -> f64 {
    f_bg(t).unwrap_or(f64::NAN)
}

/// `B₀(θ) = (1/(2θ)) ∫₀^θ f(t) dt`.
pub fn bg_b0(theta: f64) -> Result<f64> {
    check_theta(theta, "bg_b0")?;
    b0_raw(theta)
}

fn b0_raw(theta: f64) -> Result<f64> {
    if theta < TAYLOR_SWITCH {
        let t2 = theta * theta;
        let mut s = 0.0;
        for (j, c) in F_TAYLOR.iter().enumerate().rev() {
            s = s * t2 + c / (2 * j + 1) as f64;
        }
        return Ok(0.5 * s);
    }
    let q = integrate(f_unchecked, 0.0, theta, quad_opts())?;
    Ok(q.value / (2.0 * theta))
}

/// `A₁(θ) = f/4 - B₀/2 - (1/2)∫₀^θ t f(t) B₀(t) dt`.
pub fn bg_a1(theta: f64) -> Result<f64> {
    check_theta(theta, "bg_a1")?;
    let head = if theta < TAYLOR_SWITCH {
        // f/4 - B₀/2 = Σ f_j θ^{2j} · 2j / (4(2j+1)); the j = 0 terms cancel exactly
        let t2 = theta * theta;
        let mut s = 0.0;
        for (j, c) in F_TAYLOR.iter().enumerate().skip(1).rev() {
            s = s * t2 + c * (2 * j) as f64 / (4 * (2 * j + 1)) as f64;
        }
        s * t2
    } else {
        f_unchecked(theta) / 4.0 - b0_raw(theta)? / 2.0
    };
    let inner_err = std::cell::RefCell::new(None);
    let integrand = |t: f64| match b0_raw(t) {
        Ok(b) => t * f_unchecked(t) * b,
        Err(e) => {
            inner_err.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let q = integrate(integrand, 0.0, theta, quad_opts());
    if let Some(e) = inner_err.into_inner() {
        return Err(e);
    }
    Ok(head - 0.5 * q?.value + LAMBDA1)
}

/// `λ₁`, fixed by `A₁(0) = 0`.
pub const LAMBDA1: f64 = 0.0;

/// `B₀` and `A₁` tabulated on Chebyshev points of `[0, π - δ]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BGCoefficients {
    pub theta_grid: Vec<f64>,
    pub b0_values: Vec<f64>,
    pub a1_values: Vec<f64>,
    pub lambda1: f64,
    weights: Vec<f64>,
}

impl BGCoefficients {
    /// Tabulates on `nodes` Chebyshev points of the first kind.
    pub fn build(nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::invalid("need at least two interpolation nodes"));
        }
        let b = PI - DELTA;
        let mut theta_grid = Vec::with_capacity(nodes);
        let mut weights = Vec::with_capacity(nodes);
        // increasing order: j = nodes-1 .. 0 of cos((2j+1)π/(2n))
        for i in 0..nodes {
            let j = nodes - 1 - i;
            let phi = (2 * j + 1) as f64 * PI / (2 * nodes) as f64;
            theta_grid.push(0.5 * b * (1.0 + phi.cos()));
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            weights.push(sign * phi.sin());
        }
        let b0_values = theta_grid.iter().map(|&t| bg_b0(t)).collect::<Result<Vec<_>>>()?;
        let a1_values = theta_grid.iter().map(|&t| bg_a1(t)).collect::<Result<Vec<_>>>()?;
        Ok(BGCoefficients {
            theta_grid,
            b0_values,
            a1_values,
            lambda1: LAMBDA1,
            weights,
        })
    }

    fn interpolate(&self, values: &[f64], theta: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&x, &w), &v) in self.theta_grid.iter().zip(&self.weights).zip(values) {
            let d = theta - x;
            if d == 0.0 {
                return v;
            }
            num += w / d * v;
            den += w / d;
        }
        num / den
    }

    pub fn b0(&self, theta: f64) -> Result<f64> {
        if theta == 0.0 {
            return Ok(F_TAYLOR[0] / 2.0);
        }
        check_theta(theta, "BGCoefficients::b0")?;
        Ok(self.interpolate(&self.b0_values, theta))
    }

    pub fn a1(&self, theta: f64) -> Result<f64> {
        if theta == 0.0 {
            return Ok(self.lambda1);
        }
        check_theta(theta, "BGCoefficients::a1")?;
        Ok(self.interpolate(&self.a1_values, theta))
    }
}

/// Shared table on [`DEFAULT_NODES`] nodes, built on first use.
pub fn default_coefficients() -> Result<&'static BGCoefficients> {
    static TABLE: OnceLock<std::result::Result<BGCoefficients, Error>> = OnceLock::new();
    TABLE
        .get_or_init(|| BGCoefficients::build(DEFAULT_NODES))
        .as_ref()
        .map_err(Clone::clone)
}

/// Approximation of `P_n(cos θ)` of order `m ∈ {0, 1}`.
pub fn legendre_bg_approx(n: u32, theta: f64, m: u32) -> Result<f64> {
    legendre_bg_approx_with(default_coefficients()?, n, theta, m)
}

/// As [`legendre_bg_approx`] with an explicit coefficient table.
pub fn legendre_bg_approx_with(coeffs: &BGCoefficients, n: u32, theta: f64, m: u32) -> Result<f64> {
    Ok(theta_factor(theta) * bracket(coeffs, n, theta, m)?)
}

fn theta_factor(theta: f64) -> f64 {
    (theta / theta.sin()).sqrt()
}

fn bracket(coeffs: &BGCoefficients, n: u32, theta: f64, m: u32) -> Result<f64> {
    if n < 1 {
        return Err(Error::invalid("degree n must be >= 1"));
    }
    if m > 1 {
        return Err(Error::invalid(format!("order m = {m} not implemented (m ∈ {{0, 1}})")));
    }
    check_theta(theta, "legendre_bg_approx")?;
    let big_n = n as f64 + 0.5;
    let z = big_n * theta;
    let tol = SeriesTolerance::default();
    let j0 = bessel_j_int(0, z, tol)?;
    if m == 0 {
        return Ok(j0);
    }
    let j1 = bessel_j_int(1, z, tol)?;
    let a1 = coeffs.a1(theta)?;
    let b0 = coeffs.b0(theta)?;
    Ok(j0 * (1.0 + a1 / (big_n * big_n)) + theta * j1 * b0 / big_n)
}

/// One measured remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgScanRow {
    pub n: u32,
    pub theta: f64,
    /// `|P_n(cos θ)/√(θ/sin θ) - bracket|`, the remainder `|E_m|`.
    pub error: f64,
    /// `|E_m| / (θ^{1/2} N^{-2m-3/2})`.
    pub scaled: f64,
}

/// Slope of `ln|E_m|` against `ln N` at one `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BgThetaFit {
    pub theta: f64,
    pub fit: LineFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BgScan {
    pub m: u32,
    pub rows: Vec<BgScanRow>,
    /// One fit per `θ` with at least two degrees; empty when every error is 0.
    pub fits: Vec<BgThetaFit>,
}

/// Measures `|E_m|` against [`legendre_p`] on `n_list × theta_grid`.
pub fn bg_error_scan(n_list: &[u32], theta_grid: &[f64], m: u32) -> Result<BgScan> {
    let coeffs = default_coefficients()?;
    let mut rows = Vec::with_capacity(n_list.len() * theta_grid.len());
    for &theta in theta_grid {
        for &n in n_list {
            let approx = bracket(coeffs, n, theta, m)?;
            let exact = legendre_p(n, theta.cos())? / theta_factor(theta);
            let error = (exact - approx).abs();
            let big_n = n as f64 + 0.5;
            let scale = theta.sqrt() * big_n.powf(-2.0 * m as f64 - 1.5);
            rows.push(BgScanRow {
                n,
                theta,
                error,
                scaled: error / scale,
            });
        }
    }
    let mut fits = Vec::new();
    if n_list.len() >= 2 {
        for &theta in theta_grid {
            let (x, y): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|r| r.theta == theta)
                .map(|r| (r.n as f64 + 0.5, r.error))
                .unzip();
            if let Ok(fit) = log_log_fit(&x, &y) {
                fits.push(BgThetaFit { theta, fit });
            }
        }
    }
    Ok(BgScan { m, rows, fits })
}
