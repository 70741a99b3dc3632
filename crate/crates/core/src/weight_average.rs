//! Weight averages of the twisted moment.
//!
//! `M₁(l) = Σ_k h(4k/K) Σ^h_{f ∈ H_{4k}} λ_f(l) L_f(1/2)` is assembled from
//! the exact formula at every weight `4k` in the support of `h(·/K)`, and
//! compared with the main term `(2/√l)(HK/4)`, `H = ∫ h`. Also here: the
//! Poisson-summation check for `Σ_k h(4k/K)`, the split of `V₁` at
//! `z = πl/(cn) = k/5`, least-squares error exponents, and the
//! Iwaniec–Sarnak mollifier.

use crate::arith::{mobius, sigma};
use crate::error::{Error, Result};
use crate::exact_formula::{
    twisted_moment_exact, v1_split, MomentResult, ShiftParams, TruncationParams, V1Series, WeightParam,
};
use crate::specfun::{integrate, log_log_fit, KahanSum, QuadOptions};
use crate::ComplexValue;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Smooth non-negative `h` supported on `[θ₁, θ₂]`, with `H = ∫ h`.
#[derive(Clone)]
pub struct TestFunction {
    pub theta1: f64,
    pub theta2: f64,
    evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    h_integral: f64,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("theta1", &self.theta1)
            .field("theta2", &self.theta2)
            .field("H", &self.h_integral)
            .finish()
    }
}

fn check_interval(theta1: f64, theta2: f64) -> Result<()> {
    if !(theta1 > 0.0 && theta2 > theta1 && theta2.is_finite()) {
        return Err(Error::invalid(format!("need 0 < θ₁ < θ₂, got [{theta1}, {theta2}]")));
    }
    Ok(())
}

fn bump(theta1: f64, theta2: f64, y: f64) -> f64 {
    if y <= theta1 || y >= theta2 {
        return 0.0;
    }
    (-1.0 / ((y - theta1) * (theta2 - y))).exp()
}

const H_QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-17,
    rel_tol: 1e-14,
    max_panel_width: None,
    max_panels: 20_000,
};

impl TestFunction {
    /// Wraps an arbitrary evaluator; values outside `[θ₁, θ₂]` are ignored.
    pub fn custom(theta1: f64, theta2: f64, evaluator: Arc<dyn Fn(f64) -> f64 + Send + Sync>) -> Result<Self> {
        check_interval(theta1, theta2)?;
        let e = evaluator.clone();
        let h_integral = integrate(move |y| e(y), theta1, theta2, H_QUAD)?.value;
        Ok(TestFunction {
            theta1,
            theta2,
            evaluator,
            h_integral,
        })
    }

    /// `h(y)`; zero off `[θ₁, θ₂]`.
    pub fn eval(&self, y: f64) -> f64 {
        if y <= self.theta1 || y >= self.theta2 {
            return 0.0;
        }
        (self.evaluator)(y)
    }

    /// `H = ∫₀^∞ h(y) dy`.
    pub fn h_integral(&self) -> f64 {
        self.h_integral
    }

    /// `c · h`.
    pub fn scaled(&self, c: f64) -> Self {
        let e = self.evaluator.clone();
        TestFunction {
            theta1: self.theta1,
            theta2: self.theta2,
            evaluator: Arc::new(move |y| c * e(y)),
            h_integral: c * self.h_integral,
        }
    }
}

/// `exp(-1/((y - θ₁)(θ₂ - y)))` on `(θ₁, θ₂)`, unnormalized.
pub fn make_bump(theta1: f64, theta2: f64) -> Result<TestFunction> {
    check_interval(theta1, theta2)?;
    TestFunction::custom(theta1, theta2, Arc::new(move |y| bump(theta1, theta2, y)))
}

/// Taylor coefficients `h^{(j)}(y)/j!`, `j = 0..=n`, of the bump at `y`.
fn bump_taylor(theta1: f64, theta2: f64, y: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    if y <= theta1 || y >= theta2 {
        return out;
    }
    // q(y + t) = q0 + q1 t - t², g = -1/q, h = exp(g)
    let q = [(y - theta1) * (theta2 - y), theta1 + theta2 - 2.0 * y, -1.0];
    let mut inv = vec![0.0; n + 1];
    inv[0] = 1.0 / q[0];
    for j in 1..=n {
        let mut s = 0.0;
        for i in 1..=j.min(2) {
            s += q[i] * inv[j - i];
        }
        inv[j] = -s / q[0];
    }
    let g: Vec<f64> = inv.iter().map(|v| -v).collect();
    out[0] = g[0].exp();
    for j in 1..=n {
        let mut s = 0.0;
        for i in 1..=j {
            s += i as f64 * g[i] * out[j - i];
        }
        out[j] = s / j as f64;
    }
    out
}

/// `‖h^{(j)}‖₁` for `j = 0..=n` of the bump on `[θ₁, θ₂]`.
pub fn bump_derivative_l1_norms(theta1: f64, theta2: f64, n: usize) -> Result<Vec<f64>> {
    check_interval(theta1, theta2)?;
    let mut fact = 1.0;
    let mut norms = Vec::with_capacity(n + 1);
    for j in 0..=n {
        if j > 0 {
            fact *= j as f64;
        }
        let opts = QuadOptions {
            max_panel_width: Some((theta2 - theta1) / 64.0),
            ..H_QUAD
        };
        let q = integrate(|y| fact * bump_taylor(theta1, theta2, y, j)[j].abs(), theta1, theta2, opts)?;
        norms.push(q.value);
    }
    Ok(norms)
}

/// Upper bounds on `‖h^{(j)}‖₁`, `j = 0..=4`, for the bump on `[1, 2]`.
pub const REFERENCE_BUMP_DERIVATIVE_BOUNDS: [f64; 5] = [0.01, 0.04, 0.6, 12.0, 350.0];

/// Weights `4k` with `4k/K ∈ (θ₁, θ₂)`, with their values `h(4k/K)`.
fn support_weights(h: &TestFunction, big_k: f64) -> Vec<(u32, f64)> {
    let lo = (big_k * h.theta1 / 4.0).floor().max(1.0) as u64;
    let hi = (big_k * h.theta2 / 4.0).ceil() as u64;
    (lo..=hi)
        .filter_map(|k| {
            let v = h.eval(4.0 * k as f64 / big_k);
            (v != 0.0).then_some(((4 * k) as u32, v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonCheck {
    /// `Σ_k h(4k/K)`.
    pub lhs: f64,
    /// `HK/4`.
    pub main: f64,
    pub defect: f64,
    /// `defect · K^a`.
    pub scaled_defect: f64,
}

/// `Σ_k h(4k/K)` against `HK/4`.
pub fn poisson_check(h: &TestFunction, big_k: f64, a: u32) -> Result<PoissonCheck> {
    if !(big_k > 0.0) || !big_k.is_finite() {
        return Err(Error::invalid(format!("K = {big_k} must be positive")));
    }
    let lhs: f64 = support_weights(h, big_k).iter().map(|&(_, v)| v).sum::<KahanSum>().value();
    let main = h.h_integral() * big_k / 4.0;
    let defect = (lhs - main).abs();
    Ok(PoissonCheck {
        lhs,
        main,
        defect,
        scaled_defect: defect * big_k.powi(a as i32),
    })
}

/// `M₁(l)` with its main term and certificates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageResult {
    #[serde(rename = "K")]
    pub big_k: f64,
    pub l: u64,
    pub value: f64,
    /// Imaginary part of the assembled sum; zero up to rounding.
    pub value_imag: f64,
    pub main_term: f64,
    pub abs_error: f64,
    /// `Σ h(4k/K) · certified_tail(4k)`.
    pub certified_tail_total: f64,
    /// `Σ h(4k/K) |moment(4k)|`, the scale of accumulated rounding.
    pub abs_sum: f64,
    pub weights: usize,
}

impl AverageResult {
    /// Level below which `abs_error` carries no information.
    pub fn noise_floor(&self) -> f64 {
        self.certified_tail_total + 64.0 * f64::EPSILON * self.abs_sum
    }
}

/// Per-weight exact moments in the support, in increasing weight.
pub fn weight_moments(l: u64, big_k: f64, h: &TestFunction, trunc: &TruncationParams) -> Result<Vec<(f64, MomentResult)>> {
    let weights = support_weights(h, big_k);
    if let Some(&(w, _)) = weights.iter().find(|(w, _)| *w < 12) {
        return Err(Error::Weight {
            weight: w as i64,
            detail: format!("K = {big_k} puts weights below 12 in the support"),
        });
    }
    weights
        .par_iter()
        .map(|&(w, hv)| {
            let wp = WeightParam::from_weight(w)?;
            twisted_moment_exact(l, wp, &ShiftParams::central(), trunc).map(|m| (hv, m))
        })
        .collect()
}

/// `M₁(l) = Σ_k h(4k/K) · twisted_moment_exact(l, 4k)`.
pub fn averaged_moment(l: u64, big_k: f64, h: &TestFunction, trunc: &TruncationParams) -> Result<AverageResult> {
    if l < 1 {
        return Err(Error::invalid("l must be >= 1"));
    }
    if !(big_k > 0.0) || !big_k.is_finite() {
        return Err(Error::invalid(format!("K = {big_k} must be positive")));
    }
    let moments = weight_moments(l, big_k, h, trunc)?;
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut tail = KahanSum::new();
    let mut abs_sum = KahanSum::new();
    for (hv, m) in &moments {
        re.add(hv * m.value.re);
        im.add(hv * m.value.im);
        tail.add(hv * m.certified_tail);
        abs_sum.add(hv * m.value.norm());
    }
    let main_term = 2.0 / (l as f64).sqrt() * h.h_integral() * big_k / 4.0;
    let value = re.value();
    Ok(AverageResult {
        big_k,
        l,
        value,
        value_imag: im.value(),
        main_term,
        abs_error: (value - main_term).abs(),
        certified_tail_total: tail.value(),
        abs_sum: abs_sum.value(),
        weights: moments.len(),
    })
}

/// `V₁` split at `z = πl/(cn)` against `k/5`, where the weight is `4k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitDiagnostics {
    /// Terms with `z < k/5`.
    pub w1: ComplexValue,
    /// Terms with `z ≥ k/5`.
    pub w2: ComplexValue,
    pub threshold: f64,
    pub v1: V1Series,
}

/// The split threshold `k/5` for weight `4k`.
pub fn split_threshold(w: WeightParam) -> f64 {
    w.weight() as f64 / 20.0
}

/// `true` when every term of `V₁` has `z = πl/(cn) < k/5`.
pub fn w2_is_empty(l: u64, w: WeightParam) -> bool {
    PI * (l as f64) < split_threshold(w)
}

pub fn split_diagnostics(l: u64, w: WeightParam, trunc: &TruncationParams) -> Result<SplitDiagnostics> {
    let threshold = split_threshold(w);
    let s = v1_split(l, w, trunc, threshold)?;
    Ok(SplitDiagnostics {
        w1: s.below,
        w2: s.above,
        threshold,
        v1: s.series,
    })
}

/// `l^{1/2+0.1} k^{-1} (e/20)^{2k}` for weight `4k`.
pub fn w1_bound_shape(l: u64, w: WeightParam) -> f64 {
    let k = w.weight() as f64 / 4.0;
    ((l as f64).ln() * 0.6 - k.ln() + 2.0 * k * (std::f64::consts::E / 20.0).ln()).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitStatus {
    Fitted,
    /// Fewer than two errors exceed ten times their noise floor.
    BelowFloor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub status: FitStatus,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    /// The `K` values that entered the fit.
    pub used: Vec<f64>,
    pub points: Vec<AverageResult>,
}

/// Errors must exceed this multiple of the noise floor to enter a fit.
pub const FIT_FLOOR_FACTOR: f64 = 10.0;

/// Least-squares slope of `ln abs_error` against `ln K`.
pub fn error_exponent_fit(l: u64, k_list: &[f64], h: &TestFunction, trunc: &TruncationParams) -> Result<ExponentFit> {
    if k_list.len() < 3 {
        return Err(Error::invalid("need at least three K values"));
    }
    if k_list.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("K values must be strictly increasing"));
    }
    let points = k_list
        .iter()
        .map(|&k| averaged_moment(l, k, h, trunc))
        .collect::<Result<Vec<_>>>()?;
    fit_points(points)
}

/// The fit of [`error_exponent_fit`] on precomputed averages.
pub fn fit_points(points: Vec<AverageResult>) -> Result<ExponentFit> {
    let (x, y): (Vec<f64>, Vec<f64>) = points
        .iter()
        .filter(|p| p.abs_error > FIT_FLOOR_FACTOR * p.noise_floor())
        .map(|p| (p.big_k, p.abs_error))
        .unzip();
    if x.len() < 2 {
        return Ok(ExponentFit {
            status: FitStatus::BelowFloor,
            slope: None,
            intercept: None,
            used: x,
            points,
        });
    }
    let fit = log_log_fit(&x, &y)?;
    Ok(ExponentFit {
        status: FitStatus::Fitted,
        slope: Some(fit.slope),
        intercept: Some(fit.intercept),
        used: x,
        points,
    })
}

/// Which reading of `(log M/log m)²` in the mollifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MollifierReading {
    /// `(log(M/m))²`.
    #[default]
    LogRatio,
    /// `(log M / log m)²`; at `m = 1` the `LogRatio` value is used.
    RatioOfLogs,
}

/// `x_m = μ(m) m P(m) / (σ(m) 2ζ(2) log M)` for `m = 1..=M`; index 0 unused.
pub fn mollifier_coeffs(big_m: u64, reading: MollifierReading) -> Result<Vec<f64>> {
    if big_m < 2 {
        return Err(Error::invalid("mollifier length M must be >= 2"));
    }
    let log_m = (big_m as f64).ln();
    let zeta2 = PI * PI / 6.0;
    let mut x = vec![0.0; big_m as usize + 1];
    for m in 1..=big_m {
        let mu = mobius(m);
        if mu == 0 {
            continue;
        }
        let p = match reading {
            MollifierReading::LogRatio => (big_m as f64 / m as f64).ln().powi(2),
            MollifierReading::RatioOfLogs if m == 1 => log_m * log_m,
            MollifierReading::RatioOfLogs => (log_m / (m as f64).ln()).powi(2),
        };
        x[m as usize] = mu as f64 * m as f64 * p / (sigma(m) as f64 * 2.0 * zeta2 * log_m);
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MollifiedMoment {
    pub big_m: u64,
    #[serde(rename = "K")]
    pub big_k: f64,
    /// `Σ_{m≤M} (x_m/√m) M₁(m)`.
    pub value: f64,
    /// `H K`.
    pub hk: f64,
    pub certified_tail_total: f64,
}

/// `Σ_{m ≤ M} (x_m/√m) M₁(m)`.
pub fn mollified_first_moment(
    big_m: u64,
    big_k: f64,
    h: &TestFunction,
    trunc: &TruncationParams,
    reading: MollifierReading,
) -> Result<MollifiedMoment> {
    let x = mollifier_coeffs(big_m, reading)?;
    let terms = (1..=big_m)
        .filter(|&m| x[m as usize] != 0.0)
        .map(|m| averaged_moment(m, big_k, h, trunc).map(|a| (m, a)))
        .collect::<Result<Vec<_>>>()?;
    let mut value = KahanSum::new();
    let mut tail = KahanSum::new();
    for (m, a) in &terms {
        let c = x[*m as usize] / (*m as f64).sqrt();
        value.add(c * a.value);
        tail.add(c.abs() * a.certified_tail_total);
    }
    Ok(MollifiedMoment {
        big_m,
        big_k,
        value: value.value(),
        hk: h.h_integral() * big_k,
        certified_tail_total: tail.value(),
    })
}

/// `Δ/(Δ + 1)`.
pub fn nonvanishing_proportion(delta: f64) -> Result<f64> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::invalid(format!("Δ = {delta} must be positive")));
    }
    Ok(delta / (delta + 1.0))
}
