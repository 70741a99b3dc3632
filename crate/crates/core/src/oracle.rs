//! Brute-force twisted moments in the one-dimensional weights.
//!
//! For `2k ∈ {12, 16, 18, 20, 22, 26}` the space of level-1 cusp forms is
//! spanned by a single eigenform `f = E₄^a E₆^b Δ`, so the harmonic average
//! of `λ_f(l) L_f(1/2)` collapses to `ω_f λ_f(l) L_f(1/2)`. Each factor is
//! computed independently of the exact formula:
//!
//! * `λ_f(n)` from exact integer q-expansions,
//! * `ω_f` from the Petersson formula at `m = n = 1`,
//!   `ω = 1 + 2π i^{-2k} Σ_c S(1, 1; c)/c · J_{2k-1}(4π/c)`,
//! * `L_f(1/2)` from an approximate functional equation.
//!
//! # Approximate functional equation
//!
//! With `Λ(s) = (2π)^{-s} Γ(s + k - 1/2) L(s) = ε Λ(1 - s)`, shifting the
//! contour of `(2πi)^{-1} ∫ Λ(1/2 + w) X^w dw/w` from `Re w = 2` to
//! `Re w = -2` and applying the functional equation gives
//!
//! ```text
//! L(1/2) = Σ_n λ(n)/√n · [ Q(k, 2πn/X) + ε Q(k, 2πnX) ],
//! ```
//!
//! where `Q(k, x) = Γ(k, x)/Γ(k)` is the regularized upper incomplete Gamma
//! function. The value does not depend on `X > 0`, which is the built-in
//! consistency check. Using `|λ(n)| ≤ d(n) ≤ 2√n` and the monotonicity of
//! `Q`, the tail beyond `N` is at most `4k Q(k+1, aN)/a` with
//! `a = 2π / max(X, 1/X)`.

use crate::arith::{kloosterman, Modulus};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j_int, ln_gamma, KahanSum, SeriesTolerance};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::io::{BufRead, Write};
use std::path::Path;

/// Weights whose level-1 cusp space is one-dimensional.
pub const SUPPORTED_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Exact q-expansion of the normalized eigenform of a supported weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QExpansion {
    pub weight: u32,
    /// `a(n)` for `n = 0..=length`, with `a(0) = 0` and `a(1) = 1`.
    pub coefficients: Vec<BigInt>,
    /// `λ(n) = a(n)/n^{(2k-1)/2}`, indexed like `coefficients`.
    pub lambda: Vec<f64>,
    pub length: usize,
}

impl QExpansion {
    fn from_coefficients(weight: u32, coefficients: Vec<BigInt>) -> Self {
        let length = coefficients.len() - 1;
        let half = (weight as f64 - 1.0) / 2.0;
        let lambda = coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n == 0 {
                    0.0
                } else {
                    a.to_f64().expect("coefficient fits in f64") / (n as f64).powf(half)
                }
            })
            .collect();
        QExpansion {
            weight,
            coefficients,
            lambda,
            length,
        }
    }

    /// `λ(n)` for `1 ≤ n ≤ length`.
    pub fn lambda_at(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.length {
            return Err(Error::InsufficientLength {
                length: self.length,
                detail: format!("λ({n}) requested"),
            });
        }
        Ok(self.lambda[n])
    }

    /// Writes the integer table: a header line, then `a(1), …, a(length)`.
    pub fn write_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# weight {} length {}", self.weight, self.length)?;
        for a in &self.coefficients[1..] {
            writeln!(out, "{a}")?;
        }
        Ok(())
    }

    /// Reads a table written by [`QExpansion::write_table`].
    pub fn read_table<R: BufRead>(input: R) -> Result<Self> {
        let bad = |d: String| Error::invalid(format!("q-expansion table: {d}"));
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .map_err(|e| bad(e.to_string()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (weight, length) = match fields.as_slice() {
            ["#", "weight", w, "length", n] => (
                w.parse::<u32>().map_err(|e| bad(e.to_string()))?,
                n.parse::<usize>().map_err(|e| bad(e.to_string()))?,
            ),
            _ => return Err(bad(format!("malformed header {header:?}"))),
        };
        let mut coefficients = Vec::with_capacity(length + 1);
        coefficients.push(BigInt::zero());
        for line in lines {
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            coefficients.push(line.trim().parse::<BigInt>().map_err(|e| bad(e.to_string()))?);
        }
        if coefficients.len() != length + 1 {
            return Err(bad(format!("expected {length} coefficients, found {}", coefficients.len() - 1)));
        }
        Ok(QExpansion::from_coefficients(weight, coefficients))
    }
}

/// Product of two power series truncated to exponents `0..=n`.
fn mul_truncated(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n + 1];
    for (i, ai) in a.iter().enumerate().take(n + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n + 1 - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// `∏_{m ≥ 1} (1 - q^m)` through exponent `n`, by Euler's pentagonal theorem.
fn euler_product(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1i64.. {
        let g1 = (m * (3 * m - 1) / 2) as usize;
        if g1 > n {
            break;
        }
        let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        p[g1] += &sign;
        let g2 = (m * (3 * m + 1) / 2) as usize;
        if g2 <= n {
            p[g2] += &sign;
        }
    }
    p
}

fn eisenstein(n: usize, constant: i64, power: u32) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n + 1];
    e[0] = BigInt::one();
    for (m, slot) in e.iter_mut().enumerate().skip(1) {
        let s: BigInt = (1..=m as u64)
            .filter(|d| m as u64 % d == 0)
            .map(|d| BigInt::from(d).pow(power))
            .sum();
        *slot = s * constant;
    }
    e
}

/// Series of `Δ = q ∏(1 - q^m)^{24}` through exponent `n`.
fn delta_series(n: usize) -> Vec<BigInt> {
    let p = euler_product(n);
    let p2 = mul_truncated(&p, &p, n);
    let p4 = mul_truncated(&p2, &p2, n);
    let p8 = mul_truncated(&p4, &p4, n);
    let p16 = mul_truncated(&p8, &p8, n);
    let p24 = mul_truncated(&p16, &p8, n);
    let mut d = vec![BigInt::zero(); n + 1];
    for i in 1..=n {
        d[i] = p24[i - 1].clone();
    }
    d
}

/// `τ(n)` for `n ≤ length`, as the weight-12 expansion.
pub fn delta_q_expansion(length: usize) -> Result<QExpansion> {
    if length < 1 {
        return Err(Error::invalid("q-expansion length must be >= 1"));
    }
    Ok(QExpansion::from_coefficients(12, delta_series(length)))
}

/// The normalized eigenform `E₄^a E₆^b Δ` of a supported weight.
pub fn eigenform_q_expansion(weight: u32, length: usize) -> Result<QExpansion> {
    if length < 1 {
        return Err(Error::invalid("q-expansion length must be >= 1"));
    }
    let (a, b) = match weight {
        12 => (0, 0),
        16 => (1, 0),
        18 => (0, 1),
        20 => (2, 0),
        22 => (1, 1),
        26 => (2, 1),
        _ => {
            return Err(Error::Weight {
                weight: weight as i64,
                detail: format!("cusp space is not one-dimensional; supported: {SUPPORTED_WEIGHTS:?}"),
            })
        }
    };
    let mut f = delta_series(length);
    if a > 0 {
        let e4 = eisenstein(length, 240, 3);
        for _ in 0..a {
            f = mul_truncated(&f, &e4, length);
        }
    }
    if b > 0 {
        let e6 = eisenstein(length, -504, 5);
        f = mul_truncated(&f, &e6, length);
    }
    Ok(QExpansion::from_coefficients(weight, f))
}

/// Loads the expansion from `dir` if a long enough table is there, otherwise
/// computes it and writes the table.
pub fn cached_eigenform(weight: u32, length: usize, dir: &Path) -> Result<QExpansion> {
    let path = dir.join(format!("eigenform_w{weight}.txt"));
    if let Ok(file) = std::fs::File::open(&path) {
        if let Ok(q) = QExpansion::read_table(std::io::BufReader::new(file)) {
            if q.weight == weight && q.length >= length {
                return Ok(q);
            }
        }
    }
    let q = eigenform_q_expansion(weight, length)?;
    let io = |e: std::io::Error| Error::invalid(format!("cache {}: {e}", path.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let file = std::fs::File::create(&path).map_err(io)?;
    q.write_table(std::io::BufWriter::new(file)).map_err(io)?;
    Ok(q)
}

/// The Petersson harmonic weight of the unique eigenform of a weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicWeight {
    pub weight: u32,
    pub omega: f64,
    pub c_max: u64,
    /// Bound on the dropped Kloosterman terms `c > c_max`.
    pub tail_bound: f64,
}

/// `ω = 1 + 2π i^{-2k} Σ_{c ≤ c_max} S(1,1;c)/c · J_{2k-1}(4π/c)`.
///
/// The tail uses `|S(1,1;c)| ≤ c` and `|J_ν(z)| ≤ (z/2)^ν/ν!`.
pub fn harmonic_weight(weight: u32, c_max: u64) -> Result<HarmonicWeight> {
    if !SUPPORTED_WEIGHTS.contains(&weight) {
        return Err(Error::Weight {
            weight: weight as i64,
            detail: format!("cusp space is not one-dimensional; supported: {SUPPORTED_WEIGHTS:?}"),
        });
    }
    if c_max < 1 {
        return Err(Error::invalid("c_max must be >= 1"));
    }
    let nu = weight - 1;
    let sign = if weight % 4 == 0 { 1.0 } else { -1.0 };
    let tol = SeriesTolerance::default();
    let mut s = KahanSum::new();
    for c in 1..=c_max {
        let kl = kloosterman(1, 1, Modulus::new(c)?);
        s.add(kl / c as f64 * bessel_j_int(nu, 4.0 * PI / c as f64, tol)?);
    }
    let nu_f = nu as f64;
    let ln_tail =
        TAU.ln() + nu_f * TAU.ln() - ln_gamma(nu_f + 1.0)? - (nu_f - 1.0) * (c_max as f64).ln() - (nu_f - 1.0).ln();
    Ok(HarmonicWeight {
        weight,
        omega: 1.0 + TAU * sign * s.value(),
        c_max,
        tail_bound: ln_tail.exp(),
    })
}

/// `Q(k, x) = e^{-x} Σ_{j<k} x^j/j!` for integer `k ≥ 1`, `x ≥ 0`.
pub fn upper_gamma_regularized(k: u32, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let lx = x.ln();
    let mut s = KahanSum::new();
    let mut ln_fact = 0.0;
    for j in 0..k {
        if j > 0 {
            ln_fact += (j as f64).ln();
        }
        s.add((-x + j as f64 * lx - ln_fact).exp());
    }
    s.value()
}

/// `L_f(1/2)` with its certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentralValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Number of coefficients summed.
    pub terms: usize,
    pub smoothing: f64,
}

fn afe_tail(k: u32, a: f64, n: usize) -> f64 {
    4.0 * k as f64 * upper_gamma_regularized(k + 1, a * n as f64) / a
}

/// `L_f(1/2)` by the approximate functional equation with smoothing `X = 1`.
pub fn l_central_value(f: &QExpansion, tail_target: f64) -> Result<CentralValue> {
    l_central_value_smoothed(f, tail_target, 1.0)
}

/// `L_f(1/2)` by the approximate functional equation with smoothing `X`.
pub fn l_central_value_smoothed(f: &QExpansion, tail_target: f64, smoothing: f64) -> Result<CentralValue> {
    if !(tail_target > 0.0) {
        return Err(Error::invalid("tail_target must be positive"));
    }
    if !(smoothing > 0.0) || !smoothing.is_finite() {
        return Err(Error::invalid("smoothing parameter must be positive and finite"));
    }
    if f.weight % 4 == 2 {
        return Ok(CentralValue {
            value: 0.0,
            tail_bound: 0.0,
            terms: 0,
            smoothing,
        });
    }
    let k = f.weight / 2;
    let a = TAU / smoothing.max(1.0 / smoothing);
    let mut n = 1;
    while afe_tail(k, a, n) > tail_target {
        n += 1;
        if n > f.length {
            return Err(Error::InsufficientLength {
                length: f.length,
                detail: format!("tail target {tail_target:e} needs more than {} coefficients", f.length),
            });
        }
    }
    let mut s = KahanSum::new();
    for m in 1..=n {
        let x = m as f64;
        let g = upper_gamma_regularized(k, TAU * x / smoothing) + upper_gamma_regularized(k, TAU * x * smoothing);
        s.add(f.lambda[m] / x.sqrt() * g);
    }
    Ok(CentralValue {
        value: s.value(),
        tail_bound: afe_tail(k, a, n),
        terms: n,
        smoothing,
    })
}

/// `ω_f λ_f(l) L_f(1/2)` with its error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleMoment {
    pub l: u64,
    pub weight: u32,
    pub value: f64,
    /// Bound from the AFE tail and the dropped Petersson terms.
    pub tail_bound: f64,
    pub omega: f64,
    pub lambda_l: f64,
    pub central_value: f64,
}

/// Tail target for the oracle's own series.
pub const ORACLE_TAIL_TARGET: f64 = 1e-14;
/// Petersson cutoff used by [`brute_force_twisted_moment`].
pub const ORACLE_C_MAX: u64 = 60;

/// Brute-force moment from precomputed ingredients.
pub fn brute_force_from_parts(l: u64, f: &QExpansion, hw: &HarmonicWeight, lv: &CentralValue) -> Result<OracleMoment> {
    if f.weight != hw.weight {
        return Err(Error::invalid("q-expansion and harmonic weight differ in weight"));
    }
    let lambda_l = f.lambda_at(l as usize)?;
    let value = hw.omega * lambda_l * lv.value;
    let tail_bound =
        hw.omega.abs() * lambda_l.abs() * lv.tail_bound + hw.tail_bound * (lambda_l * lv.value).abs() + 4.0 * f64::EPSILON * value.abs();
    Ok(OracleMoment {
        l,
        weight: f.weight,
        value,
        tail_bound,
        omega: hw.omega,
        lambda_l,
        central_value: lv.value,
    })
}

/// `Σ^h λ_f(l) L_f(1/2)` over the single eigenform of a supported weight.
pub fn brute_force_twisted_moment(l: u64, weight: u32) -> Result<OracleMoment> {
    if l < 1 {
        return Err(Error::invalid("l must be >= 1"));
    }
    let f = eigenform_q_expansion(weight, (l as usize).max(100))?;
    let hw = harmonic_weight(weight, ORACLE_C_MAX)?;
    let lv = l_central_value(&f, ORACLE_TAIL_TARGET)?;
    brute_force_from_parts(l, &f, &hw, &lv)
}
