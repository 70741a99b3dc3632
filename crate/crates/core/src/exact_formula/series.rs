//! The error series
//!
//! ```text
//! V₁(l; u, v, k) = Σ_{c ≥ 1} Σ_{n ≥ 1, (n,c)=1} c^{-1/2-s} n^{-1/2+s} (2π)^{s-1/2}
//!     × [ e(n* l / c) e((1/2-s)/4) I_{-1}(u, v, k; cn/(2πl))
//!       + e(-n* l / c) e(-(1/2-s)/4) I_{+1}(u, v, k; cn/(2πl)) ],   s = u + v,
//! ```
//!
//! summed over all pairs with `cn ≤ D`. Pairs are grouped by `d = cn`: the
//! kernel depends on `d` only, and the coprime pairs with product `d` are the
//! splittings of `d` into complementary unitary divisors.
//!
//! The cutoff `D` is the smallest integer whose tail bound meets the target.
//! At the central point the bound uses `|J_ν(z)| ≤ (z/2)^ν / Γ(ν+1)`,
//! at most `d(d) ≤ 2√d` pairs per product, and an integral comparison for
//! `Σ_{d > D} d^{-p}`.

use super::kernel::{central_from_bessel, central_kernel_bound, eighth_root, i_general, Sign};
use super::{ShiftParams, TruncationParams, WeightParam};
use crate::arith::{additive_twist, mod_inverse, Modulus};
use crate::error::{Error, Result};
use crate::specfun::{bessel_j_half, gamma_ln, ln_gamma, ComplexKahanSum};
use crate::ComplexValue;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Truncated `V₁` with the certified bound on what was dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct V1Series {
    pub value: ComplexValue,
    /// Bound on `|Σ_{cn > cutoff} terms|`.
    pub certified_tail: f64,
    pub cutoff: u64,
    /// Number of `(c, n)` pairs summed.
    pub terms: u64,
}

/// `V₁` split by `z = πl/(cn)` against a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct V1Split {
    /// Terms with `z < threshold`.
    pub below: ComplexValue,
    /// Terms with `z ≥ threshold`.
    pub above: ComplexValue,
    pub threshold: f64,
    pub series: V1Series,
}

/// `Σ_{d > D} d^{-p} ≤ D^{1-p} / (p - 1)` for `D ≥ 1`, `p > 1`, in log form.
fn ln_power_tail(cutoff: u64, p: f64) -> f64 {
    (1.0 - p) * (cutoff as f64).ln() - (p - 1.0).ln()
}

/// Log of the constant `A` in `tail(D) ≤ A Σ_{d>D} d^{-p}` and the exponent `p`.
fn tail_constants(l: u64, w: WeightParam, shift: &ShiftParams, cutoff: u64) -> Result<(f64, f64)> {
    let k = w.k() as f64;
    let lf = l as f64;
    if shift.is_central() {
        // 2 branches · 2√d pairs · d^{-1/2} (2π)^{-1/2} · √π (πl/(2d))^{k-1/2} / Γ(k+1/2)
        let ln_a = 1.5 * 2f64.ln() + (k - 0.5) * (0.5 * PI * lf).ln() - ln_gamma(k + 0.5)?;
        return Ok((ln_a, k - 0.5));
    }
    let s = shift.total();
    if s.norm() > k {
        return Err(Error::ShiftDomain {
            detail: format!("|u + v| = {} exceeds k = {k}; no tail bound available", s.norm()),
        });
    }
    let sigma = s.re;
    let p = k - 0.5 - sigma.abs();
    if p <= 1.0 {
        return Err(Error::ShiftDomain {
            detail: format!("|Re u| = {} too close to k - 1 for a convergent tail bound", sigma.abs()),
        });
    }
    let ln_gamma_ratio = gamma_ln(ComplexValue::new(k, 0.0) - s)?.re - ln_gamma(2.0 * k)?;
    let ln_a = 4f64.ln()
        + (sigma - 0.5) * TAU.ln()
        + 0.5 * PI * s.im.abs()
        + (k - 0.5) * (TAU * lf).ln()
        + ln_gamma_ratio
        + TAU * lf / cutoff as f64;
    Ok((ln_a, p))
}

/// Certified bound on `Σ_{cn > cutoff} |terms of V₁|`.
pub fn tail_bound(l: u64, w: WeightParam, shift: &ShiftParams, cutoff: u64) -> Result<f64> {
    let cutoff = cutoff.max(1);
    let (ln_a, p) = tail_constants(l, w, shift, cutoff)?;
    Ok((ln_a + ln_power_tail(cutoff, p)).exp())
}

/// Smallest cutoff whose tail bound is at most `tail_target`.
pub fn required_cutoff(l: u64, w: WeightParam, shift: &ShiftParams, trunc: &TruncationParams) -> Result<u64> {
    let (ln_a, p) = tail_constants(l, w, shift, 1)?;
    let ln_d = (ln_a - (p - 1.0).ln() - trunc.tail_target.ln()) / (p - 1.0);
    let too_big = |needed: u64| Error::HardCapExceeded {
        needed,
        cap: trunc.cn_hard_cap,
        tail_target: trunc.tail_target,
    };
    if ln_d > (trunc.cn_hard_cap as f64).ln() + 1.0 {
        return Err(too_big(ln_d.exp().min(u64::MAX as f64) as u64));
    }
    let mut d = ln_d.exp().ceil().max(1.0) as u64;
    // the general-shift constant grows as the cutoff shrinks; walk up until it holds
    while tail_bound(l, w, shift, d)? > trunc.tail_target {
        d = d + d / 8 + 1;
        if d > trunc.cn_hard_cap {
            return Err(too_big(d));
        }
    }
    if d > trunc.cn_hard_cap {
        return Err(too_big(d));
    }
    Ok(d)
}

/// Smallest-prime-factor table on `0..=n`.
fn spf_sieve(n: u64) -> Vec<u32> {
    let n = n as usize;
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Prime-power components `p^e ∥ d`.
fn prime_powers(mut d: u64, spf: &[u32], out: &mut Vec<u64>) {
    out.clear();
    while d > 1 {
        let p = spf[d as usize] as u64;
        let mut q = 1;
        while d % p == 0 {
            d /= p;
            q *= p;
        }
        out.push(q);
    }
}

/// Per-product kernel values `(I_{-1}, I_{+1})` at `x = d/(2πl)`.
fn kernel_pair(
    l: u64,
    d: u64,
    w: WeightParam,
    shift: &ShiftParams,
    trunc: &TruncationParams,
) -> Result<(ComplexValue, ComplexValue)> {
    let x = d as f64 / (TAU * l as f64);
    if shift.is_central() {
        let z = PI * l as f64 / d as f64;
        let j = bessel_j_half(w.k(), z)?;
        let minus = central_from_bessel(Sign::Minus, w, z, j);
        let plus = central_from_bessel(Sign::Plus, w, z, j);
        debug_assert!(
            minus.norm() <= central_kernel_bound(w.k(), x) * (1.0 + 1e-10) + f64::MIN_POSITIVE,
            "kernel bound violated at d = {d}, l = {l}, k = {}",
            w.k()
        );
        Ok((minus, plus))
    } else {
        Ok((
            i_general(Sign::Minus, shift, w, x, trunc.series_tol)?,
            i_general(Sign::Plus, shift, w, x, trunc.series_tol)?,
        ))
    }
}

#[derive(Default, Clone, Copy)]
struct ChunkSum {
    below: ComplexKahanSum,
    above: ComplexKahanSum,
    terms: u64,
}

fn sum_chunk(
    l: u64,
    w: WeightParam,
    shift: &ShiftParams,
    trunc: &TruncationParams,
    spf: &[u32],
    range: std::ops::Range<u64>,
    threshold: f64,
) -> Result<ChunkSum> {
    let s = shift.total();
    let central = shift.is_central();
    // (2π)^{s-1/2}, e((1/2-s)/4) and e(-(1/2-s)/4)
    let pref = ((s - 0.5) * TAU.ln()).exp();
    let ph_minus_branch = eighth_root(1) * (ComplexValue::new(0.0, -0.5 * PI) * s).exp();
    let ph_plus_branch = eighth_root(-1) * (ComplexValue::new(0.0, 0.5 * PI) * s).exp();

    let mut acc = ChunkSum::default();
    let mut powers = Vec::with_capacity(16);
    for d in range {
        let z = PI * l as f64 / d as f64;
        let (i_minus, i_plus) = kernel_pair(l, d, w, shift, trunc)?;
        let a = i_minus * ph_minus_branch * pref;
        let b = i_plus * ph_plus_branch * pref;
        let central_coef = 1.0 / (d as f64).sqrt();

        prime_powers(d, spf, &mut powers);
        let mut group = ComplexKahanSum::new();
        for mask in 0u32..(1u32 << powers.len()) {
            let c: u64 = powers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &q)| q)
                .product();
            let n = d / c;
            let modulus = Modulus::new(c).expect("c >= 1");
            let n_star = mod_inverse(n as i64, modulus).expect("unitary split is coprime");
            let twist = additive_twist(n_star as i64, l as i64, modulus);
            let bracket = twist * a + twist.conj() * b;
            let coef = if central {
                ComplexValue::new(central_coef, 0.0)
            } else {
                (-(s + 0.5) * (c as f64).ln() - (ComplexValue::new(0.5, 0.0) - s) * (n as f64).ln()).exp()
            };
            group.add(coef * bracket);
            acc.terms += 1;
        }
        if z < threshold {
            acc.below.add(group.value());
        } else {
            acc.above.add(group.value());
        }
    }
    Ok(acc)
}

fn accumulate(
    l: u64,
    w: WeightParam,
    shift: &ShiftParams,
    trunc: &TruncationParams,
    cutoff: u64,
    threshold: f64,
) -> Result<(ComplexValue, ComplexValue, ComplexValue, u64)> {
    let spf = spf_sieve(cutoff);
    let chunk = trunc.chunk_size;
    let n_chunks = cutoff.div_ceil(chunk);
    let partials: Vec<Result<ChunkSum>> = (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let lo = 1 + i * chunk;
            let hi = (lo + chunk).min(cutoff + 1);
            sum_chunk(l, w, shift, trunc, &spf, lo..hi, threshold)
        })
        .collect();
    let mut below = ComplexKahanSum::new();
    let mut above = ComplexKahanSum::new();
    let mut total = ComplexKahanSum::new();
    let mut terms = 0;
    for p in partials {
        let p = p?;
        below.merge(&p.below);
        above.merge(&p.above);
        total.merge(&p.below);
        total.merge(&p.above);
        terms += p.terms;
    }
    Ok((total.value(), below.value(), above.value(), terms))
}

fn check_common(l: u64, w: WeightParam, shift: &ShiftParams, trunc: &TruncationParams) -> Result<()> {
    if l < 1 {
        return Err(Error::invalid("l must be >= 1"));
    }
    shift.validate(w)?;
    trunc.validate()
}

/// `V₁` truncated at the smallest certified cutoff for `trunc.tail_target`.
pub fn v1_error_series(l: u64, w: WeightParam, shift: &ShiftParams, trunc: &TruncationParams) -> Result<V1Series> {
    check_common(l, w, shift, trunc)?;
    let cutoff = required_cutoff(l, w, shift, trunc)?;
    v1_error_series_with_cutoff(l, w, shift, trunc, cutoff)
}

/// `V₁` truncated at an explicit cutoff `cn ≤ cutoff`.
pub fn v1_error_series_with_cutoff(
    l: u64,
    w: WeightParam,
    shift: &ShiftParams,
    trunc: &TruncationParams,
    cutoff: u64,
) -> Result<V1Series> {
    check_common(l, w, shift, trunc)?;
    let cutoff = cutoff.max(1);
    if cutoff > trunc.cn_hard_cap {
        return Err(Error::HardCapExceeded {
            needed: cutoff,
            cap: trunc.cn_hard_cap,
            tail_target: trunc.tail_target,
        });
    }
    let (value, _, _, terms) = accumulate(l, w, shift, trunc, cutoff, f64::INFINITY)?;
    Ok(V1Series {
        value,
        certified_tail: tail_bound(l, w, shift, cutoff)?,
        cutoff,
        terms,
    })
}

/// Central-point `V₁` split by `z = πl/(cn)` against `threshold`.
pub fn v1_split(l: u64, w: WeightParam, trunc: &TruncationParams, threshold: f64) -> Result<V1Split> {
    let shift = ShiftParams::central();
    check_common(l, w, &shift, trunc)?;
    let cutoff = required_cutoff(l, w, &shift, trunc)?;
    let (value, below, above, terms) = accumulate(l, w, &shift, trunc, cutoff, threshold)?;
    Ok(V1Split {
        below,
        above,
        threshold,
        series: V1Series {
            value,
            certified_tail: tail_bound(l, w, &shift, cutoff)?,
            cutoff,
            terms,
        },
    })
}
