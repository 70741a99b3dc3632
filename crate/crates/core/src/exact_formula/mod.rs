//! Exact formula for the harmonic twisted first moment
//! `Σ^h_f λ_f(l) L_f(1/2 + u + v)` over level-1 eigenforms of weight `2k`.
//!
//! The moment equals
//!
//! ```text
//! l^{-1/2-u-v} + i^{2k} (2π)^{2u+2v} Γ(k-u-v) / (l^{1/2-u-v} Γ(k+u+v)) + 2π i^{2k} V₁(l; u, v, k)
//! ```
//!
//! where `V₁` is a double series over moduli `c` and frequencies `n` coprime
//! to `c`, weighted by the kernel `I_ε` of [`kernel`]. [`series`] evaluates
//! `V₁` to a certified absolute tail.

pub mod kernel;
pub mod series;

pub use kernel::{i_central, i_central_legendre, i_general, Sign};
pub use series::{v1_error_series, v1_error_series_with_cutoff, v1_split, V1Series, V1Split};

use crate::error::{Error, Result};
use crate::specfun::{gamma_ln, SeriesTolerance};
use crate::ComplexValue;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// The parameter `k` of weight `2k`, with root number `ε_f = i^{2k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightParam {
    k: u32,
}

impl WeightParam {
    /// Smallest admissible weight `2k`.
    pub const MIN_WEIGHT: u32 = 12;

    pub fn new(k: u32) -> Result<Self> {
        if 2 * k < Self::MIN_WEIGHT {
            return Err(Error::Weight {
                weight: 2 * k as i64,
                detail: format!("weight must be >= {}", Self::MIN_WEIGHT),
            });
        }
        Ok(WeightParam { k })
    }

    /// From the weight `2k` itself.
    pub fn from_weight(weight: u32) -> Result<Self> {
        if weight % 2 != 0 {
            return Err(Error::Weight {
                weight: weight as i64,
                detail: "weight must be even".into(),
            });
        }
        Self::new(weight / 2)
    }

    #[inline]
    pub fn k(self) -> u32 {
        self.k
    }

    #[inline]
    pub fn weight(self) -> u32 {
        2 * self.k
    }

    /// `i^{2k} = (-1)^k`.
    #[inline]
    pub fn root_number(self) -> i32 {
        if self.k % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Shifts `(u, v)` away from the central point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftParams {
    pub u: ComplexValue,
    pub v: ComplexValue,
}

impl ShiftParams {
    pub fn central() -> Self {
        ShiftParams {
            u: ComplexValue::new(0.0, 0.0),
            v: ComplexValue::new(0.0, 0.0),
        }
    }

    pub fn new(u: ComplexValue, v: ComplexValue) -> Self {
        ShiftParams { u, v }
    }

    #[inline]
    pub fn is_central(&self) -> bool {
        self.u == ComplexValue::new(0.0, 0.0) && self.v == ComplexValue::new(0.0, 0.0)
    }

    /// `s = u + v`.
    #[inline]
    pub fn total(&self) -> ComplexValue {
        self.u + self.v
    }

    /// Checks `Re v = 0` and `|Re u| < k - 1`.
    pub fn validate(&self, w: WeightParam) -> Result<()> {
        let finite = [self.u, self.v]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite {
            return Err(Error::ShiftDomain {
                detail: "non-finite shift".into(),
            });
        }
        if self.v.re != 0.0 {
            return Err(Error::ShiftDomain {
                detail: format!("Re v = {} must be 0", self.v.re),
            });
        }
        if self.u.re.abs() >= w.k() as f64 - 1.0 {
            return Err(Error::ShiftDomain {
                detail: format!("|Re u| = {} must be < k - 1 = {}", self.u.re.abs(), w.k() - 1),
            });
        }
        Ok(())
    }
}

impl Default for ShiftParams {
    fn default() -> Self {
        Self::central()
    }
}

/// Cutoffs and tolerances for the `(c, n)` double sum and its kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    /// Absolute budget for the discarded tail of `V₁`.
    pub tail_target: f64,
    /// Largest admissible product `cn`.
    pub cn_hard_cap: u64,
    pub series_tol: SeriesTolerance,
    pub quad_tol: f64,
    /// Order `d` of the Hankel expansion used by the asymptotic diagnostics.
    pub asym_order_d: u32,
    /// Number of consecutive products `cn` per parallel work unit. Results
    /// are bit-identical for a fixed value regardless of thread count.
    pub chunk_size: u64,
}

impl TruncationParams {
    pub fn with_tail_target(tail_target: f64) -> Result<Self> {
        let t = TruncationParams {
            tail_target,
            ..Default::default()
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tail_target > 0.0) || !self.tail_target.is_finite() {
            return Err(Error::invalid(format!("tail_target = {} must be > 0", self.tail_target)));
        }
        if self.cn_hard_cap < 1 {
            return Err(Error::invalid("cn_hard_cap must be >= 1"));
        }
        if self.chunk_size < 1 {
            return Err(Error::invalid("chunk_size must be >= 1"));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::invalid(format!("quad_tol = {} must be > 0", self.quad_tol)));
        }
        if self.asym_order_d < 1 {
            return Err(Error::invalid("asym_order_d must be >= 1"));
        }
        SeriesTolerance::new(self.series_tol.rel_tol, self.series_tol.max_terms)?;
        Ok(())
    }
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            tail_target: 1e-12,
            cn_hard_cap: 20_000_000,
            series_tol: SeriesTolerance::default(),
            quad_tol: 1e-12,
            asym_order_d: 3,
            chunk_size: 1024,
        }
    }
}

/// The assembled moment and its parts.
///
/// `value = main_term_1 + main_term_2 + 2π i^{2k} v1_value` as assembled;
/// `certified_tail` bounds the contribution of the discarded `(c, n)` terms
/// to `value` (that is, `2π` times the tail of `V₁`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentResult {
    pub l: u64,
    pub weight: u32,
    pub value: ComplexValue,
    pub main_term_1: ComplexValue,
    pub main_term_2: ComplexValue,
    pub v1_value: ComplexValue,
    pub certified_tail: f64,
    /// Largest product `cn` included.
    pub cutoff: u64,
}

/// The two main terms `(l^{-1/2-s}, i^{2k}(2π)^{2s}Γ(k-s)/(l^{1/2-s}Γ(k+s)))`.
pub fn main_terms(l: u64, w: WeightParam, shift: &ShiftParams) -> Result<(ComplexValue, ComplexValue)> {
    let s = shift.total();
    let ln_l = (l as f64).ln();
    let m1 = (-(s + 0.5) * ln_l).exp();
    let k = ComplexValue::new(w.k() as f64, 0.0);
    let log_m2 = s * (2.0 * TAU.ln()) + gamma_ln(k - s)? - gamma_ln(k + s)? - (ComplexValue::new(0.5, 0.0) - s) * ln_l;
    let m2 = log_m2.exp() * w.root_number() as f64;
    Ok((m1, m2))
}

/// Exact twisted first moment at weight `2k`.
pub fn twisted_moment_exact(
    l: u64,
    w: WeightParam,
    shift: &ShiftParams,
    trunc: &TruncationParams,
) -> Result<MomentResult> {
    if l < 1 {
        return Err(Error::invalid("l must be >= 1"));
    }
    shift.validate(w)?;
    let (m1, m2) = main_terms(l, w, shift)?;
    let v1 = v1_error_series(l, w, shift, trunc)?;
    Ok(assemble(l, w, m1, m2, &v1))
}

pub(crate) fn assemble(l: u64, w: WeightParam, m1: ComplexValue, m2: ComplexValue, v1: &V1Series) -> MomentResult {
    let rn = w.root_number() as f64;
    let value = m1 + m2 + v1.value * (2.0 * PI * rn);
    MomentResult {
        l,
        weight: w.weight(),
        value,
        main_term_1: m1,
        main_term_2: m2,
        v1_value: v1.value,
        certified_tail: 2.0 * PI * v1.certified_tail,
        cutoff: v1.cutoff,
    }
}
