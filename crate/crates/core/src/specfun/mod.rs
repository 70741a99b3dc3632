//! Special functions: Gamma, `1F1`, Bessel `J`, Legendre polynomials, and
//! the quadrature and summation kernels they share.

pub mod bessel;
pub mod dd;
pub mod fit;
pub mod gamma;
pub mod hyp1f1;
pub mod legendre;
pub mod quad;
pub mod sum;

pub use bessel::{bessel_j0_asymptotic, bessel_j_half, bessel_j_int, bessel_j_series, j0_asymptotic_coefficient};
pub use fit::{linear_fit, log_log_fit, LineFit};
pub use gamma::{gamma, gamma_ln, ln_gamma};
pub use hyp1f1::hyp1f1;
pub use legendre::{bessel_half_via_legendre, legendre_p};
pub use quad::{integrate, QuadOptions, QuadResult};
pub use sum::{ComplexKahanSum, KahanSum};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Truncation control for power series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTolerance {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesTolerance {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::invalid(format!("rel_tol = {rel_tol} must lie in (0, 1)")));
        }
        if max_terms < 1 {
            return Err(Error::invalid("max_terms must be >= 1"));
        }
        Ok(SeriesTolerance { rel_tol, max_terms })
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        SeriesTolerance {
            rel_tol: 1e-14,
            max_terms: 2000,
        }
    }
}
