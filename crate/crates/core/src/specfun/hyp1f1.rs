//! Kummer's confluent hypergeometric function by its power series.
//!
//! Terms are formed and accumulated in double-double arithmetic. For an
//! imaginary argument of modulus `y` the largest term can exceed the sum by
//! a factor of order `e^{y/2}`, and this keeps the result accurate to f64
//! precision well past the range where a plain f64 sum would lose half its
//! digits.

use super::dd::ComplexDD;
use super::SeriesTolerance;
use crate::error::{Error, Result};
use num_complex::Complex64;

fn nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `1F1(a; b; x) = Σ (a)_k / (b)_k · x^k / k!`.
pub fn hyp1f1(a: Complex64, b: Complex64, x: Complex64, tol: SeriesTolerance) -> Result<Complex64> {
    for (name, v) in [("a", a), ("b", b), ("x", x)] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::domain("hyp1f1", format!("non-finite {name} = {v}")));
        }
    }
    if nonpositive_integer(b) {
        return Err(Error::Pole {
            function: "hyp1f1 (Γ(b))",
            at: format!("b = {}", b.re),
        });
    }

    let a_dd = ComplexDD::from_c64(a);
    let b_dd = ComplexDD::from_c64(b);
    let x_dd = ComplexDD::from_c64(x);
    let x_abs = x.norm();

    let mut term = ComplexDD::ONE;
    let mut sum = ComplexDD::ZERO;
    for m in 0..tol.max_terms {
        sum = sum + term;
        let mf = m as f64;
        let num = (a_dd + ComplexDD::from_c64(Complex64::new(mf, 0.0))) * x_dd;
        let den = (b_dd + ComplexDD::from_c64(Complex64::new(mf, 0.0)))
            * ComplexDD::from_c64(Complex64::new(mf + 1.0, 0.0));
        term = term * num / den;

        let t = term.norm_f64();
        if t == 0.0 {
            return Ok(sum.to_c64());
        }
        let ratio = (a + mf + 1.0).norm() * x_abs / ((b + mf + 1.0).norm() * (mf + 2.0));
        let past_peak = mf + 1.0 > 2.0 * x_abs && ratio < 0.5;
        if past_peak {
            let tail = t / (1.0 - ratio);
            if tail <= tol.rel_tol * sum.norm_f64() {
                return Ok((sum + term).to_c64());
            }
        }
    }
    Err(Error::NonConvergence {
        function: "hyp1f1",
        max_terms: tol.max_terms,
    })
}
