//! Twisted first moments of central L-values of level-1 holomorphic cusp forms.
//!
//! The crate evaluates the harmonic average of `λ_f(l) L_f(1/2 + u + v)` over
//! the Hecke eigenforms of a fixed weight through an exact formula (two main
//! terms plus a rapidly convergent error series over moduli `c` and twisted
//! frequencies `n`), averages it over weights with a smooth test function,
//! and cross-checks everything against a brute-force oracle assembled from
//! explicit q-expansions in the one-dimensional weights.
//!
//! Layout:
//!
//! * [`specfun`]: Gamma, `1F1`, Bessel `J` (half-integer and integer order),
//!   Legendre polynomials, adaptive quadrature.
//! * [`arith`]: modular inverses, additive characters, Kloosterman sums,
//!   Möbius and divisor functions.
//! * [`exact_formula`]: the kernel `I_ε`, the error series `V₁` with a
//!   certified truncation bound, and the assembled moment.
//! * [`identities`]: residual checks of the identities behind the above.
//! * [`legendre_asym`]: uniform Bessel-type asymptotics of `P_n(cos θ)`.
//! * [`weight_average`]: test functions, weight averages, the `W₁/W₂`
//!   split, mollifier coefficients and error-exponent fits.
//! * [`oracle`]: exact q-expansions, Petersson harmonic weights and an
//!   approximate functional equation for `L_f(1/2)`.

pub mod arith;
pub mod error;
pub mod exact_formula;
pub mod identities;
pub mod legendre_asym;
pub mod oracle;
pub mod specfun;
pub mod weight_average;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;
