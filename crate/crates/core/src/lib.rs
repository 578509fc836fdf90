//! Numerical laboratory for composition operators `C_φ f = f ∘ φ` on the
//! Hardy space `H²` of Dirichlet series, for symbols `φ(s) = c₁ + c₂·q^{-s}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_functions`]: certified `ζ(s)`, log-moment Dirichlet sums and
//!   the closed-form comparison functions bounding `ζ` from below.
//! * [`symbol`]: the symbol itself, its validity class, fixed point and the
//!   spectrum of the induced operator.
//! * [`bounds`]: the Schur radius, two-sided norm bounds, the
//!   reproducing-kernel lower bound and the approximation-number bound.
//! * [`operator_matrix`]: the explicit matrix of `C_φ`, truncation tails,
//!   norm and singular-value estimation, and a numerical Schur certificate.
//! * [`verify`] and [`figure`]: inequality grid suites and plot data.

pub mod bounds;
pub mod error;
pub mod figure;
pub mod operator_matrix;
pub mod special_functions;
pub mod symbol;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
