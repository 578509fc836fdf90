//! Certified evaluations of `ζ(s)` and related Dirichlet sums on `s > 1`,
//! plus the closed-form functions that bound `ζ` from below.
//!
//! All error bounds account for truncation; rounding is covered by a small
//! `O(N·ε)` allowance, which is adequate for tolerances down to about 1e-13.

mod incgamma;
mod log_moment;
mod zeta;

pub use incgamma::{ln_factorial, ln_log_power_integral, ln_upper_gamma};
pub use log_moment::{
    ln_log_moment_prefactor, log_moment_majorant, log_moment_sum, log_moment_tail,
    log_power_integral, weighted_log_moment_tail,
};
pub use zeta::zeta;

use crate::error::{Error, Result};

/// `1/√(2π)`.
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// The window on which the `f = g` crossing is bracketed.
pub const CROSSING_WINDOW: (f64, f64) = (0.1, 10.0);

/// Tolerances and term limits governing every summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionBudget {
    abs_tol: f64,
    rel_tol: f64,
    max_terms: usize,
}

impl PrecisionBudget {
    pub const MIN_TERMS: usize = 16;

    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol.is_finite() && abs_tol > 0.0) {
            return Err(Error::InvalidBudget("abs_tol must be positive and finite"));
        }
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(Error::InvalidBudget("rel_tol must be positive and finite"));
        }
        if max_terms < Self::MIN_TERMS {
            return Err(Error::InvalidBudget("max_terms must be at least 16"));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_terms,
        })
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    /// Admissible error for a quantity of size `value`.
    pub fn target(&self, value: f64) -> f64 {
        f64::max(self.abs_tol, self.rel_tol * value.abs())
    }
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_terms: 10_000_000,
        }
    }
}

/// A value with a certified bound `|true − value| ≤ error_bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifiedValue {
    pub value: f64,
    pub error_bound: f64,
}

impl CertifiedValue {
    pub fn new(value: f64, error_bound: f64) -> Self {
        debug_assert!(error_bound >= 0.0);
        Self { value, error_bound }
    }

    /// A value known exactly (up to rounding of the representation).
    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

fn check_positive(name: &'static str, x: f64, allow_zero: bool) -> Result<()> {
    let ok = x.is_finite() && (x > 0.0 || (allow_zero && x == 0.0));
    if ok {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: x,
            expected: if allow_zero {
                "finite x ≥ 0"
            } else {
                "finite x > 0"
            },
        })
    }
}

/// `h(s) = 1/(s−1) + ((s−1)/s)/√(2π)`, a lower bound for `ζ(s)` on `s > 1`.
pub fn lower_bound_h(s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::Domain {
            name: "s",
            value: s,
            expected: "finite s > 1",
        });
    }
    Ok(1.0 / (s - 1.0) + (s - 1.0) / s * FRAC_1_SQRT_2PI)
}

/// The cubic `g(x) = (414 + 49x − 6x² − x³)/720`; `1/x + g(x) ≤ ζ(1+x)`.
pub fn lower_bound_g(x: f64) -> Result<f64> {
    check_positive("x", x, true)?;
    Ok((414.0 + x * (49.0 + x * (-6.0 - x))) / 720.0)
}

/// `g` in its unexpanded form `1/2 + (x+1)/12 − (x+1)(x+2)(x+3)/720`.
pub fn lower_bound_g_factored(x: f64) -> Result<f64> {
    check_positive("x", x, true)?;
    Ok(0.5 + (x + 1.0) / 12.0 - (x + 1.0) * (x + 2.0) * (x + 3.0) / 720.0)
}

/// `f(x) = (x/(x+1))/√(2π)`, increasing towards `1/√(2π)`.
pub fn lower_bound_f(x: f64) -> Result<f64> {
    check_positive("x", x, true)?;
    Ok(x / (x + 1.0) * FRAC_1_SQRT_2PI)
}

fn f_minus_g(x: f64) -> f64 {
    x / (x + 1.0) * FRAC_1_SQRT_2PI - (414.0 + x * (49.0 + x * (-6.0 - x))) / 720.0
}

/// The unique positive root of `f(x) = g(x)`, by bisection on
/// [`CROSSING_WINDOW`] to within `budget.abs_tol()`.
pub fn crossing_root(budget: &PrecisionBudget) -> Result<f64> {
    let (mut lo, mut hi) = CROSSING_WINDOW;
    let (f_lo, f_hi) = (f_minus_g(lo), f_minus_g(hi));
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Bracketing { lo, hi });
    }
    // Midpoint of a bracket of width w is within w/2 of the root.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 2.0 * budget.abs_tol() || mid <= lo || mid >= hi {
            break;
        }
        if f_minus_g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
