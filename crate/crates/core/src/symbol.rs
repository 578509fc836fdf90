//! The affine-like symbol `φ(s) = c₁ + c₂·q^{-s}`.
//!
//! A symbol is valid when `Re c₁ ≥ 1/2 + |c₂|`, which is exactly the
//! condition for `φ` to map the half-plane `Re s > 0` into `Re s > 1/2`.
//! `c₂` is stored in polar form so that quantities depending only on
//! `(Re c₁, |c₂|)` are bit-for-bit independent of `arg c₂`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for the equality tests in [`DirichletSymbol::classify`] and the
/// validity check.
pub const EQ_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 10_000;
const MAX_NEWTON_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletSymbol {
    c1: Complex64,
    c2_abs: f64,
    c2_arg: f64,
    q: u32,
}

/// Validity class of a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolClass {
    /// `c₂ = 0`: `C_φ` is evaluation at `c₁`, a rank-one operator.
    Constant,
    /// `Re c₁ = 1/2 + |c₂|`: bounded but not compact.
    Boundary,
    /// `Re c₁ > 1/2 + |c₂|`: compact.
    Compact,
}

impl SymbolClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SymbolClass::Constant => "constant",
            SymbolClass::Boundary => "boundary",
            SymbolClass::Compact => "compact",
        }
    }

    /// Whether `C_φ` is compact (constant symbols give rank one).
    pub fn is_compact(&self) -> bool {
        !matches!(self, SymbolClass::Boundary)
    }
}

impl fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointMethod {
    Exact,
    Iteration,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointResult {
    pub alpha: Complex64,
    /// `φ′(α) = −c₂·ln q·q^{-α}`.
    pub derivative: Complex64,
    pub iterations: usize,
    /// `|φ(α) − α|`.
    pub residual: f64,
    pub method: FixedPointMethod,
}

impl DirichletSymbol {
    /// Builds a symbol from complex coefficients.
    pub fn new(c1: Complex64, c2: Complex64, q: u32) -> Result<Self> {
        let (abs, arg) = if c2 == Complex64::new(0.0, 0.0) {
            (0.0, 0.0)
        } else {
            c2.to_polar()
        };
        Self::from_polar(c1, abs, arg, q)
    }

    /// Builds a symbol with `c₂ = c2_abs·e^{i·c2_arg}`.
    pub fn from_polar(c1: Complex64, c2_abs: f64, c2_arg: f64, q: u32) -> Result<Self> {
        if !(c1.re.is_finite() && c1.im.is_finite()) {
            return Err(Error::InvalidSymbol("c1 must be finite".into()));
        }
        if !(c2_abs.is_finite() && c2_abs >= 0.0 && c2_arg.is_finite()) {
            return Err(Error::InvalidSymbol(
                "c2 must have a finite non-negative modulus and finite argument".into(),
            ));
        }
        if q < 2 {
            return Err(Error::InvalidSymbol(format!("q = {q} must be at least 2")));
        }
        if c1.re < 0.5 + c2_abs - EQ_TOL {
            return Err(Error::InvalidSymbol(format!(
                "symbol violates Re c1 ≥ 1/2 + |c2| (Re c1 = {}, |c2| = {})",
                c1.re, c2_abs
            )));
        }
        // A constant at Re c1 = 1/2 is point evaluation on the boundary line,
        // which is unbounded.
        if c2_abs == 0.0 && c1.re <= 0.5 {
            return Err(Error::InvalidSymbol(format!(
                "constant symbol needs Re c1 > 1/2 (Re c1 = {})",
                c1.re
            )));
        }
        let c2_arg = if c2_abs == 0.0 { 0.0 } else { c2_arg };
        Ok(Self {
            c1,
            c2_abs,
            c2_arg,
            q,
        })
    }

    /// Real-coefficient symbol `σ₁ + c₂·2^{-s}`.
    pub fn real(sigma1: f64, c2: f64) -> Result<Self> {
        Self::new(Complex64::new(sigma1, 0.0), Complex64::new(c2, 0.0), 2)
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        Complex64::from_polar(self.c2_abs, self.c2_arg)
    }

    /// `Re c₁`.
    pub fn sigma1(&self) -> f64 {
        self.c1.re
    }

    pub fn c2_abs(&self) -> f64 {
        self.c2_abs
    }

    pub fn c2_arg(&self) -> f64 {
        self.c2_arg
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Same symbol with another base `q`.
    pub fn with_base(&self, q: u32) -> Result<Self> {
        Self::from_polar(self.c1, self.c2_abs, self.c2_arg, q)
    }

    fn q_pow_neg(&self, s: Complex64) -> Complex64 {
        (-s * f64::from(self.q).ln()).exp()
    }

    /// `φ(s) = c₁ + c₂·q^{-s}`.
    pub fn evaluate(&self, s: Complex64) -> Complex64 {
        if self.c2_abs == 0.0 {
            return self.c1;
        }
        self.c1 + self.c2() * self.q_pow_neg(s)
    }

    /// `φ′(s) = −c₂·ln q·q^{-s}`.
    pub fn derivative(&self, s: Complex64) -> Complex64 {
        if self.c2_abs == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        -self.c2() * f64::from(self.q).ln() * self.q_pow_neg(s)
    }

    pub fn classify(&self) -> SymbolClass {
        if self.c2_abs <= EQ_TOL {
            SymbolClass::Constant
        } else if (self.c1.re - 0.5 - self.c2_abs).abs() <= EQ_TOL {
            SymbolClass::Boundary
        } else {
            SymbolClass::Compact
        }
    }

    /// Fixed point `α = φ(α)` in `Re s > 1/2`.
    ///
    /// Plain iteration from `α₀ = c₁` first; if that stalls or leaves the
    /// half-plane, damped Newton on `α − φ(α)`.
    pub fn fixed_point(&self, tol: f64) -> Result<FixedPointResult> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {tol} must be positive"
            )));
        }
        if self.c2_abs == 0.0 {
            return Ok(FixedPointResult {
                alpha: self.c1,
                derivative: Complex64::new(0.0, 0.0),
                iterations: 0,
                residual: 0.0,
                method: FixedPointMethod::Exact,
            });
        }
        let residual = |z: Complex64| (self.evaluate(z) - z).norm();
        let accept = |z: Complex64| z.re > 0.5 && residual(z) <= tol;

        let mut alpha = self.c1;
        let mut iterations = 0;
        while iterations < MAX_ITERATIONS {
            let next = self.evaluate(alpha);
            iterations += 1;
            if !(next.re.is_finite() && next.im.is_finite()) {
                break;
            }
            let step = (next - alpha).norm();
            alpha = next;
            if step <= 0.25 * tol {
                break;
            }
        }
        if accept(alpha) {
            return Ok(self.fixed_point_result(alpha, iterations, FixedPointMethod::Iteration));
        }

        let start = if alpha.re.is_finite() && alpha.im.is_finite() && alpha.re > 0.5 {
            alpha
        } else {
            self.c1
        };
        let mut z = start;
        for step in 1..=MAX_NEWTON_STEPS {
            let f = z - self.evaluate(z);
            let df = Complex64::new(1.0, 0.0) - self.derivative(z);
            if df.norm() == 0.0 {
                break;
            }
            let delta = f / df;
            let mut damping = 1.0;
            let current = f.norm();
            let mut candidate = z - delta;
            while damping > 1e-10
                && residual(candidate).partial_cmp(&current) != Some(std::cmp::Ordering::Less)
            {
                damping *= 0.5;
                candidate = z - delta * damping;
            }
            z = candidate;
            if accept(z) && delta.norm() * damping <= 0.25 * tol {
                return Ok(self.fixed_point_result(z, iterations + step, FixedPointMethod::Newton));
            }
        }
        if accept(z) {
            return Ok(self.fixed_point_result(
                z,
                iterations + MAX_NEWTON_STEPS,
                FixedPointMethod::Newton,
            ));
        }
        Err(Error::NoConvergence {
            iterations: iterations + MAX_NEWTON_STEPS,
            residual: residual(z),
        })
    }

    fn fixed_point_result(
        &self,
        alpha: Complex64,
        iterations: usize,
        method: FixedPointMethod,
    ) -> FixedPointResult {
        FixedPointResult {
            alpha,
            derivative: self.derivative(alpha),
            iterations,
            residual: (self.evaluate(alpha) - alpha).norm(),
            method,
        }
    }

    /// `{0, 1} ∪ {φ′(α)^k : 1 ≤ k ≤ k_max}`, sorted by decreasing modulus,
    /// with exact duplicates removed.
    ///
    /// Only defined for compact operators (including constant symbols).
    pub fn spectrum_formula(&self, k_max: usize) -> Result<Vec<Complex64>> {
        if self.classify() == SymbolClass::Boundary {
            return Err(Error::NonCompact(
                "the spectrum is only known for Re c1 > 1/2 + |c2|".into(),
            ));
        }
        let d = self.fixed_point(1e-13)?.derivative;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut out = vec![one];
        let mut power = one;
        for _ in 0..k_max {
            power *= d;
            out.push(power);
        }
        out.push(zero);
        out.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        out.dedup();
        Ok(out)
    }
}

/// Largest modulus in a list of spectral values.
pub fn spectral_radius(spectrum: &[Complex64]) -> f64 {
    spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
