//! Analytic bounds on `‖C_φ‖` and on the approximation numbers of `C_φ`.
//!
//! Everything here depends on the symbol only through `σ₁ = Re c₁` and
//! `|c₂|`: vertical translations and rotations of `c₂` are unitary
//! equivalences of `C_φ`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special_functions::{zeta, CertifiedValue, PrecisionBudget};
use crate::symbol::{DirichletSymbol, SymbolClass, EQ_TOL};

/// Grid for the reproducing-kernel supremum: `x − 1/2` log-spaced on
/// `[KERNEL_X_OFFSET, KERNEL_X_MAX − 1/2]`.
pub const KERNEL_GRID_POINTS: usize = 512;
pub const KERNEL_X_OFFSET: f64 = 1e-6;
pub const KERNEL_X_MAX: f64 = 60.0;
const GOLDEN_WIDTH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBoundReport {
    pub symbol_class: SymbolClass,
    /// Smallest positive root of `P(r) = |c₂|r² + (1 − 2σ₁)r + |c₂|`;
    /// `None` for constant symbols.
    pub schur_r: Option<f64>,
    /// `ζ(2σ₁)`.
    pub lower_sq: CertifiedValue,
    /// `ζ(2σ₁ − r|c₂|)`; equals `lower_sq` for constant symbols.
    pub upper_sq: CertifiedValue,
    /// `(S*_φ)²`, the reproducing-kernel lower bound.
    pub kernel_lower_sq: f64,
    /// Where the kernel ratio peaks; `None` when the `x → ∞` limit wins.
    pub kernel_maximizer: Option<f64>,
}

impl NormBoundReport {
    /// Argument of the zeta value in `upper_sq`.
    pub fn upper_argument(&self, sym: &DirichletSymbol) -> f64 {
        2.0 * sym.sigma1() - self.schur_r.unwrap_or(0.0) * sym.c2_abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelLowerBound {
    pub value: f64,
    pub maximizer: Option<f64>,
}

/// `a_{N+1}(C_φ) ≤ prefactor · ratio^N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxNumberBound {
    pub prefactor: f64,
    pub ratio: f64,
}

impl ApproxNumberBound {
    pub fn bound_at(&self, n: u32) -> f64 {
        self.prefactor * self.ratio.powi(n as i32)
    }
}

/// Smallest positive root of `P(r) = |c₂|r² + (1 − 2σ₁)r + |c₂|`, computed
/// as `2|c₂| / ((2σ₁−1) + √((2σ₁−1)² − 4|c₂|²))` to avoid cancellation.
pub fn schur_radius(sigma1: f64, c2_abs: f64) -> Result<f64> {
    if !(c2_abs.is_finite() && c2_abs > 0.0) {
        return Err(Error::Domain {
            name: "|c2|",
            value: c2_abs,
            expected: "|c2| > 0",
        });
    }
    if !sigma1.is_finite() || sigma1 < 0.5 + c2_abs - EQ_TOL {
        return Err(Error::Domain {
            name: "sigma1",
            value: sigma1,
            expected: "sigma1 ≥ 1/2 + |c2|",
        });
    }
    let b = 2.0 * sigma1 - 1.0;
    let two_c = 2.0 * c2_abs;
    // The root moves like √(distance to the boundary), so rounding in σ₁
    // alone would shift it by ~1e-8; snap within the classification tolerance.
    if b - two_c <= 2.0 * EQ_TOL {
        return Ok(1.0);
    }
    let disc = ((b - two_c) * (b + two_c)).max(0.0);
    Ok((two_c / (b + disc.sqrt())).min(1.0))
}

/// `P(r) = |c₂|r² + (1 − 2σ₁)r + |c₂|`.
pub fn schur_polynomial(sigma1: f64, c2_abs: f64, r: f64) -> f64 {
    c2_abs * r * r + (1.0 - 2.0 * sigma1) * r + c2_abs
}

/// Two-sided bound `ζ(2σ₁) ≤ ‖C_φ‖² ≤ ζ(2σ₁ − r|c₂|)` together with the
/// reproducing-kernel lower bound.
pub fn norm_bounds(sym: &DirichletSymbol, budget: &PrecisionBudget) -> Result<NormBoundReport> {
    let class = sym.classify();
    let sigma1 = sym.sigma1();
    let lower_sq = zeta(2.0 * sigma1, budget)?;
    let kernel = kernel_lower_bound(sym, budget)?;
    if class == SymbolClass::Constant {
        return Ok(NormBoundReport {
            symbol_class: class,
            schur_r: None,
            lower_sq,
            upper_sq: lower_sq,
            kernel_lower_sq: kernel.value,
            kernel_maximizer: kernel.maximizer,
        });
    }
    let r = schur_radius(sigma1, sym.c2_abs())?;
    let upper_sq = zeta(2.0 * sigma1 - r * sym.c2_abs(), budget)?;
    Ok(NormBoundReport {
        symbol_class: class,
        schur_r: Some(r),
        lower_sq,
        upper_sq,
        kernel_lower_sq: kernel.value,
        kernel_maximizer: kernel.maximizer,
    })
}

/// `sup_{x > 1/2} ζ(2σ₁ − 2|c₂| q^{-x}) / ζ(2x)`, the squared norm ratio of
/// reproducing kernels `‖K_{φ(a)}‖² / ‖K_a‖²` minimised over `Im a`.
///
/// The supremum is searched on a log-spaced grid in `x − 1/2`, refined by
/// golden section around the best grid point, and compared with the
/// `x → ∞` limit `ζ(2σ₁)`.
pub fn kernel_lower_bound(
    sym: &DirichletSymbol,
    budget: &PrecisionBudget,
) -> Result<KernelLowerBound> {
    let sigma1 = sym.sigma1();
    let limit = zeta(2.0 * sigma1, budget)?.value;
    if sym.c2_abs() == 0.0 {
        return Ok(KernelLowerBound {
            value: limit,
            maximizer: None,
        });
    }
    let ratio = |x: f64| -> Result<f64> {
        let num = zeta(
            2.0 * sigma1 - 2.0 * sym.c2_abs() * f64::from(sym.q()).powf(-x),
            budget,
        )?;
        let den = zeta(2.0 * x, budget)?;
        Ok(num.value / den.value)
    };

    let span = (KERNEL_X_MAX - 0.5).ln() - KERNEL_X_OFFSET.ln();
    let grid: Vec<f64> = (0..KERNEL_GRID_POINTS)
        .map(|k| {
            let t = k as f64 / (KERNEL_GRID_POINTS - 1) as f64;
            0.5 + (KERNEL_X_OFFSET.ln() + t * span).exp()
        })
        .collect();
    let values = grid
        .par_iter()
        .map(|&x| ratio(x))
        .collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v > values[best] { k } else { best });

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (x_star, v_star) = golden_section_max(lo, hi, &ratio)?;
    let (x_star, v_star) = if v_star >= values[best] {
        (x_star, v_star)
    } else {
        (grid[best], values[best])
    };

    if v_star > limit {
        Ok(KernelLowerBound {
            value: v_star,
            maximizer: Some(x_star),
        })
    } else {
        Ok(KernelLowerBound {
            value: limit,
            maximizer: None,
        })
    }
}

fn golden_section_max(
    mut lo: f64,
    mut hi: f64,
    f: &impl Fn(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > GOLDEN_WIDTH {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Exponential decay bound for the approximation numbers of a compact `C_φ`:
/// prefactor `√((2σ₁−1)(2σ₁)/((2σ₁−1)² − 4|c₂|²))`, ratio `2|c₂|/(2σ₁−1)`.
pub fn approx_number_bound(sym: &DirichletSymbol) -> Result<ApproxNumberBound> {
    let b = 2.0 * sym.sigma1() - 1.0;
    let two_c = 2.0 * sym.c2_abs();
    if sym.classify() == SymbolClass::Boundary || b - two_c <= 0.0 {
        return Err(Error::NonCompact(format!(
            "2 Re c1 − 2|c2| − 1 = {} must be positive",
            b - two_c
        )));
    }
    let prefactor = (b * (b + 1.0) / ((b - two_c) * (b + two_c))).sqrt();
    Ok(ApproxNumberBound {
        prefactor,
        ratio: two_c / b,
    })
}
