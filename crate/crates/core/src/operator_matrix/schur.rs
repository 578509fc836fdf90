use rayon::prelude::*;

use super::ln_modulus;
use crate::error::{Error, Result};
use crate::special_functions::{
    ln_factorial, weighted_log_moment_tail, zeta, CertifiedValue, PrecisionBudget,
};
use crate::symbol::DirichletSymbol;

/// Outcome of the Schur test with weights `p_j = j^{r|c₂|−σ₁}`, `q_i = r^i`.
///
/// The test asks for `Σ_i |a_{i,j}| q_i ≤ α p_j` for every column and
/// `Σ_j |a_{i,j}| p_j ≤ β q_i` for every row, with `α = 1` and
/// `β = ζ(2σ₁ − r|c₂|)`; then `‖C_φ‖² ≤ αβ`. Columns `j ≤ J` and rows
/// `i ≤ I` are checked, with the infinite remainder of each sum bounded
/// rigorously. Residuals are relative: `(lhs − rhs)/rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurCertificate {
    pub r: f64,
    pub alpha: f64,
    pub beta: CertifiedValue,
    pub max_column_residual: f64,
    pub max_row_residual: f64,
    /// Largest bound used for a column remainder `Σ_{i>I}`, relative to `p_j`.
    pub column_tail: f64,
    /// Largest bound used for a row remainder `Σ_{j>J}`, relative to `β q_i`.
    pub row_tail: f64,
    pub verdict: bool,
    /// `√(αβ)` when the verdict holds.
    pub implied_norm_bound: Option<f64>,
    pub failing_column: Option<usize>,
    pub failing_row: Option<usize>,
}

/// Runs the Schur test on columns `1..=cols` and rows `0..=max_row`.
///
/// Any `r > 0` with `2σ₁ − r|c₂| > 1` is accepted; the checks pass exactly
/// when `r` lies between the roots of `(2σ₁−1)r − |c₂|(1+r²)`.
pub fn schur_certificate(
    sym: &DirichletSymbol,
    r: f64,
    max_row: usize,
    cols: usize,
    budget: &PrecisionBudget,
) -> Result<SchurCertificate> {
    let c = sym.c2_abs();
    let sigma1 = sym.sigma1();
    if c == 0.0 {
        return Err(Error::InvalidArgument(
            "Schur weights need c2 ≠ 0 (a constant symbol has rank one)".into(),
        ));
    }
    let s_prime = 2.0 * sigma1 - r * c;
    if !(r.is_finite() && r > 0.0 && s_prime > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "r = {r} must be positive with 2·Re c1 − r|c2| > 1"
        )));
    }
    if cols == 0 {
        return Err(Error::InvalidArgument(
            "at least one column is required".into(),
        ));
    }
    let rows = max_row + 1;
    let beta = zeta(s_prime, budget)?;
    let alpha = 1.0;
    let ln_r = r.ln();
    let ln_c = c.ln();
    let eps = f64::EPSILON;
    let ln_fact: Vec<f64> = (0..=rows).map(|i| ln_factorial(i as u32)).collect();

    // Each check yields (relative residual, relative remainder bound,
    // relative certification allowance). The allowance covers rounding in
    // the partial sums and the certified errors of β and of the tails.

    // Columns: Σ_{i≤I} |a_ij| r^i plus the Lagrange remainder of the
    // exponential series, against α p_j.
    let column = |j: usize| -> (f64, f64, f64) {
        if j == 1 {
            return (0.0, 0.0, 0.0);
        }
        let ln_j = (j as f64).ln();
        let ln_ln_j = ln_j.ln();
        let rhs = alpha * ((r * c - sigma1) * ln_j).exp();
        let sum: f64 = (0..rows)
            .rev()
            .map(|i| {
                (ln_modulus(sigma1, ln_c, i, ln_j, ln_ln_j, ln_fact[i]) + i as f64 * ln_r).exp()
            })
            .sum();
        let x = c * r * ln_j;
        let tail = (-sigma1 * ln_j + rows as f64 * x.ln() - ln_fact[rows] + x).exp();
        let lhs = sum + tail;
        (
            (lhs - rhs) / rhs,
            tail / rhs,
            (rows + 2) as f64 * eps * lhs / rhs,
        )
    };
    let col_res: Vec<(f64, f64, f64)> = (1..=cols).into_par_iter().map(column).collect();

    // Rows: Σ_{j≤J} |a_ij| p_j plus c^i/i!·Σ_{j>J} (ln j)^i j^{-s'}, against β r^i.
    let row = |i: usize| -> Result<(f64, f64, f64)> {
        let partial: f64 = (2..=cols)
            .rev()
            .map(|j| {
                let ln_j = (j as f64).ln();
                (ln_modulus(sigma1, ln_c, i, ln_j, ln_j.ln(), ln_fact[i]) + (r * c - sigma1) * ln_j)
                    .exp()
            })
            .sum::<f64>()
            + if i == 0 { 1.0 } else { 0.0 };
        let tail = weighted_log_moment_tail(
            s_prime,
            i as u32,
            cols as u64 + 1,
            i as f64 * ln_c - ln_fact[i],
        )?;
        let q_i = (i as f64 * ln_r).exp();
        let rhs = beta.value * q_i;
        let lhs = partial + tail.value;
        let allowance = (cols + 2) as f64 * eps * lhs + tail.error_bound + beta.error_bound * q_i;
        Ok(((lhs - rhs) / rhs, tail.upper() / rhs, allowance / rhs))
    };
    let row_res: Vec<(f64, f64, f64)> =
        (0..rows).into_par_iter().map(row).collect::<Result<_>>()?;

    let slack = budget.rel_tol();
    let worst = |v: &[(f64, f64, f64)]| {
        v.iter().enumerate().map(|(k, t)| (k, t.0 - t.2)).fold(
            (0usize, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        )
    };
    let max_of = |v: &[(f64, f64, f64)], f: fn(&(f64, f64, f64)) -> f64| {
        v.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
    };
    let (jc, col_excess) = worst(&col_res);
    let (ir, row_excess) = worst(&row_res);
    let failing_column = (col_excess > slack).then_some(jc + 1);
    let failing_row = (row_excess > slack).then_some(ir);
    let verdict = failing_column.is_none() && failing_row.is_none();
    let max_column_residual = max_of(&col_res, |t| t.0);
    let max_row_residual = max_of(&row_res, |t| t.0);
    let column_tail = max_of(&col_res, |t| t.1);
    let row_tail = max_of(&row_res, |t| t.1);

    Ok(SchurCertificate {
        r,
        alpha,
        beta,
        max_column_residual,
        max_row_residual,
        column_tail,
        row_tail,
        verdict,
        implied_norm_bound: verdict.then(|| (alpha * beta.upper()).sqrt()),
        failing_column,
        failing_row,
    })
}
