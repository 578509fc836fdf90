//! The matrix of `C_φ` in the bases `{j^{-s}}_{j≥1}` (domain) and
//! `{q^{-is}}_{i≥0}` (range):
//!
//! ```text
//! a_{i,1} = [i = 0],    a_{i,j} = j^{-c₁} (−c₂ ln j)^i / i!   (j > 1)
//! ```
//!
//! The matrix factors as `D_row · |A| · D_col` with unitary diagonals
//! `D_row = diag(e^{i·i·arg(−c₂)})` and `D_col = diag(j^{-i·Im c₁})`, which is
//! how it is stored. Entries never reference `q`, so every norm and singular
//! value is independent of the base.

mod norm;
mod schur;
mod svd;

use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special_functions::{ln_factorial, ln_log_power_integral};
use crate::symbol::DirichletSymbol;

pub use norm::{operator_norm_estimate, NormEstimate};
pub use schur::{schur_certificate, SchurCertificate};
pub use svd::{singular_values, SingularSpectrum};

/// Default cap on stored entries (`(I+1)·J`).
pub const DEFAULT_MAX_ENTRIES: usize = 100_000_000;

#[derive(Debug, Clone)]
pub struct TruncatedMatrix {
    symbol: DirichletSymbol,
    rows: usize,
    cols: usize,
    /// `|a_{i,j}|`, row-major, column `j` stored at offset `j − 1`.
    modulus: Vec<f64>,
    row_phase: Vec<Complex64>,
    col_phase: Vec<Complex64>,
    tail_bound: f64,
}

impl TruncatedMatrix {
    pub fn symbol(&self) -> &DirichletSymbol {
        &self.symbol
    }

    /// Number of stored rows, `I + 1`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Highest row index `I`.
    pub fn max_row(&self) -> usize {
        self.rows - 1
    }

    /// Number of stored columns `J` (indices `1..=J`).
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Certified bound on the norm of the discarded part of the operator;
    /// infinite when no finite bound is available (boundary symbols).
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `a_{i,j}` with `i` 0-based and `j` 1-based.
    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        assert!(
            i < self.rows && (1..=self.cols).contains(&j),
            "index out of range"
        );
        self.row_phase[i] * self.modulus[i * self.cols + j - 1] * self.col_phase[j - 1]
    }

    /// Row `i` of `|A|`.
    pub fn modulus_row(&self, i: usize) -> &[f64] {
        &self.modulus[i * self.cols..(i + 1) * self.cols]
    }

    pub(crate) fn modulus(&self) -> &[f64] {
        &self.modulus
    }

    /// Complex row `i`.
    pub fn row(&self, i: usize) -> Vec<Complex64> {
        let phase = self.row_phase[i];
        self.modulus_row(i)
            .iter()
            .zip(&self.col_phase)
            .map(|(m, c)| phase * *m * c)
            .collect()
    }

    /// Text dump: a line `I J`, then `(I+1)·J` lines `re im` in row-major
    /// order, each number in shortest round-trip scientific notation.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{} {}", self.max_row(), self.cols)?;
        for i in 0..self.rows {
            for z in self.row(i) {
                writeln!(out, "{:e} {:e}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

/// `ln |a_{i,j}|` for `j ≥ 2`, from precomputed `ln j`, `ln ln j`, `ln i!`.
#[inline]
pub(crate) fn ln_modulus(
    sigma1: f64,
    ln_c2: f64,
    i: usize,
    ln_j: f64,
    ln_ln_j: f64,
    ln_fact_i: f64,
) -> f64 {
    if i == 0 {
        -sigma1 * ln_j
    } else {
        -sigma1 * ln_j + i as f64 * (ln_c2 + ln_ln_j) - ln_fact_i
    }
}

/// Builds the `(I+1) × J` truncation with the default entry cap.
pub fn build_matrix(sym: &DirichletSymbol, max_row: usize, cols: usize) -> Result<TruncatedMatrix> {
    build_matrix_capped(sym, max_row, cols, DEFAULT_MAX_ENTRIES)
}

pub fn build_matrix_capped(
    sym: &DirichletSymbol,
    max_row: usize,
    cols: usize,
    max_entries: usize,
) -> Result<TruncatedMatrix> {
    if cols == 0 {
        return Err(Error::InvalidArgument(
            "at least one column is required".into(),
        ));
    }
    let rows = max_row
        .checked_add(1)
        .ok_or_else(|| Error::InvalidArgument("row count overflows".into()))?;
    let entries = rows.saturating_mul(cols);
    if entries > max_entries {
        return Err(Error::ResourceLimit {
            entries,
            cap: max_entries,
        });
    }

    let sigma1 = sym.sigma1();
    let ln_c2 = sym.c2_abs().ln();
    let ln_j: Vec<f64> = (1..=cols).map(|j| (j as f64).ln()).collect();
    let ln_ln_j: Vec<f64> = ln_j.iter().map(|l| l.ln()).collect();
    let ln_fact: Vec<f64> = (0..rows).map(|i| ln_factorial(i as u32)).collect();

    let mut modulus = vec![0.0; entries];
    modulus
        .par_chunks_mut(cols)
        .enumerate()
        .for_each(|(i, row)| {
            row[0] = if i == 0 { 1.0 } else { 0.0 };
            for j in 1..cols {
                row[j] = ln_modulus(sigma1, ln_c2, i, ln_j[j], ln_ln_j[j], ln_fact[i]).exp();
            }
        });

    // arg(−c₂), folded into (−π, π].
    let theta = {
        let t = sym.c2_arg() + std::f64::consts::PI;
        let folded = t.sin().atan2(t.cos());
        if sym.c2_abs() == 0.0 {
            0.0
        } else {
            folded
        }
    };
    let row_phase = (0..rows)
        .map(|i| Complex64::from_polar(1.0, i as f64 * theta))
        .collect();
    let t1 = sym.c1().im;
    let col_phase = ln_j
        .iter()
        .map(|l| Complex64::from_polar(1.0, -t1 * l))
        .collect();

    Ok(TruncatedMatrix {
        symbol: *sym,
        rows,
        cols,
        modulus,
        row_phase,
        col_phase,
        tail_bound: tail_bounds(sym, max_row, cols),
    })
}

/// Certified bound on `‖A − A_{I,J}‖`, where `A_{I,J}` keeps rows `0..=I`
/// and columns `1..=J`.
///
/// The discarded part splits into rows `i > I` and the block of rows `≤ I`,
/// columns `> J`; having disjoint row supports, their norms combine as a
/// root-sum-of-squares. Each block is bounded by its Hilbert–Schmidt norm:
///
/// * rows `i > I`: `Σ_{k>I} ρ^{2k}·2σ₁/(2σ₁−1)` with `ρ = 2|c₂|/(2σ₁−1)`,
///   using `Σ_n (ln n)^{2k} n^{-2σ₁} ≤ (2k)!/(2σ₁−1)^{2k}·ζ(2σ₁)`,
///   `ζ(2σ₁) ≤ 2σ₁/(2σ₁−1)` and `(2k)! ≤ 4^k (k!)²`. Infinite when `ρ ≥ 1`.
/// * columns `j > J`: `Σ_{i≤I} |c₂|^{2i}/(i!)² · Σ_{j>J} (ln j)^{2i} j^{-2σ₁}`,
///   each inner tail bounded by `∫_J^∞` plus, when `J` lies before the peak
///   of the unimodal summand, the peak value.
pub fn tail_bounds(sym: &DirichletSymbol, max_row: usize, cols: usize) -> f64 {
    let sigma1 = sym.sigma1();
    let c = sym.c2_abs();
    let b = 2.0 * sigma1 - 1.0;
    let row_sq = if c == 0.0 {
        0.0
    } else {
        let rho = 2.0 * c / b;
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            let rho_sq = rho * rho;
            (2.0 * sigma1 / b) * rho_sq.powf(max_row as f64 + 1.0) / (1.0 - rho_sq)
        }
    };

    let p = 2.0 * sigma1;
    let j = cols as f64;
    let last_row = if c == 0.0 { 0 } else { max_row };
    let col_sq: f64 = (0..=last_row)
        .map(|i| {
            let n = 2 * i as u32;
            let ln_weight = if i == 0 {
                0.0
            } else {
                n as f64 * c.ln() - 2.0 * ln_factorial(i as u32)
            };
            let integral = (ln_weight + ln_log_power_integral(n, p, j)).exp();
            let peak_ln_x = n as f64 / p;
            if j < peak_ln_x.exp() {
                // max of (ln x)^n x^{-p} is (n/p)^n e^{-n}
                integral + (ln_weight + n as f64 * (peak_ln_x.ln() - 1.0)).exp()
            } else {
                integral
            }
        })
        .sum();
    (row_sq + col_sq).sqrt()
}

/// Truncation sizes: `(I, J) = (60, 5000)` when the row-tail ratio
/// `2|c₂|/(2σ₁−1)` is at most 1/2, otherwise `I` grows like
/// `ln tol / ln ratio` (capped at 2000). Boundary symbols get `(200, 20000)`.
pub fn default_truncation(sym: &DirichletSymbol, tol: f64) -> (usize, usize) {
    let ratio = 2.0 * sym.c2_abs() / (2.0 * sym.sigma1() - 1.0);
    if ratio <= 0.5 {
        (60, 5000)
    } else if ratio < 1.0 {
        let rows = (tol.ln() / ratio.ln()).ceil();
        (rows.clamp(60.0, 2000.0) as usize, 5000)
    } else {
        (200, 20_000)
    }
}
