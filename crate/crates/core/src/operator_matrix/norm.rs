use rayon::prelude::*;

use super::TruncatedMatrix;
use crate::error::{Error, Result};

/// Two-sided estimate of `‖C_φ‖` from a truncation.
///
/// `‖A_{I,J}‖ = ‖ |A_{I,J}| ‖` because the phases are unitary diagonals, so
/// all work happens on the real nonnegative modulus matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormEstimate {
    /// Rayleigh-quotient lower bound on `‖A_{I,J}‖ ≤ ‖C_φ‖`.
    pub lower: f64,
    /// Collatz–Wielandt upper bound on `‖A_{I,J}‖`.
    pub truncated_upper: f64,
    pub tail_bound: f64,
    /// `truncated_upper + tail_bound`; infinite without a finite tail bound.
    pub upper: f64,
    pub upper_certified: bool,
    pub iterations: usize,
    pub converged: bool,
}

fn gram_apply(m: &TruncatedMatrix, active: usize, y: &[f64], z: &mut [f64], w: &mut [f64]) {
    let cols = m.cols();
    let a = &m.modulus()[..active * cols];
    // z = |A|ᵀ y, accumulated per column block to stay cache friendly.
    z.par_chunks_mut(256).enumerate().for_each(|(blk, zc)| {
        let off = blk * 256;
        zc.fill(0.0);
        for (i, yi) in y.iter().enumerate() {
            let row = &a[i * cols + off..i * cols + off + zc.len()];
            for (zk, ak) in zc.iter_mut().zip(row) {
                *zk += yi * ak;
            }
        }
    });
    // w = |A| z.
    w.par_iter_mut().enumerate().for_each(|(i, wi)| {
        *wi = a[i * cols..(i + 1) * cols]
            .iter()
            .zip(z.iter())
            .map(|(ak, zk)| ak * zk)
            .sum();
    });
}

/// Crude but always valid bound `‖M‖ ≤ min(‖M‖_F, √(‖M‖₁‖M‖_∞))`.
fn crude_upper(m: &TruncatedMatrix, active: usize) -> f64 {
    let cols = m.cols();
    let a = &m.modulus()[..active * cols];
    let frob: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let max_row = (0..active)
        .map(|i| a[i * cols..(i + 1) * cols].iter().sum::<f64>())
        .fold(0.0, f64::max);
    let max_col = (0..cols)
        .map(|j| (0..active).map(|i| a[i * cols + j]).sum::<f64>())
        .fold(0.0, f64::max);
    frob.min((max_row * max_col).sqrt())
}

/// Power iteration on the `(I+1)×(I+1)` Gram matrix `|A||A|ᵀ`.
///
/// Every iterate gives a valid lower bound (Rayleigh quotient of a unit
/// vector) and, since the Gram matrix restricted to nonzero rows has
/// positive entries, a valid upper bound `max_i (Gy)_i / y_i`. The best of
/// each is kept, so the bracket is certified even without convergence.
/// Iteration stops once the two agree to relative `tol`, or after `max_iter`.
pub fn operator_norm_estimate(
    m: &TruncatedMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<NormEstimate> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    // Trailing rows that underflowed to zero carry no norm.
    let active = (0..m.rows())
        .rev()
        .find(|&i| m.modulus_row(i).iter().any(|&v| v > 0.0))
        .map_or(1, |i| i + 1);

    let cols = m.cols();
    let mut y = vec![1.0 / (active as f64).sqrt(); active];
    let mut z = vec![0.0; cols];
    let mut w = vec![0.0; active];
    let mut best_lower_sq: f64 = 0.0;
    let mut best_upper_sq = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        gram_apply(m, active, &y, &mut z, &mut w);
        let rq: f64 = z.iter().map(|v| v * v).sum();
        best_lower_sq = best_lower_sq.max(rq);
        let cw = y
            .iter()
            .zip(&w)
            .map(|(yi, wi)| if *yi > 0.0 { wi / yi } else { f64::INFINITY })
            .fold(0.0, f64::max);
        best_upper_sq = best_upper_sq.min(cw);

        if best_upper_sq - best_lower_sq <= tol * best_lower_sq {
            converged = true;
            break;
        }
        let norm_w: f64 = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm_w > 0.0 && norm_w.is_finite()) {
            break;
        }
        for (yi, wi) in y.iter_mut().zip(&w) {
            *yi = wi / norm_w;
        }
    }

    // Rounding in the mat-vecs is relative and tiny; widen by a few ulps.
    let slack = 1.0 + 4.0 * (cols + active) as f64 * f64::EPSILON;
    let lower = best_lower_sq.sqrt() / slack;
    let truncated_upper = if best_upper_sq.is_finite() {
        best_upper_sq.sqrt() * slack
    } else {
        crude_upper(m, active) * slack
    };
    let tail_bound = m.tail_bound();
    Ok(NormEstimate {
        lower,
        truncated_upper,
        tail_bound,
        upper: truncated_upper + tail_bound,
        upper_certified: tail_bound.is_finite(),
        iterations,
        converged,
    })
}
