use num_complex::Complex64;
use rayon::prelude::*;

use super::TruncatedMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    /// Leading singular values of the truncation, descending.
    pub values: Vec<f64>,
    /// `(I, J)` of the truncation.
    pub truncation: (usize, usize),
    /// Per value: whether the Jacobi sweeps reached orthogonality.
    pub converged: Vec<bool>,
    pub sweeps: usize,
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Reduces the tall `n × k` matrix given by `cols` (each of length `n ≥ k`)
/// to its `k × k` triangular factor `R`, returned column by column.
fn householder_r(mut cols: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let k = cols.len();
    for p in 0..k {
        let (head, rest) = cols.split_at_mut(p + 1);
        let x = &mut head[p][p..];
        let nx = norm_sqr(x).sqrt();
        if nx == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * nx;
        let mut v: Vec<Complex64> = x.to_vec();
        v[0] -= alpha;
        let nv = norm_sqr(&v).sqrt();
        if nv == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= nv);
        x.fill(Complex64::new(0.0, 0.0));
        x[0] = alpha;
        rest.par_iter_mut().for_each(|col| {
            let y = &mut col[p..];
            let s = dot_conj(&v, y) * 2.0;
            for (yi, vi) in y.iter_mut().zip(&v) {
                *yi -= vi * s;
            }
        });
    }
    cols.into_iter()
        .enumerate()
        .map(|(c, col)| {
            let mut r = vec![Complex64::new(0.0, 0.0); k];
            r[..=c].copy_from_slice(&col[..=c]);
            r
        })
        .collect()
}

/// One-sided (Hestenes) Jacobi on the columns of a square matrix. Returns
/// the column norms and whether every pair was orthogonal on the last sweep.
fn one_sided_jacobi(mut w: Vec<Vec<Complex64>>) -> (Vec<f64>, usize, bool) {
    let k = w.len();
    let eps = (k as f64).max(1.0) * f64::EPSILON;
    let mut sweeps = 0;
    let mut clean = k < 2;
    while sweeps < MAX_SWEEPS && !clean {
        sweeps += 1;
        clean = true;
        for p in 0..k {
            for q in p + 1..k {
                let (left, right) = w.split_at_mut(q);
                let (wp, wq) = (&mut left[p], &mut right[0]);
                let a = norm_sqr(wp);
                let b = norm_sqr(wq);
                let g = dot_conj(wp, wq);
                let gn = g.norm();
                if gn == 0.0 || gn <= eps * (a * b).sqrt() {
                    continue;
                }
                clean = false;
                // Rotate the phase of w_q so that w_pᴴ w_q is real positive.
                let e = g.conj() / gn;
                wq.iter_mut().for_each(|z| *z *= e);
                let zeta = (b - a) / (2.0 * gn);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
            }
        }
    }
    (
        w.iter().map(|c| norm_sqr(c).sqrt()).collect(),
        sweeps,
        clean,
    )
}

/// The `count` largest singular values of the truncation.
///
/// The wide or tall matrix is first compressed by a complex Householder QR
/// to a `k × k` triangle, `k = min(I+1, J)`; the triangle is diagonalised by
/// one-sided Jacobi, which is accurate even for tiny singular values.
pub fn singular_values(m: &TruncatedMatrix, count: usize) -> Result<SingularSpectrum> {
    let k = m.rows().min(m.cols());
    if count == 0 || count > k {
        return Err(Error::InvalidArgument(format!(
            "requested {count} singular values of a matrix with {k}"
        )));
    }
    let tall: Vec<Vec<Complex64>> = if m.cols() >= m.rows() {
        // Aᴴ is cols × rows: its columns are the conjugated rows of A.
        (0..m.rows())
            .into_par_iter()
            .map(|i| m.row(i).into_iter().map(|z| z.conj()).collect())
            .collect()
    } else {
        (1..=m.cols())
            .into_par_iter()
            .map(|j| (0..m.rows()).map(|i| m.entry(i, j)).collect())
            .collect()
    };
    let r = householder_r(tall);
    let (mut values, sweeps, clean) = one_sided_jacobi(r);
    values.sort_by(|a, b| b.total_cmp(a));
    values.truncate(count);
    Ok(SingularSpectrum {
        converged: vec![clean; values.len()],
        values,
        truncation: (m.max_row(), m.cols()),
        sweeps,
    })
}
