use super::{CertifiedValue, PrecisionBudget};
use crate::error::{Error, Result};

/// Even-index Bernoulli numbers `B_2, B_4, …, B_16`.
pub(crate) const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Bernoulli corrections kept in the zeta expansion (`B_2` … `B_12`).
const CORRECTIONS: usize = 6;

/// `ln |B_{2k}/(2k)! · s(s+1)⋯(s+2k−2) · N^{-s-2k+1}|`, the magnitude of the
/// k-th Euler–Maclaurin correction for `Σ_{n≥N} n^{-s}`.
fn ln_correction(s: f64, k: usize, ln_n: f64) -> f64 {
    let order = 2 * k;
    let ln_rising: f64 = (0..order - 1).map(|t| (s + t as f64).ln()).sum();
    let ln_fact: f64 = (2..=order).map(|t| (t as f64).ln()).sum();
    BERNOULLI_EVEN[k - 1].abs().ln() - ln_fact + ln_rising - (s + order as f64 - 1.0) * ln_n
}

/// Riemann zeta for real `s > 1`, with a certified truncation bound.
///
/// Euler–Maclaurin with cutoff `N`:
/// `ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s−1) + N^{-s}/2 + Σ_k T_k + E`,
/// where for real `s` the remainder `|E|` is at most the first omitted
/// correction `|T_{7}|`. `N` is the smallest cutoff meeting the budget.
pub fn zeta(s: f64, budget: &PrecisionBudget) -> Result<CertifiedValue> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::Domain {
            name: "s",
            value: s,
            expected: "finite s > 1",
        });
    }
    // ζ(s) ≥ max(1, 1/(s−1)), so this target never exceeds the requested one.
    let target = budget.target(f64::max(1.0, 1.0 / (s - 1.0)));
    let omitted = CORRECTIONS + 1;
    let ln_c = ln_correction(s, omitted, 0.0);
    let exponent = s + 2.0 * omitted as f64 - 1.0;
    let ln_n_needed = (ln_c - (0.5 * target).ln()) / exponent;
    let cutoff = ln_n_needed.exp().ceil().max(2.0);
    if cutoff > budget.max_terms() as f64 {
        let n = budget.max_terms() as f64;
        return Err(Error::BudgetExhausted {
            achieved: ln_correction(s, omitted, n.ln()).exp(),
            requested: target,
            max_terms: budget.max_terms(),
        });
    }
    let n_cut = cutoff as usize;
    let n = cutoff;
    let ln_n = n.ln();

    // Smallest terms first.
    let partial: f64 = (1..n_cut).rev().map(|k| (k as f64).powf(-s)).sum();
    let mut value = partial + (-(s - 1.0) * ln_n).exp() / (s - 1.0) + 0.5 * (-s * ln_n).exp();
    for k in 1..=CORRECTIONS {
        value += BERNOULLI_EVEN[k - 1].signum() * ln_correction(s, k, ln_n).exp();
    }
    let truncation = ln_correction(s, omitted, ln_n).exp();
    let rounding = 2.0 * (n_cut + 16) as f64 * f64::EPSILON * value.abs();
    Ok(CertifiedValue::new(value, truncation + rounding))
}
