//! Dirichlet sums `Σ_k (ln k)^i k^{-s}` with certified Euler–Maclaurin tails.
//!
//! Every quantity is carried relative to the log-scale
//! `L = ln(i!/(s−1)^{i+1}) = ln ∫_1^∞ (ln x)^i x^{-s} dx`, which keeps large
//! moments (`i > 170`) representable until the very last multiplication.

use super::incgamma::{ln_factorial, ln_log_power_integral};
use super::zeta::{zeta, BERNOULLI_EVEN};
use super::{CertifiedValue, PrecisionBudget};
use crate::error::{Error, Result};

/// Euler–Maclaurin order: corrections use `B_2 … B_8`, the remainder `f^{(8)}`.
const EM_ORDER: usize = 4;
const FIRST_CUTOFF: u64 = 8;

/// Tail expansion for `f(x) = (ln x)^i x^{-s}`.
///
/// Derivatives have the form `f^{(k)}(x) = x^{-s-k} Q_k(ln x)` with
/// `Q_0(u) = u^i` and `Q_{k+1} = Q_k' − (s+k) Q_k`.
struct TailExpansion {
    s: f64,
    i: u32,
    ln_scale: f64,
    /// `derivs[k][d]` is the coefficient of `u^d` in `Q_k`.
    derivs: Vec<Vec<f64>>,
}

/// A tail sum in units of `e^{ln_scale}`.
struct ScaledTail {
    value: f64,
    error: f64,
    magnitude: f64,
}

impl TailExpansion {
    fn new(s: f64, i: u32) -> Self {
        let degree = i as usize;
        let mut q = vec![0.0; degree + 1];
        q[degree] = 1.0;
        let mut derivs = vec![q];
        for k in 0..2 * EM_ORDER {
            let prev = &derivs[k];
            let mut next: Vec<f64> = prev.iter().map(|c| -(s + k as f64) * c).collect();
            for d in 1..=degree {
                next[d - 1] += d as f64 * prev[d];
            }
            derivs.push(next);
        }
        Self {
            s,
            i,
            ln_scale: ln_factorial(i) - f64::from(i + 1) * (s - 1.0).ln(),
            derivs,
        }
    }

    /// `f(k)` relative to the scale; `f(1) = [i = 0]`.
    fn term(&self, k: u64) -> f64 {
        if k == 1 {
            return if self.i == 0 {
                (-self.ln_scale).exp()
            } else {
                0.0
            };
        }
        let u = (k as f64).ln();
        (f64::from(self.i) * u.ln() - self.s * u - self.ln_scale).exp()
    }

    /// `Σ_{k ≥ a} f(k)` for `a ≥ 2`.
    fn tail(&self, a: u64) -> ScaledTail {
        debug_assert!(a >= 2);
        let u = (a as f64).ln();
        let ln_u = u.ln();
        let integral = (ln_log_power_integral(self.i, self.s, a as f64) - self.ln_scale).exp();
        let half_endpoint = 0.5 * self.term(a);
        let mut value = integral + half_endpoint;
        let mut magnitude = integral + half_endpoint;

        for m in 1..=EM_ORDER {
            let k = 2 * m - 1;
            let (deriv, deriv_abs) = self.scaled_derivative(k, u, ln_u);
            let weight = BERNOULLI_EVEN[m - 1] / factorial(2 * m);
            value -= weight * deriv;
            magnitude += weight.abs() * deriv_abs;
        }

        // |R| ≤ |B_{2M}|/(2M)! ∫_a^∞ |f^{(2M)}|, with |Q_{2M}(u)| ≤ Σ |q_d| u^d.
        let order = 2 * EM_ORDER;
        let p = self.s + order as f64;
        let remainder_weight = BERNOULLI_EVEN[EM_ORDER - 1].abs() / factorial(order);
        let integral_abs: f64 = self.derivs[order]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(d, c)| {
                (c.abs().ln() + ln_log_power_integral(d as u32, p, a as f64) - self.ln_scale).exp()
            })
            .sum();
        let truncation = remainder_weight * integral_abs;
        let rounding = 8.0 * f64::EPSILON * magnitude;
        ScaledTail {
            value,
            error: truncation + rounding,
            magnitude,
        }
    }

    /// `(f^{(k)}(a), Σ_d |q_d| u^d a^{-s-k})` relative to the scale.
    fn scaled_derivative(&self, k: usize, u: f64, ln_u: f64) -> (f64, f64) {
        let base = -(self.s + k as f64) * u - self.ln_scale;
        self.derivs[k]
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .fold((0.0, 0.0), |(sum, abs), (d, c)| {
                let power = if d == 0 { 0.0 } else { d as f64 * ln_u };
                let t = (c.abs().ln() + power + base).exp();
                (sum + c.signum() * t, abs + t)
            })
    }

    fn unscale(&self, v: f64) -> Result<f64> {
        let out = v * self.ln_scale.exp();
        if out.is_finite() || v == 0.0 {
            Ok(if out.is_nan() { 0.0 } else { out })
        } else {
            Err(Error::Overflow("log-moment sum"))
        }
    }
}

fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

fn check_s(s: f64) -> Result<()> {
    if s.is_finite() && s > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "s",
            value: s,
            expected: "finite s > 1",
        })
    }
}

/// `Σ_{k≥1} (ln k)^i k^{-s}` (the `i`-th derivative magnitude `|ζ^{(i)}(s)|`),
/// summed directly up to an adaptively doubled cutoff and closed with an
/// Euler–Maclaurin tail whose remainder is bounded through incomplete gamma
/// integrals.
pub fn log_moment_sum(s: f64, i: u32, budget: &PrecisionBudget) -> Result<CertifiedValue> {
    check_s(s)?;
    let exp = TailExpansion::new(s, i);
    let scale = exp.ln_scale.exp();
    let mut partial = 0.0;
    let mut summed_to = 0u64; // partial = Σ_{k ≤ summed_to}
    let mut cutoff = FIRST_CUTOFF;
    loop {
        partial += (summed_to + 1..cutoff)
            .rev()
            .map(|k| exp.term(k))
            .sum::<f64>();
        summed_to = cutoff - 1;
        let tail = exp.tail(cutoff);
        let value = partial + tail.value;
        let rounding = 2.0 * (cutoff as f64 + 16.0) * f64::EPSILON * (partial + tail.magnitude);
        let error = tail.error + rounding;
        let target = if scale.is_finite() && scale > 0.0 {
            budget.target(value * scale) / scale
        } else {
            // Degenerate scale: fall back to the relative target only.
            budget.rel_tol() * value.abs()
        };
        if error <= target {
            return Ok(CertifiedValue::new(
                exp.unscale(value)?,
                exp.unscale(error)?,
            ));
        }
        if cutoff >= budget.max_terms() as u64 {
            return Err(Error::BudgetExhausted {
                achieved: error * scale,
                requested: target * scale,
                max_terms: budget.max_terms(),
            });
        }
        cutoff = (cutoff * 2).min(budget.max_terms() as u64);
    }
}

/// `Σ_{k ≥ start} (ln k)^i k^{-s}` via the Euler–Maclaurin tail at a fixed
/// starting index. The error bound is whatever the expansion certifies at
/// `start`; no budget is enforced.
pub fn log_moment_tail(s: f64, i: u32, start: u64) -> Result<CertifiedValue> {
    weighted_log_moment_tail(s, i, start, 0.0)
}

/// `e^{ln_weight} · Σ_{k ≥ start} (ln k)^i k^{-s}`, for tails whose weight
/// (typically `c^i/i!`) tames a sum that would itself overflow.
pub fn weighted_log_moment_tail(
    s: f64,
    i: u32,
    start: u64,
    ln_weight: f64,
) -> Result<CertifiedValue> {
    check_s(s)?;
    if start == 0 {
        return Err(Error::InvalidArgument("tail must start at k ≥ 1".into()));
    }
    let exp = TailExpansion::new(s, i);
    let head = if start == 1 { exp.term(1) } else { 0.0 };
    let tail = exp.tail(start.max(2));
    let factor = (exp.ln_scale + ln_weight).exp();
    let out = CertifiedValue::new(factor * (head + tail.value), factor * tail.error);
    if out.value.is_finite() && out.error_bound.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow("log-moment sum"))
    }
}

/// `ln( i!/(s−1)^i )`, the prefactor in `Σ_k (ln k)^i k^{-s} ≤ i!/(s−1)^i · ζ(s)`.
pub fn ln_log_moment_prefactor(s: f64, i: u32) -> f64 {
    ln_factorial(i) - f64::from(i) * (s - 1.0).ln()
}

/// The majorant `i!/(s−1)^i · ζ(s)` of [`log_moment_sum`], carrying the
/// certified error of `ζ(s)`.
pub fn log_moment_majorant(s: f64, i: u32, budget: &PrecisionBudget) -> Result<CertifiedValue> {
    let z = zeta(s, budget)?;
    let factor = ln_log_moment_prefactor(s, i).exp();
    let out = CertifiedValue::new(factor * z.value, factor * z.error_bound);
    if out.value.is_finite() {
        Ok(out)
    } else {
        Err(Error::Overflow("log-moment majorant"))
    }
}

/// `∫_a^∞ (ln x)^n x^{-p} dx`, used for truncation tails.
pub fn log_power_integral(n: u32, p: f64, a: f64) -> f64 {
    ln_log_power_integral(n, p, a).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn budget() -> PrecisionBudget {
        PrecisionBudget::default()
    }

    /// Partial sum to `n` plus the integral bracket
    /// `∫_{n+1}^∞ f ≤ Σ_{k>n} f(k) ≤ ∫_n^∞ f`, valid past the peak `e^{i/s}`.
    fn bracket_oracle(s: f64, i: u32, n: u64) -> (f64, f64) {
        assert!((n as f64) >= (f64::from(i) / s).exp());
        let partial: f64 = (2..=n)
            .rev()
            .map(|k| (k as f64).ln().powi(i as i32) * (k as f64).powf(-s))
            .sum::<f64>()
            + if i == 0 { 1.0 } else { 0.0 };
        let lo = partial + log_power_integral(i, s, (n + 1) as f64);
        let hi = partial + log_power_integral(i, s, n as f64);
        (lo, hi)
    }

    #[test]
    fn order_zero_is_zeta() {
        for &s in &[1.05, 2.0, 4.0, 11.0] {
            let m = log_moment_sum(s, 0, &budget()).unwrap();
            let z = zeta(s, &budget()).unwrap();
            assert!(
                (m.value - z.value).abs() <= m.error_bound + z.error_bound,
                "s = {s}: {} vs {}",
                m.value,
                z.value
            );
        }
    }

    #[test]
    fn second_moment_at_four() {
        // Oracle: direct sum to 2·10⁵ with the integral bracket.
        let (lo, hi) = bracket_oracle(4.0, 2, 200_000);
        let m = log_moment_sum(4.0, 2, &budget()).unwrap();
        assert!(m.upper() >= lo - 1e-14 && m.lower() <= hi + 1e-14);
        assert!((m.value - 0.065_058_161_367_880_66).abs() < 1e-12);
    }

    #[test]
    fn agrees_with_bracket_oracle() {
        for &(s, i) in &[(1.5, 1), (2.0, 3), (3.0, 5), (10.0, 2)] {
            let (lo, hi) = bracket_oracle(s, i, 1_000_000);
            let m = log_moment_sum(s, i, &budget()).unwrap();
            let slack = 1e-12 * m.value;
            assert!(
                m.upper() + slack >= lo && m.lower() - slack <= hi,
                "(s, i) = ({s}, {i})"
            );
        }
    }

    #[test]
    fn sum_below_majorant() {
        let m = log_moment_sum(2.0, 3, &budget()).unwrap();
        let bound = log_moment_majorant(2.0, 3, &budget()).unwrap();
        assert!((bound.value - std::f64::consts::PI.powi(2)).abs() < 1e-10);
        assert!(m.upper() <= bound.upper());
    }

    #[test]
    fn tail_from_one_is_full_sum() {
        // Starting at k = 2 the expansion is crude but must stay certified.
        let t = log_moment_tail(3.0, 2, 1).unwrap();
        let m = log_moment_sum(3.0, 2, &budget()).unwrap();
        assert!((t.value - m.value).abs() <= t.error_bound + m.error_bound);
        assert!(t.error_bound < 1e-2 * m.value);
    }

    #[test]
    fn tail_far_out_is_tight() {
        let t = log_moment_tail(2.0, 4, 10_000).unwrap();
        assert!(t.error_bound <= 1e-14 * t.value);
        let s = log_moment_sum(2.0, 4, &budget()).unwrap();
        let head: f64 = (2..10_000u64)
            .map(|k| (k as f64).ln().powi(4) / (k as f64).powi(2))
            .sum();
        assert!((head + t.value - s.value).abs() <= 1e-9 * s.value);
    }

    #[test]
    fn huge_moment_uses_log_space() {
        // 200!/9^200 ≈ 1e184 overflows no intermediate.
        let m = log_moment_sum(10.0, 200, &budget()).unwrap();
        let bound = log_moment_majorant(10.0, 200, &budget()).unwrap();
        assert!(m.value.is_finite() && m.value > 0.0);
        assert!(m.upper() <= bound.upper());
    }

    #[test]
    fn domain_errors() {
        assert!(log_moment_sum(1.0, 2, &budget()).is_err());
        assert!(log_moment_tail(0.5, 2, 3).is_err());
        assert!(log_moment_tail(2.0, 2, 0).is_err());
    }
}
