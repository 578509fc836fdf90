//! Log-space factorials and the upper incomplete gamma function at integer
//! order, as needed for integral tails of `(ln x)^n x^{-s}`.

/// `ln n!`, summed directly. Exact up to rounding for every `n`.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// `ln Γ(a, x)` for integer order `a ≥ 1` and `x ≥ 0`.
///
/// Uses the finite expansion `Γ(a, x) = (a−1)! e^{-x} Σ_{k<a} x^k / k!`,
/// whose terms are generated top-down by `t_{k-1} = t_k · k / x` and summed
/// with a log-sum-exp shift, so neither the factorial nor `x^k` overflow.
pub fn ln_upper_gamma(a: u32, x: f64) -> f64 {
    assert!(a >= 1, "integer order must be positive");
    debug_assert!(x >= 0.0);
    let n = a - 1;
    if x == 0.0 {
        return ln_factorial(n);
    }
    let ln_x = x.ln();
    // t_k = ln(n!/k!) + k ln x, for k = n down to 0.
    let mut terms = Vec::with_capacity(n as usize + 1);
    let mut t = f64::from(n) * ln_x;
    terms.push(t);
    for k in (1..=n).rev() {
        t += f64::from(k).ln() - ln_x;
        terms.push(t);
    }
    -x + log_sum_exp(&terms)
}

/// `∫_a^∞ (ln x)^n x^{-p} dx = Γ(n+1, (p−1) ln a) / (p−1)^{n+1}`, in log
/// space. Requires `p > 1` and `a ≥ 1`.
pub fn ln_log_power_integral(n: u32, p: f64, a: f64) -> f64 {
    let shift = p - 1.0;
    ln_upper_gamma(n + 1, shift * a.ln()) - f64::from(n + 1) * shift.ln()
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn factorials() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert_relative_eq!(ln_factorial(5), 120f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(
            ln_factorial(20),
            2_432_902_008_176_640_000f64.ln(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn order_one_is_exponential() {
        for &x in &[0.0, 0.3, 2.0, 40.0] {
            assert_relative_eq!(ln_upper_gamma(1, x), -x, epsilon = 1e-14);
        }
    }

    #[test]
    fn matches_closed_forms() {
        // Γ(3, x) = e^{-x}(x² + 2x + 2)
        for x in [0.1f64, 1.0, 7.5] {
            let expected = (-x).exp() * (x * x + 2.0 * x + 2.0);
            assert_relative_eq!(ln_upper_gamma(3, x).exp(), expected, max_relative = 1e-14);
        }
        assert_relative_eq!(ln_upper_gamma(4, 0.0).exp(), 6.0, max_relative = 1e-15);
    }

    #[test]
    fn upward_recurrence_holds() {
        // Γ(a+1, x) = a Γ(a, x) + x^a e^{-x}
        let x = 3.7;
        for a in 1..30u32 {
            let lhs = ln_upper_gamma(a + 1, x).exp();
            let rhs = f64::from(a) * ln_upper_gamma(a, x).exp() + x.powi(a as i32) * (-x).exp();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn large_order_stays_finite() {
        let v = ln_upper_gamma(400, 12.0);
        assert!(v.is_finite());
        // Γ(a, x) → (a−1)! when x ≪ a
        assert_relative_eq!(v, ln_factorial(399), max_relative = 1e-12);
    }

    #[test]
    fn power_integral_inverse_square() {
        // ∫_a^∞ x^{-2} dx = 1/a
        assert_relative_eq!(
            ln_log_power_integral(0, 2.0, 5.0).exp(),
            0.2,
            max_relative = 1e-14
        );
    }
}
