//! Grid checks of the zeta inequalities the norm bounds rest on.
//!
//! Each check evaluates a margin (`rhs − lhs` of an inequality that should
//! hold, with certified errors in its favour) at every grid point; a point
//! passes when its margin is at least [`MARGIN_FLOOR`].

use crate::error::{Error, Result};
use crate::special_functions::{
    crossing_root, log_moment_majorant, log_moment_sum, lower_bound_f, lower_bound_g,
    lower_bound_h, zeta, PrecisionBudget, CROSSING_WINDOW,
};

pub const MARGIN_FLOOR: f64 = -1e-12;

/// Orders and exponents of the log-moment check.
pub const LOG_MOMENT_ORDERS: std::ops::RangeInclusive<u32> = 1..=10;
pub const LOG_MOMENT_EXPONENTS: [f64; 4] = [1.5, 2.0, 3.0, 10.0];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub points: usize,
    pub budget: PrecisionBudget,
    /// Flips the lower inequality of the zeta bracket; for testing the harness.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            s_min: 1.001,
            s_max: 100.0,
            points: 500,
            budget: PrecisionBudget::default(),
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub points: usize,
    pub passed: usize,
    pub min_margin: f64,
    /// Grid argument where the margin is smallest.
    pub worst_at: f64,
    /// `(argument, margin)` of each failing point.
    pub failures: Vec<(f64, f64)>,
}

impl LemmaCheck {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Self {
            name,
            statement,
            points: 0,
            passed: 0,
            min_margin: f64::INFINITY,
            worst_at: f64::NAN,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, at: f64, margin: f64) {
        self.points += 1;
        if margin < self.min_margin || self.worst_at.is_nan() {
            self.min_margin = margin;
            self.worst_at = at;
        }
        if margin >= MARGIN_FLOOR {
            self.passed += 1;
        } else {
            self.failures.push((at, margin));
        }
    }

    pub fn all_passed(&self) -> bool {
        self.passed == self.points
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<LemmaCheck>,
    pub crossing_root: f64,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(LemmaCheck::all_passed)
    }
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * k as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Runs every grid check.
///
/// The zeta checks use `points` log-spaced `s` in `[s_min, s_max]`; the
/// cubic bound `1/x + g(x) ≤ ζ(1+x)` uses `x = s − 1` on the same grid. The
/// dominance switch between `f` and `g` is checked on `points` linear points
/// of the crossing window, and the log-moment bound on its fixed table.
pub fn run_lemma_suite(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(cfg.s_min.is_finite()
        && cfg.s_min > 1.0
        && cfg.s_max.is_finite()
        && cfg.s_max >= cfg.s_min)
    {
        return Err(Error::InvalidArgument(format!(
            "grid needs 1 < s_min ≤ s_max < ∞, got [{}, {}]",
            cfg.s_min, cfg.s_max
        )));
    }
    if cfg.points == 0 {
        return Err(Error::InvalidArgument(
            "grid needs at least one point".into(),
        ));
    }
    let budget = &cfg.budget;
    let mut rely = LemmaCheck::new("zeta_bracket", "1/(s-1) <= zeta(s) <= s/(s-1)");
    let mut improved = LemmaCheck::new("zeta_lower_h", "1/(s-1) + ((s-1)/s)/sqrt(2 pi) <= zeta(s)");
    let mut cubic = LemmaCheck::new("zeta_lower_g", "1/x + g(x) <= zeta(1+x)");
    for s in log_grid(cfg.s_min, cfg.s_max, cfg.points) {
        let z = zeta(s, budget)?;
        let lower = 1.0 / (s - 1.0);
        let upper = s / (s - 1.0);
        let lower_margin = if cfg.inject_fault {
            lower - z.lower()
        } else {
            z.upper() - lower
        };
        rely.record(s, lower_margin.min(upper - z.lower()));
        improved.record(s, z.upper() - lower_bound_h(s)?);
        let x = s - 1.0;
        cubic.record(x, z.upper() - (1.0 / x + lower_bound_g(x)?));
    }

    let s2 = crossing_root(budget)?;
    let tol = budget.abs_tol();
    let mut switch = LemmaCheck::new(
        "dominance_switch",
        "g >= f below the crossing, g <= f above it",
    );
    for x in linear_grid(CROSSING_WINDOW.0, CROSSING_WINDOW.1, cfg.points) {
        let d = lower_bound_f(x)? - lower_bound_g(x)?;
        if x > s2 + tol {
            switch.record(x, d);
        } else if x < s2 - tol {
            switch.record(x, -d);
        }
    }

    let mut moments = LemmaCheck::new("log_moment", "sum (ln k)^i k^-s <= i!/(s-1)^i zeta(s)");
    for &s in &LOG_MOMENT_EXPONENTS {
        for i in LOG_MOMENT_ORDERS {
            let sum = log_moment_sum(s, i, budget)?;
            let bound = log_moment_majorant(s, i, budget)?;
            // Indexed as s + i/100 so failures name both parameters.
            moments.record(s + f64::from(i) / 100.0, bound.upper() - sum.lower());
        }
    }

    Ok(VerificationReport {
        checks: vec![rely, improved, cubic, switch, moments],
        crossing_root: s2,
    })
}
