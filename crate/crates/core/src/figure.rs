//! Data comparing the two closed-form lower bounds for `ζ(1+x)` with the
//! certified value over the crossing window.

use crate::error::{Error, Result};
use crate::special_functions::{
    crossing_root, lower_bound_f, lower_bound_g, zeta, CertifiedValue, PrecisionBudget,
    CROSSING_WINDOW,
};
use crate::verify::linear_grid;

pub const DEFAULT_FIGURE_POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureRow {
    pub x: f64,
    /// `1/x + f(x)`.
    pub with_f: f64,
    /// `1/x + g(x)`.
    pub with_g: f64,
    /// `ζ(x + 1)`.
    pub zeta: CertifiedValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub rows: Vec<FigureRow>,
    pub crossing_root: f64,
}

/// `points` evenly spaced `x` across [`CROSSING_WINDOW`], endpoints included.
pub fn figure_data(points: usize, budget: &PrecisionBudget) -> Result<FigureData> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let rows = linear_grid(CROSSING_WINDOW.0, CROSSING_WINDOW.1, points)
        .into_iter()
        .map(|x| {
            Ok(FigureRow {
                x,
                with_f: 1.0 / x + lower_bound_f(x)?,
                with_g: 1.0 / x + lower_bound_g(x)?,
                zeta: zeta(1.0 + x, budget)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FigureData {
        rows,
        crossing_root: crossing_root(budget)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_below_zeta_and_switch_at_root() {
        let data = figure_data(DEFAULT_FIGURE_POINTS, &PrecisionBudget::default()).unwrap();
        assert_eq!(data.rows.len(), 200);
        for r in &data.rows {
            assert!(
                r.with_f <= r.zeta.upper() && r.with_g <= r.zeta.upper(),
                "{r:?}"
            );
            if r.x < data.crossing_root - 1e-9 {
                assert!(r.with_g > r.with_f);
            } else if r.x > data.crossing_root + 1e-9 {
                assert!(r.with_g < r.with_f);
            }
        }
    }

    #[test]
    fn values_at_two() {
        // x = 2 lies on the 100-point grid 0.1 + 0.1k.
        let data = figure_data(100, &PrecisionBudget::default()).unwrap();
        let r = data
            .rows
            .iter()
            .find(|r| (r.x - 2.0).abs() < 1e-12)
            .unwrap();
        let root_2_over_pi = (2.0 / std::f64::consts::PI).sqrt();
        assert!((r.with_f - (0.5 + root_2_over_pi / 3.0)).abs() < 1e-14);
        assert!((r.with_g - (0.5 + 2.0 / 3.0)).abs() < 1e-14);
        assert!((r.zeta.value - 1.202_056_903_159_594_3).abs() < 1e-12);
        assert!(figure_data(1, &PrecisionBudget::default()).is_err());
    }
}
