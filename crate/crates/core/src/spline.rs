//! Natural cubic spline resampling for coarsely sampled inputs.

use crate::error::Result;
use crate::functions::{normalized_times, SampledFunction};
use crate::grid::Grid;

/// Natural cubic spline through `(x, y)` knots.
#[derive(Debug, Clone)]
pub struct NaturalSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl NaturalSpline {
    /// `knots` must be strictly increasing with at least two entries.
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Self {
        let n = knots.len();
        debug_assert!(n >= 2 && values.len() == n);
        let mut second = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives (Thomas algorithm).
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for k in 0..m {
                let i = k + 1;
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                diag[k] = 2.0 * (h0 + h1);
                upper[k] = h1;
                rhs[k] = 6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0);
            }
            for k in 1..m {
                let lower = knots[k + 1] - knots[k];
                let w = lower / diag[k - 1];
                diag[k] -= w * upper[k - 1];
                rhs[k] -= w * rhs[k - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for k in (0..m - 1).rev() {
                second[k + 1] = (rhs[k] - upper[k] * second[k + 2]) / diag[k];
            }
        }
        Self {
            knots,
            values,
            second,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        let n = k.len();
        let i = match k.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        };
        let h = k[i + 1] - k[i];
        let a = (k[i + 1] - x) / h;
        let b = (x - k[i]) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / 6.0
    }
}

/// Fits a natural cubic spline through `(times, values)` after mapping the
/// time span affinely onto `[0, 1]`, and samples it on `grid`.
pub fn resample_spline(times: &[f64], values: &[f64], grid: &Grid) -> Result<SampledFunction> {
    let knots = normalized_times(times, values, 4)?;
    let spline = NaturalSpline::new(knots, values.to_vec());
    SampledFunction::from_fn(grid, |t| spline.eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    #[test]
    fn identity_on_grid_points() {
        let grid = Grid::uniform(21).unwrap();
        let values: Vec<f64> = grid.points().iter().map(|t| (5.0 * t).sin()).collect();
        let f = resample_spline(grid.points(), &values, &grid).unwrap();
        for (a, b) in f.values().iter().zip(&values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reproduces_linear_data() {
        let times = [1950.0, 1951.5, 1953.0, 1957.0, 1960.0];
        let values: Vec<f64> = times.iter().map(|t| 2.0 * (t - 1950.0) + 1.0).collect();
        let grid = Grid::uniform(101).unwrap();
        let f = resample_spline(&times, &values, &grid).unwrap();
        for (t, v) in grid.points().iter().zip(f.values()) {
            assert!((v - (20.0 * t + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn twelve_monthly_samples_of_a_sine() {
        // Samples at the month midpoints, span mapped onto [0, 1].
        let times: Vec<f64> = (0..12).map(|m| m as f64 / 11.0).collect();
        let values: Vec<f64> = times.iter().map(|t| (2.0 * PI * t).sin()).collect();
        let grid = Grid::uniform(101).unwrap();
        let f = resample_spline(&times, &values, &grid).unwrap();
        let err = grid
            .points()
            .iter()
            .zip(f.values())
            .map(|(t, v)| (v - (2.0 * PI * t).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 0.01, "sup error {err}");
    }

    #[test]
    fn rejects_duplicate_times() {
        let grid = Grid::uniform(11).unwrap();
        let err = resample_spline(&[0.0, 1.0, 1.0, 2.0], &[0.0; 4], &grid).unwrap_err();
        assert!(matches!(err, Error::InvalidTimes(_)));
        let err = resample_spline(&[0.0, 1.0, 2.0], &[0.0; 3], &grid).unwrap_err();
        assert!(matches!(err, Error::TooFewSamples { .. }));
    }
}
