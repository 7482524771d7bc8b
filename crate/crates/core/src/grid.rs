//! Discretization of the unit interval and the numerical primitives shared by
//! every representation: trapezoidal quadrature, finite differences and
//! piecewise-linear interpolation.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Default number of points of the working grid.
pub const DEFAULT_GRID_SIZE: usize = 101;

/// Strictly increasing abscissae on `[0, 1]` with both endpoints included.
///
/// Cloning is cheap; the points live behind an `Arc` so that every function
/// sampled on the same grid shares one allocation.
#[derive(Debug, Clone)]
pub struct Grid {
    points: Arc<[f64]>,
    uniform: bool,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::GridTooShort(n));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if points[0] != 0.0 || points[n - 1] != 1.0 {
            return Err(Error::InvalidGrid(format!(
                "endpoints must be 0 and 1, got {} and {}",
                points[0],
                points[n - 1]
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "points not strictly increasing at index {}",
                i + 1
            )));
        }
        let h = 1.0 / (n - 1) as f64;
        let uniform = points
            .iter()
            .enumerate()
            .all(|(i, &p)| (p - i as f64 * h).abs() <= 1e-12);
        Ok(Self {
            points: points.into(),
            uniform,
        })
    }

    /// `n` equally spaced points `i / (n - 1)`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::GridTooShort(n));
        }
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| i as f64 / last).collect();
        points[n - 1] = 1.0;
        Self::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub(crate) fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: values.len(),
            });
        }
        Ok(())
    }

    /// Trapezoidal approximation of `∫₀¹ v(t) dt`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        self.points
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum()
    }

    /// Running trapezoidal integral, starting at zero.
    pub fn cumulative_integral(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.len());
        let mut out = Vec::with_capacity(values.len());
        let mut acc = 0.0;
        out.push(acc);
        for (t, v) in self.points.windows(2).zip(values.windows(2)) {
            acc += 0.5 * (t[1] - t[0]) * (v[0] + v[1]);
            out.push(acc);
        }
        out
    }

    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), self.len());
        debug_assert_eq!(b.len(), self.len());
        self.points
            .windows(2)
            .enumerate()
            .map(|(i, t)| 0.5 * (t[1] - t[0]) * (a[i] * b[i] + a[i + 1] * b[i + 1]))
            .sum()
    }

    pub fn norm(&self, a: &[f64]) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }

    /// L2 distance between two sampled functions.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = 0.0;
        for i in 0..self.len() - 1 {
            let e0 = a[i] - b[i];
            let e1 = a[i + 1] - b[i + 1];
            acc += 0.5 * (self.points[i + 1] - self.points[i]) * (e0 * e0 + e1 * e1);
        }
        acc.max(0.0).sqrt()
    }

    /// Central differences in the interior, one-sided at both ends.
    pub fn derivative(&self, values: &[f64]) -> Vec<f64> {
        debug_assert_eq!(values.len(), self.len());
        let t = &self.points;
        let n = t.len();
        let mut d = Vec::with_capacity(n);
        d.push((values[1] - values[0]) / (t[1] - t[0]));
        for i in 1..n - 1 {
            d.push((values[i + 1] - values[i - 1]) / (t[i + 1] - t[i - 1]));
        }
        d.push((values[n - 1] - values[n - 2]) / (t[n - 1] - t[n - 2]));
        d
    }

    /// Index `a` with `t[a] <= x <= t[a + 1]`, clamped to the grid.
    pub(crate) fn bracket(&self, x: f64) -> usize {
        let t = &self.points;
        let n = t.len();
        if x <= t[0] {
            return 0;
        }
        if x >= t[n - 1] {
            return n - 2;
        }
        if self.uniform {
            let a = (x * (n - 1) as f64).floor() as usize;
            let mut a = a.min(n - 2);
            // Floor can land one cell off when x sits on a rounded grid point.
            while a > 0 && t[a] > x {
                a -= 1;
            }
            while a < n - 2 && t[a + 1] < x {
                a += 1;
            }
            return a;
        }
        match t.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        }
    }

    /// Linear interpolation of `values` at `x`, with constant extension
    /// outside `[0, 1]`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> f64 {
        let t = &self.points;
        let n = t.len();
        if x <= t[0] {
            return values[0];
        }
        if x >= t[n - 1] {
            return values[n - 1];
        }
        let a = self.bracket(x);
        let w = (x - t[a]) / (t[a + 1] - t[a]);
        values[a] + w * (values[a + 1] - values[a])
    }

    pub fn interpolate_at(&self, values: &[f64], xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.interpolate(values, x)).collect()
    }
}

/// Piecewise-linear interpolation on arbitrary increasing knots.
pub(crate) fn interp_knots(knots: &[f64], values: &[f64], x: f64) -> f64 {
    let n = knots.len();
    if x <= knots[0] {
        return values[0];
    }
    if x >= knots[n - 1] {
        return values[n - 1];
    }
    let i = match knots.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
        Ok(i) => return values[i],
        Err(i) => i - 1,
    };
    let w = (x - knots[i]) / (knots[i + 1] - knots[i]);
    values[i] + w * (values[i + 1] - values[i])
}
