//! Functions, warpings and their square-root representations.
//!
//! A function `f` maps to its square-root slope function `q = sign(ḟ)√|ḟ|`,
//! which forgets vertical translation and turns warping into an L2 isometry.
//! A warping `γ` maps to its square-root transform `ψ = √γ̇`, a point on the
//! positive orthant of the unit sphere.

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Numerical floor applied to square-root transform samples.
pub const PSI_FLOOR: f64 = 1e-6;

/// Largest negative warping derivative tolerated by [`srt`] before the
/// warping is rejected as corrupted.
pub const NEGATIVE_SLOPE_EPS: f64 = 1e-8;

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// A real function sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values)?;
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn shifted(&self, c: f64) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.iter().map(|v| v + c).collect())
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.grid.interpolate(&self.values, t)
    }
}

/// Square-root slope function of a [`SampledFunction`].
#[derive(Debug, Clone, PartialEq)]
pub struct Srsf {
    grid: Grid,
    values: Vec<f64>,
}

impl Srsf {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values)?;
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.grid.norm(&self.values)
    }

    pub fn inner(&self, other: &Srsf) -> f64 {
        self.grid.inner(&self.values, &other.values)
    }

    pub fn distance(&self, other: &Srsf) -> f64 {
        self.grid.distance(&self.values, &other.values)
    }
}

/// A boundary-preserving, strictly increasing map of `[0, 1]` onto itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Warping {
    grid: Grid,
    values: Vec<f64>,
}

impl Warping {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values)?;
        check_finite(&values)?;
        let n = values.len();
        if values[0] != 0.0 || values[n - 1] != 1.0 {
            return Err(Error::InvalidWarping(format!(
                "endpoints must be 0 and 1, got {} and {}",
                values[0],
                values[n - 1]
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidWarping(format!(
                "not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { grid, values })
    }

    /// Like [`Warping::new`] but pins the endpoints to exactly 0 and 1
    /// first; used after numerical constructions that may drift by roundoff.
    pub(crate) fn pinned(grid: Grid, mut values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n > 0 {
            values[0] = 0.0;
            values[n - 1] = 1.0;
        }
        Self::new(grid, values)
    }

    pub fn identity(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: grid.points().to_vec(),
        }
    }

    pub fn from_fn(grid: &Grid, g: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| g(t)).collect();
        Self::pinned(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivative(&self) -> Vec<f64> {
        self.grid.derivative(&self.values)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.grid.interpolate(&self.values, t)
    }

    /// Deviation from the identity, `h(t) = t - γ(t)`.
    pub fn deviation(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(t, g)| t - g)
            .collect()
    }

    /// The same warping re-sampled on another grid.
    pub fn resampled(&self, grid: &Grid) -> Result<Self> {
        if *grid == self.grid {
            return Ok(self.clone());
        }
        let values = self.grid.interpolate_at(&self.values, grid.points());
        Self::pinned(grid.clone(), values)
    }
}

/// Square-root transform `ψ = √γ̇` of a warping: a unit vector with
/// nonnegative samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Srt {
    grid: Grid,
    values: Vec<f64>,
}

impl Srt {
    /// Floors the samples at [`PSI_FLOOR`] and rescales to unit L2 norm.
    pub fn project(grid: Grid, mut values: Vec<f64>) -> Result<Self> {
        grid.check_len(&values)?;
        check_finite(&values)?;
        for v in values.iter_mut() {
            *v = v.max(PSI_FLOOR);
        }
        let norm = grid.norm(&values);
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        for v in values.iter_mut() {
            *v /= norm;
        }
        Ok(Self { grid, values })
    }

    #[cfg(test)]
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        Self { grid, values }
    }

    /// `ψ ≡ 1`, the transform of the identity warping.
    pub fn identity(grid: &Grid) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![1.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.grid.norm(&self.values)
    }

    pub fn inner(&self, other: &Srt) -> f64 {
        self.grid.inner(&self.values, &other.values)
    }

    /// Arc length `arccos⟨ψ1, ψ2⟩` to `other` on the unit sphere. Close
    /// points use the chord form `2 asin(‖ψ1 - ψ2‖/2)`, which does not lose
    /// precision near zero.
    pub fn distance(&self, other: &Srt) -> f64 {
        let ip = self.inner(other).clamp(-1.0, 1.0);
        if ip < 0.9 {
            return ip.acos();
        }
        let chord = self.grid.distance(&self.values, &other.values);
        2.0 * (0.5 * chord).min(1.0).asin()
    }
}

/// `q = sign(ḟ)√|ḟ|` with `ḟ` from finite differences.
pub fn srsf(f: &SampledFunction) -> Result<Srsf> {
    let grid = f.grid();
    if grid.len() < 3 {
        return Err(Error::GridTooShort(grid.len()));
    }
    let values = grid
        .derivative(f.values())
        .into_iter()
        .map(|d| d.signum() * d.abs().sqrt())
        .map(|v| if v == 0.0 { 0.0 } else { v })
        .collect();
    Srsf::new(grid.clone(), values)
}

/// `f(t) = f0 + ∫₀ᵗ q|q|`.
pub fn srsf_inverse(q: &Srsf, f0: f64) -> Result<SampledFunction> {
    let integrand: Vec<f64> = q.values().iter().map(|v| v * v.abs()).collect();
    let values = q
        .grid()
        .cumulative_integral(&integrand)
        .into_iter()
        .map(|v| v + f0)
        .collect();
    SampledFunction::new(q.grid().clone(), values)
}

/// The warping action on SRSFs, `(q, γ) = (q ∘ γ)√γ̇`.
pub fn group_action(q: &Srsf, g: &Warping) -> Result<Srsf> {
    let g = g.resampled(q.grid())?;
    let grid = q.grid();
    let slope = g.derivative();
    let values = g
        .values()
        .iter()
        .zip(&slope)
        .map(|(&x, &d)| grid.interpolate(q.values(), x) * d.max(0.0).sqrt())
        .collect();
    Srsf::new(grid.clone(), values)
}

/// `ψ = √γ̇`, floored and renormalized to the unit sphere.
pub fn srt(g: &Warping) -> Result<Srt> {
    let slope = g.derivative();
    if let Some((index, &value)) = slope
        .iter()
        .enumerate()
        .find(|(_, &d)| d < -NEGATIVE_SLOPE_EPS)
    {
        return Err(Error::NegativeDerivative { index, value });
    }
    let values = slope.into_iter().map(|d| d.max(0.0).sqrt()).collect();
    Srt::project(g.grid().clone(), values)
}

/// `γ(t) = ∫₀ᵗ ψ²`, rescaled so that `γ(1) = 1` holds exactly.
pub fn srt_inverse(psi: &Srt) -> Result<Warping> {
    let squared: Vec<f64> = psi.values().iter().map(|v| v * v).collect();
    let mut values = psi.grid().cumulative_integral(&squared);
    let total = *values.last().unwrap();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    for v in values.iter_mut() {
        *v /= total;
    }
    Warping::pinned(psi.grid().clone(), values)
}

/// `f ∘ γ` by linear interpolation of `f`.
pub fn warp_apply(f: &SampledFunction, g: &Warping) -> Result<SampledFunction> {
    let g = g.resampled(f.grid())?;
    let values = f.grid().interpolate_at(f.values(), g.values());
    SampledFunction::new(f.grid().clone(), values)
}

/// `γ⁻¹`, obtained by swapping the roles of `t` and `γ(t)`.
pub fn warp_invert(g: &Warping) -> Result<Warping> {
    let values = g
        .grid()
        .points()
        .iter()
        .map(|&t| crate::grid::interp_knots(g.values(), g.grid().points(), t))
        .collect();
    Warping::pinned(g.grid().clone(), values)
}

/// `g1 ∘ g2`, i.e. `t ↦ g1(g2(t))`.
pub fn warp_compose(g1: &Warping, g2: &Warping) -> Result<Warping> {
    let g2 = g2.resampled(g1.grid())?;
    let values = g1.grid().interpolate_at(g1.values(), g2.values());
    Warping::pinned(g1.grid().clone(), values)
}

/// Average height `∫₀¹ f`.
pub fn mean_height(f: &SampledFunction) -> f64 {
    f.grid().integrate(f.values())
}

/// Maps `times` affinely onto `[0, 1]` and linearly interpolates `values` at
/// the grid points.
pub fn resample_linear(times: &[f64], values: &[f64], grid: &Grid) -> Result<SampledFunction> {
    let knots = normalized_times(times, values, 2)?;
    let out = grid
        .points()
        .iter()
        .map(|&t| crate::grid::interp_knots(&knots, values, t))
        .collect();
    SampledFunction::new(grid.clone(), out)
}

pub(crate) fn normalized_times(times: &[f64], values: &[f64], min_len: usize) -> Result<Vec<f64>> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            actual: values.len(),
        });
    }
    if times.len() < min_len {
        return Err(Error::TooFewSamples {
            required: min_len,
            actual: times.len(),
        });
    }
    check_finite(times)?;
    check_finite(values)?;
    if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidTimes(format!(
            "times[{}] = {} does not exceed times[{}] = {}",
            i + 1,
            times[i + 1],
            i,
            times[i]
        )));
    }
    let (a, b) = (times[0], times[times.len() - 1]);
    let mut knots: Vec<f64> = times.iter().map(|t| (t - a) / (b - a)).collect();
    let n = knots.len();
    knots[0] = 0.0;
    knots[n - 1] = 1.0;
    Ok(knots)
}
