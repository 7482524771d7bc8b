//! Boxplots for the three components of variability.
//!
//! Amplitude and phase boxplots share one recipe: order the samples by their
//! distance to the component median, keep the closest half as the central
//! region, pick two quartiles from it that are far from the median and point
//! in opposite directions, then extend each quartile by `k × IQR` along its
//! own direction to obtain the outlier cutoffs.

mod amplitude;
mod phase;
mod scan;
mod surface;
mod translation;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::median::DIST_EPS;

pub use amplitude::{amplitude_boxplot, amplitude_quartiles, AmplitudeBoxplot};
pub use phase::{phase_boxplot, phase_quartiles, PhaseBoxplot};
pub use scan::{
    amplitude_severity, outlier_scan, phase_severity, Severity, SeverityEntry, SeverityReport,
    DEFAULT_AMPLITUDE_SCAN, DEFAULT_PHASE_SCAN,
};
pub use surface::{
    surface_display, CurveRole, SurfaceCurve, SurfaceDisplay, SurfaceMode, SurfaceSource,
};
pub use translation::{translation_boxplot, TranslationBoxplot};

/// Default weight between the distance and the direction terms of the
/// quartile objective.
pub const DEFAULT_LAMBDA: f64 = 0.5;
/// Severe-scale cutoff constants.
pub const DEFAULT_K_AMPLITUDE: f64 = 1.3;
pub const DEFAULT_K_PHASE: f64 = 0.9;
/// Classic Tukey constant for the translation boxplot.
pub const DEFAULT_K_TRANSLATION: f64 = 1.5;

/// Which cutoff distance decides outlyingness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutlierRule {
    /// Beyond the farther of the two cutoffs.
    #[default]
    Max,
    /// Beyond the nearer cutoff; flags a superset of [`OutlierRule::Max`].
    Min,
}

impl OutlierRule {
    pub(crate) fn pick(self, a: f64, b: f64) -> f64 {
        match self {
            OutlierRule::Max => a.max(b),
            OutlierRule::Min => a.min(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxplotOptions {
    pub k: f64,
    pub lambda: f64,
    pub rule: OutlierRule,
}

impl BoxplotOptions {
    pub fn new(k: f64) -> Self {
        Self {
            k,
            lambda: DEFAULT_LAMBDA,
            rule: OutlierRule::Max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.k.is_finite() || self.k <= 0.0 {
            return Err(Error::InvalidConfig(format!("k must be positive, got {}", self.k)));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidConfig(format!(
                "lambda must lie in [0, 1], got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Indices of the `⌊n/2⌋` samples closest to the median, ascending by
/// distance; ties go to the smaller index.
pub fn central_region(distances: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..distances.len()).collect();
    order.sort_by(|&a, &b| distances[a].total_cmp(&distances[b]).then(a.cmp(&b)));
    order.truncate(distances.len() / 2);
    order
}

/// Exhaustive search of the quartile objective
/// `(1-λ)(‖x_a‖ + ‖x_b‖)/max‖x‖ - λ(⟨x_a/‖x_a‖, x_b/‖x_b‖⟩ + 1)` over
/// unordered pairs `a < b`. `inner(a, b)` returns the raw inner product.
///
/// Members within [`DIST_EPS`] of the median are skipped. The first pair in
/// lexicographic order wins ties.
pub(crate) fn select_pair(
    norms: &[f64],
    inner: impl Fn(usize, usize) -> f64,
    lambda: f64,
) -> Result<(usize, usize)> {
    let usable: Vec<usize> = (0..norms.len()).filter(|&i| norms[i] >= DIST_EPS).collect();
    if usable.len() < 2 {
        return Err(Error::Degenerate);
    }
    let max = usable.iter().map(|&i| norms[i]).fold(0.0, f64::max);
    let mut best: Option<((usize, usize), f64)> = None;
    for (pos, &a) in usable.iter().enumerate() {
        for &b in &usable[pos + 1..] {
            let cos = inner(a, b) / (norms[a] * norms[b]);
            let value = (1.0 - lambda) * (norms[a] + norms[b]) / max - lambda * (cos + 1.0);
            if best.is_none_or(|(_, v)| value > v) {
                best = Some(((a, b), value));
            }
        }
    }
    Ok(best.unwrap().0)
}

pub(crate) fn closest_candidate(
    candidates: &[usize],
    distance_to: impl Fn(usize) -> f64,
) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for &i in candidates {
        let d = distance_to(i);
        if best.is_none_or(|(_, v)| d < v) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}
