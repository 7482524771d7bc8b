use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classic Tukey boxplot of the translation constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationBoxplot {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub lower_whisker: f64,
    pub upper_whisker: f64,
    pub outlier_indices: Vec<usize>,
    pub k: f64,
}

/// Linear-interpolation quantile of sorted data (Hyndman–Fan type 7).
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn translation_boxplot(cs: &[f64], k: f64) -> Result<TranslationBoxplot> {
    if cs.len() < 4 {
        return Err(Error::TooFewSamples {
            required: 4,
            actual: cs.len(),
        });
    }
    if let Some(i) = cs.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidConfig(format!("k must be positive, got {k}")));
    }
    let mut sorted = cs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let median = quantile_sorted(&sorted, 0.5);
    let q3 = quantile_sorted(&sorted, 0.75);
    let spread = k * (q3 - q1);
    let (lo, hi) = (q1 - spread, q3 + spread);
    let inside = || sorted.iter().copied().filter(|&c| c >= lo && c <= hi);
    Ok(TranslationBoxplot {
        median,
        q1,
        q3,
        lower_whisker: inside().fold(f64::INFINITY, f64::min),
        upper_whisker: inside().fold(f64::NEG_INFINITY, f64::max),
        outlier_indices: (0..cs.len()).filter(|&i| cs[i] < lo || cs[i] > hi).collect(),
        k,
    })
}
