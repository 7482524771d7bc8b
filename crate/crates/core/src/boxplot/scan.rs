use serde::{Deserialize, Serialize};

use super::{amplitude_boxplot, phase_boxplot, BoxplotOptions, OutlierRule};
use crate::decompose::Decomposition;
use crate::error::Result;

pub const DEFAULT_AMPLITUDE_SCAN: [f64; 7] = [0.6, 0.8, 1.0, 1.2, 1.3, 1.5, 1.7];
pub const DEFAULT_PHASE_SCAN: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

// Slack for k values produced by float arithmetic, e.g. 0.1 * 7.
const K_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Mild,
    Regular,
    Severe,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Mild => "mild",
            Severity::Regular => "regular",
            Severity::Severe => "severe",
        }
    }
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn classify(k: f64, cuts: [f64; 3]) -> Option<Severity> {
    if k + K_SLACK >= cuts[2] {
        Some(Severity::Severe)
    } else if k + K_SLACK >= cuts[1] {
        Some(Severity::Regular)
    } else if k + K_SLACK >= cuts[0] {
        Some(Severity::Mild)
    } else {
        None
    }
}

/// Amplitude scale: mild `[0.6, 0.8)`, regular `[0.8, 1.3)`, severe `[1.3, ∞)`.
pub fn amplitude_severity(k_a: f64) -> Option<Severity> {
    classify(k_a, [0.6, 0.8, 1.3])
}

/// Phase scale: mild `[0.5, 0.7)`, regular `[0.7, 0.9)`, severe `[0.9, ∞)`.
pub fn phase_severity(k_p: f64) -> Option<Severity> {
    classify(k_p, [0.5, 0.7, 0.9])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeverityEntry {
    pub index: usize,
    /// Largest scanned k at which the sample is still flagged.
    pub max_k: f64,
    pub severity: Severity,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SeverityReport {
    pub amplitude: Vec<SeverityEntry>,
    pub phase: Vec<SeverityEntry>,
}

impl SeverityReport {
    pub fn is_empty(&self) -> bool {
        self.amplitude.is_empty() && self.phase.is_empty()
    }
}

fn scan(
    n: usize,
    grid: &[f64],
    flags: impl Fn(f64) -> Result<Vec<usize>>,
    label: fn(f64) -> Option<Severity>,
) -> Result<Vec<SeverityEntry>> {
    let mut best: Vec<Option<f64>> = vec![None; n];
    for &k in grid {
        for i in flags(k)? {
            if best[i].is_none_or(|b| k > b) {
                best[i] = Some(k);
            }
        }
    }
    Ok(best
        .into_iter()
        .enumerate()
        .filter_map(|(index, k)| {
            let max_k = k?;
            Some(SeverityEntry {
                index,
                max_k,
                severity: label(max_k)?,
            })
        })
        .collect())
}

/// Labels every sample by the largest scanned k that still flags it.
pub fn outlier_scan(
    dec: &Decomposition,
    k_a_grid: &[f64],
    k_p_grid: &[f64],
    lambda: f64,
    rule: OutlierRule,
) -> Result<SeverityReport> {
    let opts = |k| BoxplotOptions { k, lambda, rule };
    Ok(SeverityReport {
        amplitude: scan(
            dec.len(),
            k_a_grid,
            |k| Ok(amplitude_boxplot(dec, &opts(k))?.outlier_indices),
            amplitude_severity,
        )?,
        phase: scan(
            dec.len(),
            k_p_grid,
            |k| Ok(phase_boxplot(dec, &opts(k))?.outlier_indices),
            phase_severity,
        )?,
    })
}
