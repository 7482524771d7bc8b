//! JSON documents written by the commands. Curve arrays are sampled on the
//! working grid stored in `decomposition.grid`.

use elastic_boxplot::{
    AmplitudeBoxplot, Decomposition, Grid, MedianDiagnostics, OutlierRule, PhaseBoxplot,
    SampledFunction, SeverityReport, Severity, Srsf, Srt, SurfaceDisplay, TranslationBoxplot,
    Warping,
};
use serde::{Deserialize, Serialize};

use crate::dataset::Resample;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub source: String,
    pub names: Vec<String>,
    /// Original time range, mapped onto [0, 1] for processing.
    pub time_span: [f64; 2],
    pub resample: Resample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub amplitude_iterations: usize,
    pub amplitude_converged: bool,
    pub phase_iterations: usize,
    pub phase_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionData {
    pub grid: Vec<f64>,
    pub translations: Vec<f64>,
    pub amplitudes: Vec<Vec<f64>>,
    pub amplitude_srsfs: Vec<Vec<f64>>,
    pub phases: Vec<Vec<f64>>,
    pub amp_median: Vec<f64>,
    pub amp_median_srsf: Vec<f64>,
    pub amp_distances: Vec<f64>,
    pub phase_median: Vec<f64>,
    pub phase_median_srt: Vec<f64>,
    pub phase_distances: Vec<f64>,
    pub diagnostics: Diagnostics,
}

fn rows<T>(xs: &[T], values: impl Fn(&T) -> &[f64]) -> Vec<Vec<f64>> {
    xs.iter().map(|x| values(x).to_vec()).collect()
}

impl DecompositionData {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        let m = d.diagnostics;
        Self {
            grid: d.grid().points().to_vec(),
            translations: d.translations.clone(),
            amplitudes: rows(&d.amplitudes, SampledFunction::values),
            amplitude_srsfs: rows(&d.amplitude_srsfs, Srsf::values),
            phases: rows(&d.phases, Warping::values),
            amp_median: d.amp_median.values().to_vec(),
            amp_median_srsf: d.amp_median_srsf.values().to_vec(),
            amp_distances: d.amp_distances.clone(),
            phase_median: d.phase_median.values().to_vec(),
            phase_median_srt: d.phase_median_srt.values().to_vec(),
            phase_distances: d.phase_distances.clone(),
            diagnostics: Diagnostics {
                amplitude_iterations: m.amplitude_iterations,
                amplitude_converged: m.amplitude_converged,
                phase_iterations: m.phase_iterations,
                phase_converged: m.phase_converged,
            },
        }
    }

    pub fn to_decomposition(&self) -> Result<Decomposition, CliError> {
        let bad = |e: elastic_boxplot::Error| CliError::input(format!("report decomposition: {e}"));
        let grid = Grid::new(self.grid.clone()).map_err(bad)?;
        let func = |v: &Vec<f64>| SampledFunction::new(grid.clone(), v.clone());
        let q = |v: &Vec<f64>| Srsf::new(grid.clone(), v.clone());
        let warp = |v: &Vec<f64>| Warping::new(grid.clone(), v.clone());
        let m = self.diagnostics;
        let d = Decomposition {
            translations: self.translations.clone(),
            amplitudes: self.amplitudes.iter().map(func).collect::<Result<_, _>>().map_err(bad)?,
            amplitude_srsfs: self.amplitude_srsfs.iter().map(q).collect::<Result<_, _>>().map_err(bad)?,
            phases: self.phases.iter().map(warp).collect::<Result<_, _>>().map_err(bad)?,
            amp_median: func(&self.amp_median).map_err(bad)?,
            amp_median_srsf: q(&self.amp_median_srsf).map_err(bad)?,
            amp_distances: self.amp_distances.clone(),
            phase_median: warp(&self.phase_median).map_err(bad)?,
            phase_median_srt: Srt::project(grid.clone(), self.phase_median_srt.clone()).map_err(bad)?,
            phase_distances: self.phase_distances.clone(),
            diagnostics: MedianDiagnostics {
                amplitude_iterations: m.amplitude_iterations,
                amplitude_converged: m.amplitude_converged,
                phase_iterations: m.phase_iterations,
                phase_converged: m.phase_converged,
            },
        };
        d.validate().map_err(bad)?;
        Ok(d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSummary {
    pub k_a: f64,
    pub lambda: f64,
    pub rule: OutlierRule,
    pub degenerate: bool,
    pub central_indices: Vec<usize>,
    pub q1_index: Option<usize>,
    pub q3_index: Option<usize>,
    pub extreme1_index: Option<usize>,
    pub extreme3_index: Option<usize>,
    pub iqr: f64,
    pub threshold: f64,
    pub outlier_indices: Vec<usize>,
    pub median: Vec<f64>,
    pub q1: Option<Vec<f64>>,
    pub q3: Option<Vec<f64>>,
    /// Synthetic cutoff functions.
    pub w1: Vec<f64>,
    pub w3: Vec<f64>,
}

impl AmplitudeSummary {
    pub fn new(bp: &AmplitudeBoxplot, d: &Decomposition) -> Result<Self, CliError> {
        let curve = |i: Option<usize>| i.map(|i| d.amplitudes[i].values().to_vec());
        let (w1, w3) = bp.cutoff_functions()?;
        Ok(Self {
            k_a: bp.k_a,
            lambda: bp.lambda,
            rule: bp.rule,
            degenerate: bp.degenerate,
            central_indices: bp.central_indices.clone(),
            q1_index: bp.q1_index,
            q3_index: bp.q3_index,
            extreme1_index: bp.extreme1_index,
            extreme3_index: bp.extreme3_index,
            iqr: bp.iqr,
            threshold: bp.threshold,
            outlier_indices: bp.outlier_indices.clone(),
            median: bp.median.values().to_vec(),
            q1: curve(bp.q1_index),
            q3: curve(bp.q3_index),
            w1: w1.into_values(),
            w3: w3.into_values(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub k_p: f64,
    pub lambda: f64,
    pub rule: OutlierRule,
    pub degenerate: bool,
    pub clamped: bool,
    pub central_indices: Vec<usize>,
    pub q1_index: Option<usize>,
    pub q3_index: Option<usize>,
    pub extreme1_index: Option<usize>,
    pub extreme3_index: Option<usize>,
    pub iqr: f64,
    pub threshold: f64,
    pub outlier_indices: Vec<usize>,
    pub median: Vec<f64>,
    pub q1: Option<Vec<f64>>,
    pub q3: Option<Vec<f64>>,
    pub w1: Vec<f64>,
    pub w3: Vec<f64>,
}

impl PhaseSummary {
    pub fn new(bp: &PhaseBoxplot, d: &Decomposition) -> Self {
        let curve = |i: Option<usize>| i.map(|i| d.phases[i].values().to_vec());
        Self {
            k_p: bp.k_p,
            lambda: bp.lambda,
            rule: bp.rule,
            degenerate: bp.degenerate,
            clamped: bp.clamped,
            central_indices: bp.central_indices.clone(),
            q1_index: bp.q1_index,
            q3_index: bp.q3_index,
            extreme1_index: bp.extreme1_index,
            extreme3_index: bp.extreme3_index,
            iqr: bp.iqr,
            threshold: bp.threshold,
            outlier_indices: bp.outlier_indices.clone(),
            median: bp.median.values().to_vec(),
            q1: curve(bp.q1_index),
            q3: curve(bp.q3_index),
            w1: bp.w1.values().to_vec(),
            w3: bp.w3.values().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Boxplots {
    pub amplitude: AmplitudeSummary,
    pub phase: PhaseSummary,
    pub translation: TranslationBoxplot,
}

/// One point of the phase-versus-amplitude distance scatter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub index: usize,
    pub name: String,
    pub phase_distance: f64,
    pub amplitude_distance: f64,
    pub translation: f64,
    pub amplitude_severity: Option<Severity>,
    pub phase_severity: Option<Severity>,
    pub translation_outlier: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: InputInfo,
    pub decomposition: DecompositionData,
    pub boxplots: Option<Boxplots>,
    pub surfaces: Vec<SurfaceDisplay>,
    pub severity: Option<SeverityReport>,
    pub scatter: Option<Vec<ScatterRow>>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::input(format!("report JSON: {e}")))
    }
}
