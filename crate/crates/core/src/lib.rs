//! Elastic functional boxplots.
//!
//! A sample of 1D functions on `[0, 1]` is split into three components:
//! vertical translation (mean height), amplitude (shape after alignment) and
//! phase (the aligning warpings). Each component gets its own boxplot and
//! outlier test:
//!
//! * translation: a Tukey boxplot of the mean heights;
//! * amplitude: distances in the SRSF quotient space around a geometric median;
//! * phase: arc lengths on the Hilbert sphere of square-root warping
//!   derivatives, with cutoffs built in the tangent space at the median.
//!
//! ```
//! use elastic_boxplot::{decompose, amplitude_boxplot, BoxplotOptions, Grid, SampledFunction};
//!
//! let grid = Grid::uniform(51).unwrap();
//! let fs: Vec<SampledFunction> = (0..8)
//!     .map(|i| {
//!         let a = 1.0 + 0.05 * i as f64;
//!         SampledFunction::from_fn(&grid, |t| a * (6.0 * t).sin()).unwrap()
//!     })
//!     .collect();
//! let dec = decompose(&fs).unwrap();
//! let bp = amplitude_boxplot(&dec, &BoxplotOptions::new(1.3)).unwrap();
//! assert!(bp.outlier_indices.is_empty());
//! ```

pub mod alignment;
pub mod boxplot;
pub mod decompose;
pub mod error;
pub mod functions;
pub mod grid;
pub mod median;
pub mod simulation;
pub mod sphere;
pub mod spline;

pub use alignment::{align, amplitude_distance, AlignmentResult};
pub use boxplot::{
    amplitude_boxplot, amplitude_quartiles, central_region, outlier_scan, phase_boxplot,
    phase_quartiles, surface_display, translation_boxplot, AmplitudeBoxplot, BoxplotOptions,
    CurveRole, OutlierRule, PhaseBoxplot, Severity, SeverityEntry, SeverityReport, SurfaceCurve,
    SurfaceDisplay, SurfaceMode, TranslationBoxplot,
};
pub use decompose::{decompose, decompose_with, Decomposition, MedianDiagnostics};
pub use error::{Error, Result};
pub use functions::{
    group_action, mean_height, resample_linear, srsf, srsf_inverse, srt, srt_inverse, warp_apply,
    warp_compose, warp_invert, SampledFunction, Srsf, Srt, Warping,
};
pub use grid::{Grid, DEFAULT_GRID_SIZE};
pub use median::{
    amplitude_median, amplitude_median_with, orbit_center, phase_median, phase_median_with,
    AmplitudeMedian, MedianOptions, MedoidMetric, PhaseMedian,
};
pub use sphere::{exp_map, inv_exp_map, karcher_mean, phase_distance, TangentVector};
pub use spline::resample_spline;
