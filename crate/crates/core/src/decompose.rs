//! Separation of a functional dataset into translation, amplitude and phase.

use crate::error::{Error, Result};
use crate::functions::{
    mean_height, srsf, srt, warp_apply, SampledFunction, Srsf, Srt, Warping,
};
use crate::grid::Grid;
use crate::median::{
    align_all, amplitude_median_of_srsfs, check_samples, phase_median_with, MedianOptions,
};

/// Convergence summary of the two medians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MedianDiagnostics {
    pub amplitude_iterations: usize,
    pub amplitude_converged: bool,
    pub phase_iterations: usize,
    pub phase_converged: bool,
}

impl MedianDiagnostics {
    pub fn converged(&self) -> bool {
        self.amplitude_converged && self.phase_converged
    }
}

/// Translation, amplitude and phase components of `n` functions.
///
/// For every sample `i`, `amplitudes[i] ∘ phases[i]⁻¹ + translations[i]`
/// reconstructs the input up to interpolation error.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Mean heights `cᵢ`.
    pub translations: Vec<f64>,
    /// Aligned, translation-free functions `f̃ᵢ`.
    pub amplitudes: Vec<SampledFunction>,
    /// `q̃ᵢ`, the SRSFs warped onto the amplitude median.
    pub amplitude_srsfs: Vec<Srsf>,
    /// Alignment warpings `γᵢ`.
    pub phases: Vec<Warping>,
    pub amp_median: SampledFunction,
    pub amp_median_srsf: Srsf,
    /// `‖q̃ᵢ - q̄‖`.
    pub amp_distances: Vec<f64>,
    pub phase_median: Warping,
    pub phase_median_srt: Srt,
    /// `arccos⟨ψᵢ, ψ̄⟩`.
    pub phase_distances: Vec<f64>,
    pub diagnostics: MedianDiagnostics,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translations.is_empty()
    }

    pub fn grid(&self) -> &Grid {
        self.amp_median.grid()
    }

    /// Square-root transforms of the phases.
    pub fn phase_srts(&self) -> Result<Vec<Srt>> {
        self.phases.iter().map(srt).collect()
    }

    /// Checks shape consistency; used when a decomposition is rebuilt from
    /// serialized parts.
    pub fn validate(&self) -> Result<()> {
        let n = self.translations.len();
        if n < 3 {
            return Err(Error::TooFewSamples {
                required: 3,
                actual: n,
            });
        }
        for len in [
            self.amplitudes.len(),
            self.amplitude_srsfs.len(),
            self.phases.len(),
            self.amp_distances.len(),
            self.phase_distances.len(),
        ] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        let grid = self.grid();
        let same = self.amplitudes.iter().all(|f| f.grid() == grid)
            && self.amplitude_srsfs.iter().all(|q| q.grid() == grid)
            && self.phases.iter().all(|g| g.grid() == grid)
            && self.amp_median_srsf.grid() == grid
            && self.phase_median.grid() == grid
            && self.phase_median_srt.grid() == grid;
        if !same {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `f̃ᵢ ∘ γᵢ⁻¹ + cᵢ`.
    pub fn reconstruct(&self, i: usize) -> Result<SampledFunction> {
        let inverse = crate::functions::warp_invert(&self.phases[i])?;
        warp_apply(&self.amplitudes[i], &inverse)?.shifted(self.translations[i])
    }
}

pub fn decompose(fs: &[SampledFunction]) -> Result<Decomposition> {
    decompose_with(fs, &MedianOptions::default())
}

pub fn decompose_with(fs: &[SampledFunction], opts: &MedianOptions) -> Result<Decomposition> {
    check_samples(fs, |f| f.grid(), 3)?;
    let translations: Vec<f64> = fs.iter().map(mean_height).collect();
    let centered: Vec<SampledFunction> = fs
        .iter()
        .zip(&translations)
        .map(|(f, &c)| f.shifted(-c))
        .collect::<Result<_>>()?;
    let qs: Vec<Srsf> = centered.iter().map(srsf).collect::<Result<_>>()?;

    let amp = amplitude_median_of_srsfs(&qs, opts)?;
    let alignments = align_all(&amp.srsf, &qs)?;

    let mut amplitudes = Vec::with_capacity(fs.len());
    let mut amplitude_srsfs = Vec::with_capacity(fs.len());
    let mut phases = Vec::with_capacity(fs.len());
    let mut amp_distances = Vec::with_capacity(fs.len());
    for (f, a) in centered.iter().zip(alignments) {
        amplitudes.push(warp_apply(f, &a.gamma)?);
        amplitude_srsfs.push(a.aligned_q);
        phases.push(a.gamma);
        amp_distances.push(a.distance);
    }

    let phase = phase_median_with(&phases, opts)?;
    let phase_distances = phases
        .iter()
        .map(|g| Ok(srt(g)?.distance(&phase.srt)))
        .collect::<Result<_>>()?;

    Ok(Decomposition {
        translations,
        amplitudes,
        amplitude_srsfs,
        phases,
        amp_median: amp.function,
        amp_median_srsf: amp.srsf,
        amp_distances,
        phase_median: phase.warping,
        phase_median_srt: phase.srt,
        phase_distances,
        diagnostics: MedianDiagnostics {
            amplitude_iterations: amp.iterations,
            amplitude_converged: amp.converged,
            phase_iterations: phase.iterations,
            phase_converged: phase.converged,
        },
    })
}
