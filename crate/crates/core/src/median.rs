//! Geometric medians of amplitudes (in the SRSF quotient space) and of
//! phases (on the sphere of square-root transforms).
//!
//! Both use Weiszfeld iterations: the new estimate is the `1/dᵢ`-weighted
//! average of the samples, taken after aligning them to the current
//! estimate (amplitude) or after lifting them to its tangent space (phase).

use rayon::prelude::*;

use crate::alignment::{align, AlignmentResult};
use crate::error::{Error, Result};
use crate::functions::{
    group_action, mean_height, srsf, srsf_inverse, srt, srt_inverse, warp_compose, warp_invert,
    SampledFunction, Srsf, Srt, Warping,
};
use crate::sphere::{exp_map, inv_exp_map, karcher_mean, TangentVector, V_EPS};

/// Samples closer than this to the current estimate are left out of a
/// Weiszfeld update.
pub const DIST_EPS: f64 = 1e-8;

const KARCHER_TOL: f64 = 1e-9;
const MAX_HALVINGS: usize = 20;

/// Metric used to pick the in-sample starting point of the amplitude median.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MedoidMetric {
    /// Plain L2 distance between SRSFs (no alignment); `O(n²T)`.
    Srsf,
    /// Elastic amplitude distance; `O(n²)` alignments.
    Elastic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MedianOptions {
    /// Relative objective decrease below which iterations stop.
    pub tol: f64,
    /// Outer (alignment) iterations of the amplitude median.
    pub max_iter: usize,
    /// Iterations of the sphere median and of the Karcher mean.
    pub max_sphere_iter: usize,
    pub init: MedoidMetric,
}

impl Default for MedianOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 50,
            max_sphere_iter: 200,
            init: MedoidMetric::Srsf,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMedian {
    /// Orbit-centered representative with zero mean height.
    pub function: SampledFunction,
    pub srsf: Srsf,
    /// `Σ D_a` at the returned median.
    pub objective: f64,
    /// Objective after every accepted iterate; strictly decreasing.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMedian {
    pub warping: Warping,
    pub srt: Srt,
    pub objective: f64,
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

pub(crate) fn check_samples<'a, T: 'a>(
    items: &'a [T],
    grid_of: impl Fn(&'a T) -> &'a crate::grid::Grid,
    min: usize,
) -> Result<()> {
    if items.len() < min {
        return Err(Error::TooFewSamples {
            required: min,
            actual: items.len(),
        });
    }
    let g0 = grid_of(&items[0]);
    if items.iter().any(|x| grid_of(x) != g0) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

pub(crate) fn align_all(template: &Srsf, qs: &[Srsf]) -> Result<Vec<AlignmentResult>> {
    qs.par_iter().map(|q| align(template, q)).collect()
}

fn argmin_row_sums(n: usize, dist: impl Fn(usize, usize) -> f64) -> usize {
    let mut sums = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = dist(i, j);
            sums[i] += d;
            sums[j] += d;
        }
    }
    let mut best = 0;
    for i in 1..n {
        if sums[i] < sums[best] {
            best = i;
        }
    }
    best
}

fn amplitude_medoid(qs: &[Srsf], metric: MedoidMetric) -> Result<usize> {
    match metric {
        MedoidMetric::Srsf => Ok(argmin_row_sums(qs.len(), |i, j| qs[i].distance(&qs[j]))),
        MedoidMetric::Elastic => {
            let n = qs.len();
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let d: Vec<f64> = pairs
                .par_iter()
                .map(|&(i, j)| align(&qs[i], &qs[j]).map(|a| a.distance))
                .collect::<Result<_>>()?;
            let mut m = vec![0.0; n * n];
            for (&(i, j), v) in pairs.iter().zip(d) {
                m[i * n + j] = v;
            }
            Ok(argmin_row_sums(n, |i, j| m[i * n + j]))
        }
    }
}

/// Amplitude geometric median of `fs` with default options.
pub fn amplitude_median(fs: &[SampledFunction]) -> Result<AmplitudeMedian> {
    amplitude_median_with(fs, &MedianOptions::default())
}

pub fn amplitude_median_with(fs: &[SampledFunction], opts: &MedianOptions) -> Result<AmplitudeMedian> {
    check_samples(fs, |f| f.grid(), 3)?;
    let qs: Vec<Srsf> = fs.iter().map(srsf).collect::<Result<_>>()?;
    amplitude_median_of_srsfs(&qs, opts)
}

pub(crate) fn amplitude_median_of_srsfs(qs: &[Srsf], opts: &MedianOptions) -> Result<AmplitudeMedian> {
    let grid = qs[0].grid().clone();
    let start = amplitude_medoid(qs, opts.init)?;

    let mut template = qs[start].clone();
    let mut current = align_all(&template, qs)?;
    let mut objective: f64 = current.iter().map(|a| a.distance).sum();
    let mut history = vec![objective];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        if objective <= 0.0 {
            converged = true;
            break;
        }
        let mut num = vec![0.0; grid.len()];
        let mut den = 0.0;
        for a in current.iter().filter(|a| a.distance >= DIST_EPS) {
            let w = 1.0 / a.distance;
            for (s, v) in num.iter_mut().zip(a.aligned_q.values()) {
                *s += w * v;
            }
            den += w;
        }
        if den == 0.0 {
            converged = true;
            break;
        }
        let candidate = Srsf::new(grid.clone(), num.into_iter().map(|s| s / den).collect())?;
        let next = align_all(&candidate, qs)?;
        let next_objective: f64 = next.iter().map(|a| a.distance).sum();
        if next_objective >= objective {
            // Lattice resolution reached; keep the best iterate.
            converged = true;
            break;
        }
        let decrease = (objective - next_objective) / objective;
        template = candidate;
        current = next;
        objective = next_objective;
        history.push(objective);
        if decrease < opts.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("amplitude median stopped after {iterations} iterations without converging");
    }

    let gammas: Vec<Warping> = current.into_iter().map(|a| a.gamma).collect();
    let (centered, _) = orbit_center_with(&template, &gammas, opts)?;
    let mut function = srsf_inverse(&centered, 0.0)?;
    let c = mean_height(&function);
    function = function.shifted(-c)?;

    Ok(AmplitudeMedian {
        function,
        srsf: centered,
        objective,
        history,
        iterations,
        converged,
    })
}

/// Re-parameterizes the template so that the Karcher mean of the alignment
/// warpings becomes the identity.
///
/// With `(qᵢ, γᵢ) ≈ q̄` and Karcher mean `γ̄ₘ` of `{γᵢ}`, returns
/// `((q̄, γ̄ₘ⁻¹), {γᵢ ∘ γ̄ₘ⁻¹})`.
pub fn orbit_center(q_bar: &Srsf, gammas: &[Warping]) -> Result<(Srsf, Vec<Warping>)> {
    orbit_center_with(q_bar, gammas, &MedianOptions::default())
}

pub fn orbit_center_with(
    q_bar: &Srsf,
    gammas: &[Warping],
    opts: &MedianOptions,
) -> Result<(Srsf, Vec<Warping>)> {
    check_samples(gammas, |g| g.grid(), 1)?;
    let psis: Vec<Srt> = gammas.iter().map(srt).collect::<Result<_>>()?;
    let mean = karcher_mean(&psis, opts.max_sphere_iter, KARCHER_TOL)?;
    if !mean.converged {
        return Err(Error::NonConvergence {
            what: "Karcher mean of warpings",
            iterations: mean.iterations,
        });
    }
    let inverse = warp_invert(&srt_inverse(&mean.srt)?)?;
    let centered = group_action(q_bar, &inverse)?;
    let warps = gammas
        .iter()
        .map(|g| warp_compose(g, &inverse))
        .collect::<Result<_>>()?;
    Ok((centered, warps))
}

/// Geometric median of warpings on the sphere of square-root transforms.
pub fn phase_median(gammas: &[Warping]) -> Result<PhaseMedian> {
    phase_median_with(gammas, &MedianOptions::default())
}

pub fn phase_median_with(gammas: &[Warping], opts: &MedianOptions) -> Result<PhaseMedian> {
    check_samples(gammas, |g| g.grid(), 3)?;
    let psis: Vec<Srt> = gammas.iter().map(srt).collect::<Result<_>>()?;
    sphere_median(&psis, opts)
}

fn total_distance(mu: &Srt, psis: &[Srt]) -> f64 {
    psis.iter().map(|p| mu.distance(p)).sum()
}

fn sphere_median(psis: &[Srt], opts: &MedianOptions) -> Result<PhaseMedian> {
    let grid = psis[0].grid().clone();
    let start = argmin_row_sums(psis.len(), |i, j| psis[i].distance(&psis[j]));
    let mut mu = psis[start].clone();
    let mut objective = total_distance(&mu, psis);
    let mut history = vec![objective];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_sphere_iter {
        iterations += 1;
        let mut num = vec![0.0; grid.len()];
        let mut den = 0.0;
        for p in psis {
            let v = inv_exp_map(&mu, p)?;
            let d = v.norm();
            if d < DIST_EPS {
                continue;
            }
            for (s, x) in num.iter_mut().zip(v.values()) {
                *s += x / d;
            }
            den += 1.0 / d;
        }
        if den == 0.0 {
            converged = true;
            break;
        }
        let step = TangentVector::project(&mu, num.into_iter().map(|s| s / den).collect())?;
        if step.norm() < V_EPS {
            converged = true;
            break;
        }
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let candidate = exp_map(&mu, &step.scaled(scale))?;
            let value = total_distance(&candidate, psis);
            if value < objective {
                accepted = Some((candidate, value));
                break;
            }
            scale *= 0.5;
        }
        let Some((candidate, value)) = accepted else {
            converged = true;
            break;
        };
        let decrease = (objective - value) / objective;
        mu = candidate;
        objective = value;
        history.push(objective);
        if decrease < opts.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("phase median stopped after {iterations} iterations without converging");
    }
    Ok(PhaseMedian {
        warping: srt_inverse(&mu)?,
        srt: mu,
        objective,
        history,
        iterations,
        converged,
    })
}
