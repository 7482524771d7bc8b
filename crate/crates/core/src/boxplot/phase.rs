use std::f64::consts::PI;

use super::amplitude::membership;
use super::{central_region, closest_candidate, select_pair, BoxplotOptions, OutlierRule};
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::functions::{srt_inverse, Srt, Warping};
use crate::sphere::{exp_map, inv_exp_map, TangentVector, THETA_EPS};

/// Phase boxplot built in the tangent space at the phase median `ψ̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseBoxplot {
    pub median: Warping,
    pub median_srt: Srt,
    pub central_indices: Vec<usize>,
    pub q1_index: Option<usize>,
    pub q3_index: Option<usize>,
    pub q1: Warping,
    pub q3: Warping,
    pub v_q1: TangentVector,
    pub v_q3: TangentVector,
    pub w1: Warping,
    pub w3: Warping,
    pub w1_srt: Srt,
    pub w3_srt: Srt,
    pub extreme1_index: Option<usize>,
    pub extreme3_index: Option<usize>,
    pub iqr: f64,
    /// Geodesic length of the chosen cutoff, `‖v_Q‖ + k·IQR`. It equals
    /// `D_p(ψ̄, ψ_W)` unless the cutoff left the positive orthant and was
    /// floored back into it.
    pub threshold: f64,
    pub outlier_indices: Vec<usize>,
    pub k_p: f64,
    pub lambda: f64,
    pub rule: OutlierRule,
    pub degenerate: bool,
    /// Set when a cutoff had to be pulled back from the cut locus.
    pub clamped: bool,
}

impl PhaseBoxplot {
    pub fn is_outlier(&self, i: usize) -> bool {
        self.outlier_indices.binary_search(&i).is_ok()
    }
}

/// Quartile search over tangent vectors at a common base point.
pub fn phase_quartiles(central_vs: &[TangentVector], lambda: f64) -> Result<(usize, usize)> {
    if let Some(first) = central_vs.first() {
        if central_vs.iter().any(|v| v.base().grid() != first.base().grid()) {
            return Err(Error::GridMismatch);
        }
    }
    let norms: Vec<f64> = central_vs.iter().map(TangentVector::norm).collect();
    select_pair(&norms, |a, b| central_vs[a].inner(&central_vs[b]), lambda)
}

pub fn phase_boxplot(dec: &Decomposition, opts: &BoxplotOptions) -> Result<PhaseBoxplot> {
    opts.validate()?;
    let n = dec.len();
    if n < 4 {
        return Err(Error::TooFewSamples {
            required: 4,
            actual: n,
        });
    }
    let psi_bar = &dec.phase_median_srt;
    let psis = dec.phase_srts()?;
    let central = central_region(&dec.phase_distances);
    let mut members = central.clone();
    members.sort_unstable();
    let vs: Vec<TangentVector> = members
        .iter()
        .map(|&i| inv_exp_map(psi_bar, &psis[i]))
        .collect::<Result<_>>()?;

    let zero = TangentVector::zero(psi_bar);
    let mut bp = PhaseBoxplot {
        median: dec.phase_median.clone(),
        median_srt: psi_bar.clone(),
        central_indices: central,
        q1_index: None,
        q3_index: None,
        q1: dec.phase_median.clone(),
        q3: dec.phase_median.clone(),
        v_q1: zero.clone(),
        v_q3: zero,
        w1: dec.phase_median.clone(),
        w3: dec.phase_median.clone(),
        w1_srt: psi_bar.clone(),
        w3_srt: psi_bar.clone(),
        extreme1_index: None,
        extreme3_index: None,
        iqr: 0.0,
        threshold: 0.0,
        outlier_indices: Vec::new(),
        k_p: opts.k,
        lambda: opts.lambda,
        rule: opts.rule,
        degenerate: false,
        clamped: false,
    };
    let (a, b) = match phase_quartiles(&vs, opts.lambda) {
        Ok(pair) => pair,
        Err(Error::Degenerate) => {
            log::warn!("phase quartiles are degenerate; reporting zero spread");
            bp.degenerate = true;
            return Ok(bp);
        }
        Err(e) => return Err(e),
    };
    let (i1, i3) = (members[a], members[b]);
    bp.q1_index = Some(i1);
    bp.q3_index = Some(i3);
    bp.q1 = dec.phases[i1].clone();
    bp.q3 = dec.phases[i3].clone();
    bp.v_q1 = vs[a].clone();
    bp.v_q3 = vs[b].clone();
    bp.iqr = bp.v_q1.norm() + bp.v_q3.norm();

    let mut cutoff = |v: &TangentVector| -> Result<(Srt, f64)> {
        let norm = v.norm();
        let mut length = norm + opts.k * bp.iqr;
        if length >= PI - THETA_EPS {
            log::warn!("phase cutoff length {length:.4} clamped below the cut locus");
            length = PI - THETA_EPS;
            bp.clamped = true;
        }
        Ok((exp_map(psi_bar, &v.scaled(length / norm))?, length))
    };
    let (w1_srt, len1) = cutoff(&bp.v_q1)?;
    let (w3_srt, len3) = cutoff(&bp.v_q3)?;
    bp.w1 = srt_inverse(&w1_srt)?;
    bp.w3 = srt_inverse(&w3_srt)?;
    bp.threshold = opts.rule.pick(len1, len3);
    bp.w1_srt = w1_srt;
    bp.w3_srt = w3_srt;

    let in_central = membership(n, &bp.central_indices);
    bp.outlier_indices = (0..n)
        .filter(|&i| !in_central[i] && dec.phase_distances[i] > bp.threshold)
        .collect();
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| !in_central[i] && dec.phase_distances[i] <= bp.threshold)
        .collect();
    bp.extreme1_index = closest_candidate(&candidates, |i| psis[i].distance(&bp.w1_srt));
    bp.extreme3_index = closest_candidate(&candidates, |i| psis[i].distance(&bp.w3_srt));
    Ok(bp)
}
