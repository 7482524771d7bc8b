use super::{central_region, closest_candidate, select_pair, BoxplotOptions, OutlierRule};
use crate::decompose::Decomposition;
use crate::error::{Error, Result};
use crate::functions::{mean_height, srsf_inverse, SampledFunction, Srsf};

/// Amplitude boxplot built around the amplitude median `q̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeBoxplot {
    pub median_srsf: Srsf,
    pub median: SampledFunction,
    /// Central region, ascending by distance to the median.
    pub central_indices: Vec<usize>,
    pub q1_index: Option<usize>,
    pub q3_index: Option<usize>,
    pub q1: Srsf,
    pub q3: Srsf,
    /// Synthetic cutoff SRSFs.
    pub w1: Srsf,
    pub w3: Srsf,
    pub extreme1_index: Option<usize>,
    pub extreme3_index: Option<usize>,
    pub iqr: f64,
    /// Distance beyond which a sample is an outlier: the larger (or, under
    /// [`OutlierRule::Min`], smaller) of `‖w − q̄‖ = ‖q − q̄‖ + k·IQR`.
    pub threshold: f64,
    pub outlier_indices: Vec<usize>,
    pub k_a: f64,
    pub lambda: f64,
    pub rule: OutlierRule,
    /// Set when fewer than two central members differ from the median.
    pub degenerate: bool,
}

impl AmplitudeBoxplot {
    /// Cutoffs mapped back to zero-mean functions.
    pub fn cutoff_functions(&self) -> Result<(SampledFunction, SampledFunction)> {
        Ok((to_function(&self.w1)?, to_function(&self.w3)?))
    }

    pub fn is_outlier(&self, i: usize) -> bool {
        self.outlier_indices.binary_search(&i).is_ok()
    }
}

pub(crate) fn to_function(q: &Srsf) -> Result<SampledFunction> {
    let f = srsf_inverse(q, 0.0)?;
    let c = mean_height(&f);
    f.shifted(-c)
}

/// Exhaustive quartile search over the central SRSFs; returns positions into
/// `central` with the smaller position first.
pub fn amplitude_quartiles(central: &[Srsf], q_bar: &Srsf, lambda: f64) -> Result<(usize, usize)> {
    let grid = q_bar.grid();
    let diffs: Vec<Vec<f64>> = central
        .iter()
        .map(|q| {
            if q.grid() != grid {
                return Err(Error::GridMismatch);
            }
            Ok(q.values().iter().zip(q_bar.values()).map(|(a, b)| a - b).collect())
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = diffs.iter().map(|d| grid.norm(d)).collect();
    select_pair(&norms, |a, b| grid.inner(&diffs[a], &diffs[b]), lambda)
}

fn extend(q: &Srsf, q_bar: &Srsf, length: f64) -> Result<Srsf> {
    let grid = q.grid();
    let d = q.distance(q_bar);
    let values = q
        .values()
        .iter()
        .zip(q_bar.values())
        .map(|(a, b)| a + length * (a - b) / d)
        .collect();
    Srsf::new(grid.clone(), values)
}

pub fn amplitude_boxplot(dec: &Decomposition, opts: &BoxplotOptions) -> Result<AmplitudeBoxplot> {
    opts.validate()?;
    let n = dec.len();
    if n < 4 {
        return Err(Error::TooFewSamples {
            required: 4,
            actual: n,
        });
    }
    let q_bar = &dec.amp_median_srsf;
    let central = central_region(&dec.amp_distances);
    let mut members = central.clone();
    members.sort_unstable();
    let central_srsfs: Vec<Srsf> = members.iter().map(|&i| dec.amplitude_srsfs[i].clone()).collect();

    let mut bp = AmplitudeBoxplot {
        median_srsf: q_bar.clone(),
        median: dec.amp_median.clone(),
        central_indices: central,
        q1_index: None,
        q3_index: None,
        q1: q_bar.clone(),
        q3: q_bar.clone(),
        w1: q_bar.clone(),
        w3: q_bar.clone(),
        extreme1_index: None,
        extreme3_index: None,
        iqr: 0.0,
        threshold: 0.0,
        outlier_indices: Vec::new(),
        k_a: opts.k,
        lambda: opts.lambda,
        rule: opts.rule,
        degenerate: false,
    };
    let (a, b) = match amplitude_quartiles(&central_srsfs, q_bar, opts.lambda) {
        Ok(pair) => pair,
        Err(Error::Degenerate) => {
            log::warn!("amplitude quartiles are degenerate; reporting zero spread");
            bp.degenerate = true;
            return Ok(bp);
        }
        Err(e) => return Err(e),
    };
    let (i1, i3) = (members[a], members[b]);
    bp.q1_index = Some(i1);
    bp.q3_index = Some(i3);
    bp.q1 = dec.amplitude_srsfs[i1].clone();
    bp.q3 = dec.amplitude_srsfs[i3].clone();
    bp.iqr = dec.amp_distances[i1] + dec.amp_distances[i3];
    bp.w1 = extend(&bp.q1, q_bar, opts.k * bp.iqr)?;
    bp.w3 = extend(&bp.q3, q_bar, opts.k * bp.iqr)?;
    bp.threshold = opts.rule.pick(
        dec.amp_distances[i1] + opts.k * bp.iqr,
        dec.amp_distances[i3] + opts.k * bp.iqr,
    );

    let in_central = membership(n, &bp.central_indices);
    bp.outlier_indices = (0..n)
        .filter(|&i| !in_central[i] && dec.amp_distances[i] > bp.threshold)
        .collect();
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| !in_central[i] && dec.amp_distances[i] <= bp.threshold)
        .collect();
    bp.extreme1_index = closest_candidate(&candidates, |i| dec.amplitude_srsfs[i].distance(&bp.w1));
    bp.extreme3_index = closest_candidate(&candidates, |i| dec.amplitude_srsfs[i].distance(&bp.w3));
    Ok(bp)
}

pub(crate) fn membership(n: usize, idx: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in idx {
        m[i] = true;
    }
    m
}
