use serde::{Deserialize, Serialize};

use super::{AmplitudeBoxplot, PhaseBoxplot};
use crate::decompose::Decomposition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceMode {
    Amplitude,
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveRole {
    Extreme1,
    Q1,
    Median,
    Q3,
    Extreme3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceCurve {
    pub role: CurveRole,
    /// Sample index, absent for the median.
    pub index: Option<usize>,
    pub offset: f64,
    pub values: Vec<f64>,
}

/// Boxplot curves spread along a third axis by cumulative distance from the
/// median: negative toward the first cutoff, positive toward the second.
/// Phase curves are stored as deviations `t - γ(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDisplay {
    pub mode: SurfaceMode,
    pub curves: Vec<SurfaceCurve>,
}

/// Boxplots that can be laid out as a surface display.
pub trait SurfaceSource {
    fn surface(&self, dec: &Decomposition) -> Result<SurfaceDisplay>;
}

pub fn surface_display<B: SurfaceSource>(bp: &B, dec: &Decomposition) -> Result<SurfaceDisplay> {
    bp.surface(dec)
}

struct Side {
    quartile: usize,
    extreme: Option<usize>,
}

fn layout(
    mode: SurfaceMode,
    lower: Side,
    upper: Side,
    median: Vec<f64>,
    curve: impl Fn(usize) -> Vec<f64>,
    dist_median: impl Fn(usize) -> f64,
    dist: impl Fn(usize, usize) -> f64,
) -> SurfaceDisplay {
    let mut curves = Vec::with_capacity(5);
    let half = |side: &Side, sign: f64, inner: CurveRole, outer: CurveRole| {
        let d = dist_median(side.quartile);
        let mut out = vec![SurfaceCurve {
            role: inner,
            index: Some(side.quartile),
            offset: sign * d,
            values: curve(side.quartile),
        }];
        if let Some(e) = side.extreme {
            out.push(SurfaceCurve {
                role: outer,
                index: Some(e),
                offset: sign * (d + dist(side.quartile, e)),
                values: curve(e),
            });
        }
        out
    };
    let low = half(&lower, -1.0, CurveRole::Q1, CurveRole::Extreme1);
    let high = half(&upper, 1.0, CurveRole::Q3, CurveRole::Extreme3);
    curves.extend(low.into_iter().rev());
    curves.push(SurfaceCurve {
        role: CurveRole::Median,
        index: None,
        offset: 0.0,
        values: median,
    });
    curves.extend(high);
    SurfaceDisplay { mode, curves }
}

impl SurfaceSource for AmplitudeBoxplot {
    fn surface(&self, dec: &Decomposition) -> Result<SurfaceDisplay> {
        let (Some(q1), Some(q3)) = (self.q1_index, self.q3_index) else {
            return Err(Error::Degenerate);
        };
        let qs = &dec.amplitude_srsfs;
        Ok(layout(
            SurfaceMode::Amplitude,
            Side {
                quartile: q1,
                extreme: self.extreme1_index,
            },
            Side {
                quartile: q3,
                extreme: self.extreme3_index,
            },
            self.median.values().to_vec(),
            |i| dec.amplitudes[i].values().to_vec(),
            |i| qs[i].distance(&self.median_srsf),
            |i, j| qs[i].distance(&qs[j]),
        ))
    }
}

impl SurfaceSource for PhaseBoxplot {
    fn surface(&self, dec: &Decomposition) -> Result<SurfaceDisplay> {
        let (Some(q1), Some(q3)) = (self.q1_index, self.q3_index) else {
            return Err(Error::Degenerate);
        };
        let psis = dec.phase_srts()?;
        Ok(layout(
            SurfaceMode::Phase,
            Side {
                quartile: q1,
                extreme: self.extreme1_index,
            },
            Side {
                quartile: q3,
                extreme: self.extreme3_index,
            },
            self.median.deviation(),
            |i| dec.phases[i].deviation(),
            |i| psis[i].distance(&self.median_srt),
            |i, j| psis[i].distance(&psis[j]),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxplot::{amplitude_boxplot, phase_boxplot, BoxplotOptions};
    use crate::decompose::decompose;
    use crate::functions::{warp_apply, SampledFunction, Warping};
    use crate::grid::Grid;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn dec() -> Decomposition {
        let g = Grid::uniform(101).unwrap();
        let fs: Vec<SampledFunction> = (0..12)
            .map(|i| {
                let a = 0.7 + 0.05 * i as f64;
                let al = -0.6 + 0.1 * i as f64;
                let f = SampledFunction::from_fn(&g, |t| a * (2.0 * PI * t).sin()).unwrap();
                warp_apply(&f, &Warping::from_fn(&g, |t| t + al * t * (t - 1.0)).unwrap()).unwrap()
            })
            .collect();
        decompose(&fs).unwrap()
    }

    fn check_order(s: &SurfaceDisplay) {
        let offsets: Vec<f64> = s.curves.iter().map(|c| c.offset).collect();
        assert!(offsets.windows(2).all(|w| w[0] < w[1]), "{offsets:?}");
        let m = s.curves.iter().find(|c| c.role == CurveRole::Median).unwrap();
        assert_eq!(m.offset, 0.0);
    }

    #[test]
    fn amplitude_offsets_are_srsf_distances() {
        let d = dec();
        let bp = amplitude_boxplot(&d, &BoxplotOptions::new(1.0)).unwrap();
        let s = surface_display(&bp, &d).unwrap();
        assert_eq!(s.mode, SurfaceMode::Amplitude);
        check_order(&s);
        let q3 = s.curves.iter().find(|c| c.role == CurveRole::Q3).unwrap();
        assert_abs_diff_eq!(
            q3.offset,
            d.amplitude_srsfs[q3.index.unwrap()].distance(&d.amp_median_srsf),
            epsilon = 1e-12
        );
    }

    #[test]
    fn phase_median_deviation_is_small() {
        let d = dec();
        let bp = phase_boxplot(&d, &BoxplotOptions::new(0.9)).unwrap();
        let s = surface_display(&bp, &d).unwrap();
        check_order(&s);
        let m = s.curves.iter().find(|c| c.role == CurveRole::Median).unwrap();
        assert!(m.values.iter().all(|h| h.abs() < 0.05));
    }

    #[test]
    fn degenerate_is_an_error() {
        let g = Grid::uniform(51).unwrap();
        let f = SampledFunction::from_fn(&g, |t| t * t).unwrap();
        let d = decompose(&vec![f; 5]).unwrap();
        let bp = amplitude_boxplot(&d, &BoxplotOptions::new(1.0)).unwrap();
        assert_eq!(surface_display(&bp, &d), Err(Error::Degenerate));
    }
}
