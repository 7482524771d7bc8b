//! Geometry of warpings through their square-root transforms: arc-length
//! phase distance, exponential and inverse-exponential maps on the unit
//! Hilbert sphere, and the Karcher mean.

use crate::error::{Error, Result};
use crate::functions::{srt, Srt, Warping};

pub const TANGENT_TOL: f64 = 1e-6;
/// Angles below this are treated as coincident points.
pub const THETA_EPS: f64 = 1e-8;
/// Tangent vectors shorter than this are treated as zero.
pub const V_EPS: f64 = 1e-12;

/// A vector `v` in the tangent space at `base`, i.e. `⟨v, base⟩ = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Srt,
    values: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: Srt, values: Vec<f64>) -> Result<Self> {
        base.grid().check_len(&values)?;
        let ip = base.grid().inner(&values, base.values());
        let scale = base.grid().norm(&values).max(1.0);
        if ip.abs() > TANGENT_TOL * scale {
            return Err(Error::NotTangent(ip));
        }
        Ok(Self { base, values })
    }

    pub fn zero(base: &Srt) -> Self {
        Self {
            values: vec![0.0; base.grid().len()],
            base: base.clone(),
        }
    }

    /// Removes the normal component of `values` at `base`.
    pub fn project(base: &Srt, mut values: Vec<f64>) -> Result<Self> {
        base.grid().check_len(&values)?;
        let ip = base.grid().inner(&values, base.values());
        for (v, b) in values.iter_mut().zip(base.values()) {
            *v -= ip * b;
        }
        Ok(Self {
            base: base.clone(),
            values,
        })
    }

    pub fn base(&self) -> &Srt {
        &self.base
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.base.grid().norm(&self.values)
    }

    pub fn inner(&self, other: &TangentVector) -> f64 {
        self.base.grid().inner(&self.values, &other.values)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            base: self.base.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }
}

/// `D_p(γ1, γ2) = arccos⟨ψ1, ψ2⟩`, in `[0, π]`.
pub fn phase_distance(g1: &Warping, g2: &Warping) -> Result<f64> {
    let g2 = g2.resampled(g1.grid())?;
    Ok(srt(g1)?.distance(&srt(&g2)?))
}

/// `exp_ψ(v) = cos‖v‖ ψ + sin‖v‖ v/‖v‖`, floored and renormalized.
pub fn exp_map(base: &Srt, v: &TangentVector) -> Result<Srt> {
    let nv = v.norm();
    if nv < V_EPS {
        return Ok(base.clone());
    }
    let (s, c) = nv.sin_cos();
    let values = base
        .values()
        .iter()
        .zip(v.values())
        .map(|(b, x)| c * b + s * x / nv)
        .collect();
    Srt::project(base.grid().clone(), values)
}

/// `exp⁻¹_ψ1(ψ2) = θ/sin θ (ψ2 - cos θ ψ1)`, `θ = arccos⟨ψ1, ψ2⟩`.
pub fn inv_exp_map(base: &Srt, psi: &Srt) -> Result<TangentVector> {
    if base.grid() != psi.grid() {
        return Err(Error::GridMismatch);
    }
    let theta = base.distance(psi);
    if theta < THETA_EPS {
        return Ok(TangentVector::zero(base));
    }
    if theta >= std::f64::consts::PI - THETA_EPS {
        return Err(Error::Antipodal(theta));
    }
    let (s, c) = theta.sin_cos();
    let scale = theta / s;
    let values = psi
        .values()
        .iter()
        .zip(base.values())
        .map(|(p, b)| scale * (p - c * b))
        .collect();
    Ok(TangentVector {
        base: base.clone(),
        values,
    })
}

/// Result of an iterative mean/median computation on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereMean {
    pub srt: Srt,
    pub iterations: usize,
    pub converged: bool,
}

/// Karcher (Fréchet) mean of SRTs by iterated tangent-space averaging,
/// started from the normalized extrinsic average.
pub fn karcher_mean(psis: &[Srt], max_iter: usize, tol: f64) -> Result<SphereMean> {
    let first = psis.first().ok_or(Error::TooFewSamples {
        required: 1,
        actual: 0,
    })?;
    let grid = first.grid().clone();
    let n = grid.len();
    let mut start = vec![0.0; n];
    for p in psis {
        if *p.grid() != grid {
            return Err(Error::GridMismatch);
        }
        for (s, v) in start.iter_mut().zip(p.values()) {
            *s += v;
        }
    }
    let mut mu = Srt::project(grid.clone(), start)?;
    for it in 1..=max_iter {
        let mut avg = vec![0.0; n];
        for p in psis {
            let v = inv_exp_map(&mu, p)?;
            for (a, x) in avg.iter_mut().zip(v.values()) {
                *a += x / psis.len() as f64;
            }
        }
        let step = TangentVector::project(&mu, avg)?;
        if step.norm() < tol {
            return Ok(SphereMean {
                srt: mu,
                iterations: it,
                converged: true,
            });
        }
        mu = exp_map(&mu, &step)?;
    }
    Ok(SphereMean {
        srt: mu,
        iterations: max_iter,
        converged: false,
    })
}
