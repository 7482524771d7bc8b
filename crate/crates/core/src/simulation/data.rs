use std::f64::consts::PI;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimulationConfig;
use crate::error::Result;
use crate::functions::SampledFunction;
use crate::grid::Grid;

const CONTAMINATION: f64 = 0.1;

/// Simulated functions with the indices of the injected outliers (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub functions: Vec<SampledFunction>,
    pub amplitude_outlier_truth: Vec<usize>,
    pub phase_outlier_truth: Vec<usize>,
}

/// Stream layout: one ChaCha8 stream per `(sim, replicate)`; within it,
/// function `i` starts at word `(i + 1) << 8` and replicate-level draws
/// start at word 0.
fn replicate_rng(config: &SimulationConfig, replicate: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(((config.sim_id as u64) << 48) | replicate as u64);
    rng
}

fn function_rng(base: &ChaCha8Rng, i: usize) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_word_pos(((i + 1) as u128) << 8);
    rng
}

fn harmonic(c1: f64, c2: f64) -> impl Fn(f64) -> f64 {
    move |t| c1 * (2.0 * PI * t).sin() + c2 * (2.0 * PI * t).cos()
}

fn quad_warp(alpha: f64) -> impl Fn(f64) -> f64 {
    move |t| t + alpha * t * (t - 1.0)
}

fn pair(rng: &mut impl RngCore, lo: f64, hi: f64) -> (f64, f64) {
    (rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

/// Draws replicate `replicate` of the configured simulation.
pub fn generate(config: &SimulationConfig, replicate: usize) -> Result<LabeledDataset> {
    config.validate()?;
    let grid = Grid::uniform(config.grid_size)?;
    let base = replicate_rng(config, replicate);
    let mut out = LabeledDataset {
        functions: Vec::with_capacity(config.n_functions),
        amplitude_outlier_truth: Vec::new(),
        phase_outlier_truth: Vec::new(),
    };
    let (s1, s2) = {
        let mut rng = base.clone();
        rng.set_word_pos(0);
        pair(&mut rng, 0.1, 0.15)
    };
    for i in 0..config.n_functions {
        let mut rng = function_rng(&base, i);
        let f = match config.sim_id {
            1 | 2 => {
                let outlier = rng.gen::<f64>() < CONTAMINATION;
                let (c1, c2) = if outlier {
                    out.amplitude_outlier_truth.push(i);
                    pair(&mut rng, 0.1, 0.15)
                } else {
                    pair(&mut rng, 0.0, 0.05)
                };
                let h = harmonic(c1, c2);
                if config.sim_id == 1 {
                    SampledFunction::from_fn(&grid, h)?
                } else {
                    let w = quad_warp(rng.gen_range(-1.0..1.0));
                    SampledFunction::from_fn(&grid, |t| h(w(t)))?
                }
            }
            3 => {
                let alpha = if rng.gen::<f64>() < CONTAMINATION {
                    out.phase_outlier_truth.push(i);
                    rng.gen_range(0.9..1.0)
                } else {
                    rng.gen_range(-0.6..0.6)
                };
                let (h, w) = (harmonic(s1, s2), quad_warp(alpha));
                SampledFunction::from_fn(&grid, |t| h(w(t)))?
            }
            _ => {
                let (c1, c2) = pair(&mut rng, 0.1, 0.11);
                let (h, w) = (harmonic(c1, c2), quad_warp(rng.gen_range(-1.0..1.0)));
                SampledFunction::from_fn(&grid, |t| h(w(t)))?
            }
        };
        out.functions.push(f);
    }
    Ok(out)
}
