//! The four simulation designs and a seeded replicate runner that estimates
//! detection rates `p_c` (share of true outliers flagged) and `p_f` (share
//! of inliers flagged), in percent.

mod data;

use std::fmt::Write as _;
use std::panic::AssertUnwindSafe;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxplot::{
    amplitude_boxplot, phase_boxplot, BoxplotOptions, OutlierRule, DEFAULT_AMPLITUDE_SCAN,
    DEFAULT_LAMBDA, DEFAULT_PHASE_SCAN,
};
use crate::decompose::decompose_with;
use crate::error::{Error, Result};
use crate::grid::DEFAULT_GRID_SIZE;
use crate::median::MedianOptions;

pub use data::{generate, LabeledDataset};

/// Share of replicates allowed to fail before a run is considered broken.
pub const FAILURE_BUDGET: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// 1 to 4.
    pub sim_id: u8,
    pub n_functions: usize,
    pub n_replicates: usize,
    pub grid_size: usize,
    pub seed: u64,
    /// Amplitude cutoff constants to evaluate; empty skips the component.
    pub k_a_grid: Vec<f64>,
    pub k_p_grid: Vec<f64>,
    pub lambda: f64,
    pub rule: OutlierRule,
    /// Run replicates on the rayon pool. Results are identical either way.
    pub parallel: bool,
    pub median: MedianOptions,
}

impl SimulationConfig {
    /// Defaults for one simulation: 100 replicates of 100 functions on 101
    /// points, evaluated at the default k grids of each design.
    pub fn new(sim_id: u8, seed: u64) -> Self {
        let sim4 = vec![0.6, 0.7, 0.8, 0.9, 1.0];
        let (k_a_grid, k_p_grid) = match sim_id {
            1 | 2 => (DEFAULT_AMPLITUDE_SCAN.to_vec(), Vec::new()),
            3 => (Vec::new(), DEFAULT_PHASE_SCAN.to_vec()),
            _ => (sim4.clone(), sim4),
        };
        Self {
            sim_id,
            n_functions: 100,
            n_replicates: 100,
            grid_size: DEFAULT_GRID_SIZE,
            seed,
            k_a_grid,
            k_p_grid,
            lambda: DEFAULT_LAMBDA,
            rule: OutlierRule::Max,
            parallel: false,
            median: MedianOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(1..=4).contains(&self.sim_id) {
            return bad(format!("simulation id must be 1-4, got {}", self.sim_id));
        }
        if self.n_functions < 4 || self.n_replicates < 1 || self.grid_size < 3 {
            return bad(format!(
                "need at least 4 functions, 1 replicate and 3 grid points (got {}, {}, {})",
                self.n_functions, self.n_replicates, self.grid_size
            ));
        }
        for &k in self.k_a_grid.iter().chain(&self.k_p_grid) {
            BoxplotOptions {
                k,
                lambda: self.lambda,
                rule: self.rule,
            }
            .validate()?;
        }
        Ok(())
    }
}

/// Detection rates of one replicate for one component. `p_c` is undefined
/// when the replicate has no true outliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rates {
    pub p_c: Option<f64>,
    pub p_f: f64,
}

fn rates(n: usize, truth: &[usize], flagged: &[usize]) -> Rates {
    let hits = flagged.iter().filter(|i| truth.contains(i)).count();
    let false_hits = flagged.len() - hits;
    let inliers = n - truth.len();
    Rates {
        p_c: (!truth.is_empty()).then(|| 100.0 * hits as f64 / truth.len() as f64),
        p_f: if inliers == 0 {
            0.0
        } else {
            100.0 * false_hits as f64 / inliers as f64
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentRates {
    pub amplitude: Rates,
    pub phase: Rates,
}

/// Compares flagged index sets against the injected truth.
pub fn evaluate(dataset: &LabeledDataset, flagged_amp: &[usize], flagged_phase: &[usize]) -> ComponentRates {
    let n = dataset.functions.len();
    ComponentRates {
        amplitude: rates(n, &dataset.amplitude_outlier_truth, flagged_amp),
        phase: rates(n, &dataset.phase_outlier_truth, flagged_phase),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Amplitude,
    Phase,
}

/// Mean and sample standard deviation across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub component: Component,
    pub k: f64,
    pub p_c_mean: Option<f64>,
    pub p_c_sd: Option<f64>,
    pub p_f_mean: f64,
    pub p_f_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub replicate: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub sim_id: u8,
    pub n_functions: usize,
    pub n_replicates: usize,
    pub grid_size: usize,
    pub seed: u64,
    pub lambda: f64,
    pub rule: OutlierRule,
    pub rows: Vec<TableRow>,
    pub completed_replicates: usize,
    /// Replicates whose medians hit an iteration cap; still counted.
    pub nonconverged_replicates: usize,
    pub failures: Vec<ReplicateFailure>,
}

impl SimulationReport {
    pub fn row(&self, component: Component, k: f64) -> Option<&TableRow> {
        self.rows
            .iter()
            .find(|r| r.component == component && (r.k - k).abs() < 1e-9)
    }

    pub fn exceeds_failure_budget(&self) -> bool {
        self.failures.len() as f64 > FAILURE_BUDGET * self.n_replicates as f64
    }

    /// Aligned text table: one block per component, k values across.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "Simulation {}: {} replicates x {} functions, T = {}, seed {}, lambda {}, rule {:?}",
            self.sim_id, self.completed_replicates, self.n_functions, self.grid_size, self.seed, self.lambda, self.rule
        );
        for (component, label) in [(Component::Amplitude, "k_a"), (Component::Phase, "k_p")] {
            let rows: Vec<&TableRow> = self.rows.iter().filter(|r| r.component == component).collect();
            if rows.is_empty() {
                continue;
            }
            let _ = writeln!(s, "{component:?}");
            let mut line = format!("  {label:<5}");
            for r in &rows {
                let _ = write!(line, "{:>16}", format!("{:.1}", r.k));
            }
            let _ = writeln!(s, "{line}");
            let cell = |m: Option<f64>, sd: Option<f64>| match (m, sd) {
                (Some(m), Some(sd)) => format!("{m:.2} ({sd:.2})"),
                _ => "-".to_string(),
            };
            let mut pc = "  p_c  ".to_string();
            let mut pf = "  p_f  ".to_string();
            for r in &rows {
                let _ = write!(pc, "{:>16}", cell(r.p_c_mean, r.p_c_sd));
                let _ = write!(pf, "{:>16}", cell(Some(r.p_f_mean), Some(r.p_f_sd)));
            }
            let _ = writeln!(s, "{pc}\n{pf}");
        }
        if !self.failures.is_empty() {
            let _ = writeln!(s, "{} replicate(s) failed and were excluded", self.failures.len());
        }
        s
    }
}

/// Per-replicate rates, in grid order: amplitude k values then phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub amplitude: Vec<Rates>,
    pub phase: Vec<Rates>,
    pub converged: bool,
}

pub fn run_replicate(config: &SimulationConfig, replicate: usize) -> Result<ReplicateOutcome> {
    let data = generate(config, replicate)?;
    let dec = decompose_with(&data.functions, &config.median)?;
    let opts = |k| BoxplotOptions {
        k,
        lambda: config.lambda,
        rule: config.rule,
    };
    let n = data.functions.len();
    let amplitude = config
        .k_a_grid
        .iter()
        .map(|&k| {
            let bp = amplitude_boxplot(&dec, &opts(k))?;
            Ok(rates(n, &data.amplitude_outlier_truth, &bp.outlier_indices))
        })
        .collect::<Result<_>>()?;
    let phase = config
        .k_p_grid
        .iter()
        .map(|&k| {
            let bp = phase_boxplot(&dec, &opts(k))?;
            Ok(rates(n, &data.phase_outlier_truth, &bp.outlier_indices))
        })
        .collect::<Result<_>>()?;
    Ok(ReplicateOutcome {
        amplitude,
        phase,
        converged: dec.diagnostics.converged(),
    })
}

fn mean_sd(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.is_empty() {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() < 2 {
        0.0
    } else {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some((mean, sd))
}

fn summarize(component: Component, k: f64, per_rep: &[Rates]) -> TableRow {
    let pcs: Vec<f64> = per_rep.iter().filter_map(|r| r.p_c).collect();
    let pfs: Vec<f64> = per_rep.iter().map(|r| r.p_f).collect();
    let pc = mean_sd(&pcs);
    let (p_f_mean, p_f_sd) = mean_sd(&pfs).unwrap_or((0.0, 0.0));
    TableRow {
        component,
        k,
        p_c_mean: pc.map(|p| p.0),
        p_c_sd: pc.map(|p| p.1),
        p_f_mean,
        p_f_sd,
    }
}

/// Runs every replicate end to end and aggregates the rates. Failing
/// replicates are excluded and listed in the report.
pub fn run_table(config: &SimulationConfig) -> Result<SimulationReport> {
    config.validate()?;
    let one = |r: usize| {
        std::panic::catch_unwind(AssertUnwindSafe(|| run_replicate(config, r))).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            Err(Error::Panicked(msg))
        })
    };
    let outcomes: Vec<Result<ReplicateOutcome>> = if config.parallel {
        (0..config.n_replicates).into_par_iter().map(one).collect()
    } else {
        (0..config.n_replicates).map(one).collect()
    };

    let mut ok = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (replicate, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(o) => ok.push(o),
            Err(e) => {
                log::warn!("replicate {replicate} failed: {e}");
                failures.push(ReplicateFailure {
                    replicate,
                    error: e.to_string(),
                });
            }
        }
    }

    let mut rows = Vec::new();
    for (j, &k) in config.k_a_grid.iter().enumerate() {
        let per: Vec<Rates> = ok.iter().map(|o| o.amplitude[j]).collect();
        rows.push(summarize(Component::Amplitude, k, &per));
    }
    for (j, &k) in config.k_p_grid.iter().enumerate() {
        let per: Vec<Rates> = ok.iter().map(|o| o.phase[j]).collect();
        rows.push(summarize(Component::Phase, k, &per));
    }
    Ok(SimulationReport {
        sim_id: config.sim_id,
        n_functions: config.n_functions,
        n_replicates: config.n_replicates,
        grid_size: config.grid_size,
        seed: config.seed,
        lambda: config.lambda,
        rule: config.rule,
        rows,
        completed_replicates: ok.len(),
        nonconverged_replicates: ok.iter().filter(|o| !o.converged).count(),
        failures,
    })
}
