use std::io::Read;
use std::path::Path;

use elastic_boxplot::{resample_linear, resample_spline, Grid, SampledFunction};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// How raw samples are mapped onto the working grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Resample {
    #[default]
    Linear,
    Spline,
}

/// Parsed CSV: first column time, one function per remaining column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub times: Vec<f64>,
    pub columns: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::from_reader(file)
    }

    pub fn from_reader(r: impl Read) -> Result<Self, CliError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(r);
        let header = rdr
            .headers()
            .map_err(|e| CliError::input(format!("cannot read header: {e}")))?
            .clone();
        let width = header.len();
        if width < 4 {
            return Err(CliError::input(format!(
                "need a time column and at least 3 function columns, header has {width} column(s)"
            )));
        }
        let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut times = Vec::new();
        let mut columns = vec![Vec::new(); width - 1];
        for (k, rec) in rdr.records().enumerate() {
            // Row numbers are 1-based file lines; the header is line 1.
            let row = k + 2;
            let rec = rec.map_err(|e| CliError::input(format!("row {row}: {e}")))?;
            if rec.len() != width {
                return Err(CliError::input(format!(
                    "row {row}: expected {width} columns, found {}",
                    rec.len()
                )));
            }
            for (col, cell) in rec.iter().enumerate() {
                let v: f64 = cell.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| {
                    CliError::input(format!(
                        "row {row}, column {} ({}): not a finite number: {cell:?}",
                        col + 1,
                        header.get(col).unwrap_or("")
                    ))
                })?;
                if col == 0 {
                    times.push(v);
                } else {
                    columns[col - 1].push(v);
                }
            }
        }
        if times.len() < 3 {
            return Err(CliError::input(format!("need at least 3 data rows, found {}", times.len())));
        }
        if let Some(w) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(CliError::input(format!(
                "row {}, column 1: time values must be strictly increasing",
                w + 3
            )));
        }
        Ok(Self { names, times, columns })
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn time_span(&self) -> [f64; 2] {
        [self.times[0], self.times[self.times.len() - 1]]
    }

    /// Maps time onto [0, 1] and resamples every column on a uniform grid.
    pub fn to_functions(&self, grid_size: usize, method: Resample) -> Result<Vec<SampledFunction>, CliError> {
        let grid = Grid::uniform(grid_size).map_err(CliError::input_from)?;
        let [t0, t1] = self.time_span();
        let unit: Vec<f64> = self.times.iter().map(|t| (t - t0) / (t1 - t0)).collect();
        self.columns
            .iter()
            .map(|col| match method {
                Resample::Linear => resample_linear(&unit, col, &grid),
                Resample::Spline => resample_spline(&unit, col, &grid),
            })
            .collect::<elastic_boxplot::Result<_>>()
            .map_err(CliError::input_from)
    }
}
