use elastic_boxplot::{SurfaceCurve, SurfaceDisplay, SurfaceMode};
use serde::{Deserialize, Serialize};

/// Surface-display mesh: one row of `values` per curve, placed at `offset`
/// along the depth axis. Rendering is left to the consumer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    pub mode: SurfaceMode,
    pub grid: Vec<f64>,
    pub curves: Vec<SurfaceCurve>,
}

impl Mesh {
    pub fn new(display: &SurfaceDisplay, grid: &[f64]) -> Self {
        Self {
            mode: display.mode,
            grid: grid.to_vec(),
            curves: display.curves.clone(),
        }
    }

    pub fn file_name(&self) -> &'static str {
        match self.mode {
            SurfaceMode::Amplitude => "amplitude_mesh.json",
            SurfaceMode::Phase => "phase_mesh.json",
        }
    }
}
