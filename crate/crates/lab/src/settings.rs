use epur_core::relations::DEFAULT_SAT_TOL;
use epur_core::EvalConfig;
use serde::Serialize;

/// Parameters shared by every experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Settings {
    pub nmax: usize,
    pub hbar: f64,
    pub seed: u64,
    /// Slack tolerance for assertions involving numerical entropies.
    pub tol: f64,
    pub grid_points: usize,
    pub extent_scale: f64,
    pub wigner_points: usize,
    pub neg_tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        let eval = EvalConfig::default();
        Self {
            nmax: 64,
            hbar: 1.0,
            seed: 42,
            tol: DEFAULT_SAT_TOL,
            grid_points: eval.grid_points,
            extent_scale: eval.extent_scale,
            wigner_points: eval.wigner_points,
            neg_tol: eval.neg_tol,
        }
    }
}

impl Settings {
    pub fn eval(&self) -> EvalConfig {
        EvalConfig {
            grid_points: self.grid_points,
            extent_scale: self.extent_scale,
            wigner_points: self.wigner_points,
            sat_tol: self.tol,
            neg_tol: self.neg_tol,
        }
    }
}

/// Tolerance for assertions on closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
