//! JSON state files: `{"hbar": ħ, "amplitudes": [[re, im], ...]}` for pure
//! states or `{"hbar": ħ, "matrix": [[[re, im], ...], ...]}` for densities.

use std::path::Path;

use anyhow::{bail, Context, Result};
use epur_core::scalar::{CMatrix, CVector};
use epur_core::{FockDensity, FockState, FockVector, C};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub hbar: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// A state read from a file.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(FockVector<f64>),
    Mixed(FockDensity<f64>),
}

impl LoadedState {
    pub fn as_state(&self) -> &dyn FockState<f64> {
        match self {
            LoadedState::Pure(v) => v,
            LoadedState::Mixed(d) => d,
        }
    }
}

impl StateFile {
    pub fn from_vector(v: &FockVector<f64>) -> Self {
        Self {
            hbar: v.hbar(),
            amplitudes: Some(v.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            matrix: None,
        }
    }

    pub fn from_density(d: &FockDensity<f64>) -> Self {
        let m = d.matrix();
        Self {
            hbar: d.hbar(),
            amplitudes: None,
            matrix: Some(
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect(),
            ),
        }
    }

    /// Amplitudes are normalized on load; density matrices must already be
    /// valid.
    pub fn load_state(&self) -> Result<LoadedState> {
        match (&self.amplitudes, &self.matrix) {
            (Some(a), None) => {
                let v = CVector::from_iterator(a.len(), a.iter().map(|&[re, im]| C::new(re, im)));
                Ok(LoadedState::Pure(FockVector::from_unnormalized(v, self.hbar)?))
            }
            (None, Some(m)) => {
                let n = m.len();
                if m.iter().any(|row| row.len() != n) {
                    bail!("density matrix must be square");
                }
                let mat = CMatrix::from_fn(n, n, |i, j| C::new(m[i][j][0], m[i][j][1]));
                Ok(LoadedState::Mixed(FockDensity::new(mat, self.hbar)?))
            }
            _ => bail!("state file needs exactly one of \"amplitudes\" or \"matrix\""),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
