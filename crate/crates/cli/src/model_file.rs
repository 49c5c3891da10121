//! Self-describing JSON model files.
//!
//! Floats are written in shortest round-trip form and parsed back exactly,
//! so a loaded model scores bit-identically to the one that was saved.

use std::fs;
use std::path::Path;

use oddkit_core::{Algorithm, DetectorParams, FittedDetector, ModelState, TrainStats};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub algo: Algorithm,
    pub params: DetectorParams,
    pub state: ModelState,
    pub train_stats: TrainStats,
}

impl ModelFile {
    pub fn from_detector(det: &FittedDetector) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            algo: det.algorithm(),
            params: det.params().clone(),
            state: det.state(),
            train_stats: det.stats().clone(),
        }
    }

    pub fn into_detector(self) -> Result<FittedDetector> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::Data(format!(
                "unsupported model format version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        if self.algo != self.params.algorithm() {
            return Err(CliError::Data(format!(
                "model file says '{}' but its parameters describe '{}'",
                self.algo,
                self.params.algorithm()
            )));
        }
        FittedDetector::restore(self.params, self.state, self.train_stats)
            .map_err(|e| CliError::Data(format!("invalid model state: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Data(format!("malformed model file: {e}")))
    }
}

pub fn save_model(det: &FittedDetector, path: &Path) -> Result<()> {
    let mut text = ModelFile::from_detector(det).to_json();
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn load_model(path: &Path) -> Result<FittedDetector> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    ModelFile::from_json(&text)?.into_detector()
}
