//! Config file handling.
//!
//! A single tree, read from TOML or (by `.json` extension) JSON:
//!
//! ```toml
//! [flow]
//! alpha = 15.0
//! levels = 7
//! iterations = 100
//! warps = 3
//! epsilon = 1e-4
//!
//! [synth]
//! split_mode = "symmetric"
//! consistency_tolerance_px = 1.0
//! fallback_blend = [0.5, 0.5]
//!
//! [eval]
//! methods = ["flow", "bicubic", "average"]
//! dataset = "sphere"
//! format = "json"
//! ```
//!
//! Every key is optional. Command-line flags override file values, which
//! override the built-in defaults.

use std::path::Path;

use serde::Deserialize;
use zup_core::metrics::ReportFormat;
use zup_core::{Method, SplitMode, SynthesisConfig};

use crate::args::{FlowOverrides, SynthOverrides};
use crate::UsageError;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub flow: FlowSection,
    pub synth: SynthSection,
    pub eval: EvalSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowSection {
    pub alpha: Option<f64>,
    pub levels: Option<usize>,
    pub iterations: Option<usize>,
    pub warps: Option<usize>,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthSection {
    pub split_mode: Option<SplitMode>,
    pub consistency_tolerance_px: Option<f64>,
    pub fallback_blend: Option<(f64, f64)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub methods: Option<Vec<Method>>,
    pub dataset: Option<String>,
    pub format: Option<ReportFormat>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, UsageError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let is_json = path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let parsed = if is_json {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))
    }

    /// Effective synthesis settings: flag, then file, then default.
    pub fn synthesis(
        &self,
        flow: &FlowOverrides,
        synth: &SynthOverrides,
    ) -> Result<SynthesisConfig, UsageError> {
        let d = SynthesisConfig::default();
        let f = &self.flow;
        let s = &self.synth;
        let mut cfg = d.clone();
        cfg.flow.alpha = flow.alpha.or(f.alpha).unwrap_or(d.flow.alpha);
        cfg.flow.max_levels = flow.levels.or(f.levels).unwrap_or(d.flow.max_levels);
        cfg.flow.iterations_per_level = flow
            .iterations
            .or(f.iterations)
            .unwrap_or(d.flow.iterations_per_level);
        cfg.flow.warps_per_level = flow.warps.or(f.warps).unwrap_or(d.flow.warps_per_level);
        cfg.flow.convergence_epsilon = f.epsilon.unwrap_or(d.flow.convergence_epsilon);
        cfg.split_mode = synth.split_mode.or(s.split_mode).unwrap_or(d.split_mode);
        cfg.consistency_tolerance_px = synth
            .consistency_tolerance
            .or(s.consistency_tolerance_px)
            .unwrap_or(d.consistency_tolerance_px);
        cfg.fallback_blend = s.fallback_blend.unwrap_or(d.fallback_blend);
        cfg.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(cfg)
    }
}
