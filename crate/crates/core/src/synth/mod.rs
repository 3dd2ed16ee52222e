//! Mid-slice synthesis and recursive 2^n z-upsampling.

mod midframe;
mod upscale;
pub(crate) mod warp;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowConfig;

pub use self::midframe::{midframe_flows, synthesize_midframe, MidframeResult};
pub use self::upscale::{upscale_volume, NoProgress, ProgressEvent, ProgressSink};
pub use self::warp::backward_warp;

/// How flows from the unknown middle slice are derived from the two
/// neighbour-to-neighbour flows under linear motion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitMode {
    /// Halve each directional flow independently.
    Simple,
    /// Average the forward flow with the reversed backward flow.
    #[default]
    Symmetric,
}

impl std::str::FromStr for SplitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(SplitMode::Simple),
            "symmetric" => Ok(SplitMode::Symmetric),
            other => Err(Error::InvalidArgument(format!(
                "unknown split mode '{other}'"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthesisConfig {
    pub flow: FlowConfig,
    pub split_mode: SplitMode,
    pub consistency_tolerance_px: f64,
    /// Weights of (first, last) warped slices where both consistency
    /// weights vanish.
    pub fallback_blend: (f64, f64),
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        Self {
            flow: FlowConfig::default(),
            split_mode: SplitMode::Symmetric,
            consistency_tolerance_px: 1.0,
            fallback_blend: (0.5, 0.5),
        }
    }
}

impl SynthesisConfig {
    pub fn validate(&self) -> Result<()> {
        self.flow.validate()?;
        if !(self.consistency_tolerance_px > 0.0 && self.consistency_tolerance_px.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "consistency tolerance must be positive, got {}",
                self.consistency_tolerance_px
            )));
        }
        let (a, b) = self.fallback_blend;
        if a < 0.0 || b < 0.0 || ((a + b) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "fallback blend ({a}, {b}) must be non-negative and sum to 1"
            )));
        }
        Ok(())
    }
}
