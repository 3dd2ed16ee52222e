use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::report::{EvalReport, MetricRow, SliceScore};
use super::{psnr, ssim, SsimParams};
use crate::baseline::{interp_z, KernelKind, KernelSpec};
use crate::error::{Error, Result};
use crate::synth::{upscale_volume, NoProgress, SynthesisConfig};
use crate::volume::{decimate_z, Volume};

/// Reconstruction methods compared by the skip-frame protocol. The derived
/// ordering is alphabetical by name, which is also the report row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Average,
    Bicubic,
    Flow,
    Linear,
    Nearest,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Average,
        Method::Bicubic,
        Method::Flow,
        Method::Linear,
        Method::Nearest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Average => "average",
            Method::Bicubic => "bicubic",
            Method::Flow => "flow",
            Method::Linear => "linear",
            Method::Nearest => "nearest",
        }
    }

    /// Upsamples `kept` along z by `factor` with this method.
    pub fn reconstruct(
        self,
        kept: &Volume,
        factor: usize,
        synthesis: &SynthesisConfig,
    ) -> Result<Volume> {
        match self {
            Method::Flow => upscale_volume(kept, factor, synthesis, &NoProgress),
            Method::Bicubic => interp_z(kept, factor, KernelSpec::cubic()),
            Method::Linear => interp_z(kept, factor, KernelSpec::of(KernelKind::Linear)),
            Method::Nearest => interp_z(kept, factor, KernelSpec::of(KernelKind::Nearest)),
            Method::Average => interp_z(kept, factor, KernelSpec::of(KernelKind::Average)),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method '{s}', expected one of average, bicubic, flow, linear, nearest"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub synthesis: SynthesisConfig,
    pub ssim: SsimParams,
    /// Free-form label copied into every report row.
    pub dataset: String,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            synthesis: SynthesisConfig::default(),
            ssim: SsimParams::default(),
            dataset: "volume".into(),
        }
    }
}

/// Scores `reconstruction` against `truth` at the `skipped` z-indices only.
pub fn score_reconstruction(
    truth: &Volume,
    reconstruction: &Volume,
    skipped: &[usize],
    method: &str,
    factor: usize,
    dataset: &str,
    params: &SsimParams,
) -> Result<MetricRow> {
    if truth.height() != reconstruction.height() || truth.width() != reconstruction.width() {
        return Err(Error::shape(
            (truth.height(), truth.width()),
            (reconstruction.height(), reconstruction.width()),
        ));
    }
    if let Some(&z) = skipped
        .iter()
        .find(|&&z| z >= truth.depth() || z >= reconstruction.depth())
    {
        return Err(Error::InvalidArgument(format!(
            "skipped index {z} outside the compared volumes"
        )));
    }
    let per_slice = skipped
        .par_iter()
        .map(|&z| {
            let (t, r) = (truth.slice(z), reconstruction.slice(z));
            Ok(SliceScore {
                z,
                psnr: psnr(&t, &r, params.data_range)?,
                ssim: ssim(&t, &r, params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MetricRow::from_scores(method, factor, dataset, per_slice)
}

/// Skip-frame evaluation.
///
/// The isotropic `volume` is decimated by `factor` (trailing slices trimmed
/// so both ends are kept), every method reconstructs the full stack from the
/// kept slices alone, and PSNR/SSIM are computed at the withheld indices.
/// Rows come out sorted by method name.
pub fn run_skip_eval(
    volume: &Volume,
    factor: usize,
    methods: &[Method],
    options: &EvalOptions,
) -> Result<EvalReport> {
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    if methods.is_empty() {
        return Err(Error::InvalidArgument("no evaluation methods given".into()));
    }
    let decimation = decimate_z(volume, factor)?;
    let skipped = decimation.skipped_indices().to_vec();

    let rows = methods
        .iter()
        .map(|&m| {
            let recon = m.reconstruct(&decimation.kept, factor, &options.synthesis)?;
            score_reconstruction(
                volume,
                &recon,
                &skipped,
                m.name(),
                factor,
                &options.dataset,
                &options.ssim,
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let config = json!({
        "factor": factor,
        "methods": methods,
        "dataset": options.dataset,
        "synthesis": options.synthesis,
        "ssim": options.ssim,
        "kept_indices": decimation.kept_indices(),
        "skipped_indices": skipped,
        "trimmed_slices": decimation.indices.trimmed,
        "aggregation": "mean over skipped slices",
    });
    EvalReport::new(rows, config)
}
