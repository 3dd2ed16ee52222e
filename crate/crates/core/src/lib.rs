//! Z-axis upscaling of anisotropic image volumes.
//!
//! New z-slices are synthesized between every adjacent pair of existing
//! slices by estimating dense optical flow between the pair, splitting it
//! into flows from the (unknown) middle slice to both neighbours, backward
//! warping both neighbours onto the middle grid and fusing the results with
//! forward-backward consistency weights. Applying the midpoint synthesis
//! recursively upsamples the stack by any power of two.
//!
//! The crate also carries the intensity-only baselines (cubic convolution,
//! linear, nearest, average), PSNR/SSIM metrics and the skip-frame
//! evaluation protocol used to compare them.

pub mod baseline;
pub mod error;
pub mod flow;
pub mod image;
pub mod metrics;
pub mod synth;
pub mod synthetic;
pub mod volume;

pub use crate::baseline::{interp_z, KernelKind, KernelSpec};
pub use crate::error::{Error, Result};
pub use crate::flow::{
    build_pyramid, consistency_mask, estimate_flow, read_flo, write_flo, ConsistencyMask,
    FlowConfig, FlowField, ImagePyramid,
};
pub use crate::image::Image;
pub use crate::metrics::{
    emit_report, psnr, run_skip_eval, ssim, EvalOptions, EvalReport, Method, MetricRow,
    ReportFormat, SsimParams,
};
pub use crate::synth::{
    backward_warp, midframe_flows, synthesize_midframe, upscale_volume, MidframeResult, NoProgress,
    ProgressEvent, ProgressSink, SplitMode, SynthesisConfig,
};
pub use crate::volume::{
    crop_subvolumes, decimate_z, generate_triplets, read_volume, triplet_indices, write_volume,
    BitDepth, Decimation, SliceTriplet, Volume, VolumeFormat, VolumeMeta,
};

/// Version string embedded in evaluation reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Returns true when `n` is a power of two no smaller than 2.
pub(crate) fn is_upsampling_factor(n: usize) -> bool {
    n >= 2 && n.is_power_of_two()
}
