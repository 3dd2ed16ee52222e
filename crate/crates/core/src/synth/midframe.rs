use super::warp::backward_warp;
use super::{SplitMode, SynthesisConfig};
use crate::error::{Error, Result};
use crate::flow::{consistency_mask, estimate_flow, FlowField, MIN_LEVEL_DIM};
use crate::image::Image;

/// A synthesized middle slice together with the quantities that produced it.
#[derive(Clone, Debug)]
pub struct MidframeResult {
    pub slice: Image,
    /// Flow from the middle grid to the first slice.
    pub flow_to_first: FlowField,
    /// Flow from the middle grid to the last slice.
    pub flow_to_last: FlowField,
    /// Per-pixel weight given to the warped first slice.
    pub fusion_weights: Image,
}

/// Derives middle-to-neighbour flows from the neighbour-to-neighbour flows
/// `f13` (first to last) and `f31` (last to first), assuming linear motion
/// and a middle slice at t = 0.5.
pub fn midframe_flows(
    f13: &FlowField,
    f31: &FlowField,
    mode: SplitMode,
) -> Result<(FlowField, FlowField)> {
    f13.check_same_shape(f31)?;
    Ok(match mode {
        SplitMode::Simple => (f13.scaled(-0.5), f31.scaled(-0.5)),
        SplitMode::Symmetric => (
            f13.combine(-0.25, f31, 0.25)?,
            f13.combine(0.25, f31, -0.25)?,
        ),
    })
}

/// Synthesizes the slice halfway between `first` and `last`.
///
/// Both directional flows are estimated, split into flows from the middle
/// grid, and each neighbour is backward-warped onto the middle grid. The two
/// warps are blended per pixel with their forward-backward consistency
/// weights (each neighbour's mask, pulled onto the middle grid along the same
/// flow). Where both weights vanish the configured fallback blend applies.
pub fn synthesize_midframe(
    first: &Image,
    last: &Image,
    config: &SynthesisConfig,
) -> Result<MidframeResult> {
    first.check_same_shape(last)?;
    let min = 2 * MIN_LEVEL_DIM;
    if first.width() < min || first.height() < min {
        return Err(Error::InvalidArgument(format!(
            "slices must be at least {min}x{min}, got {}x{}",
            first.height(),
            first.width()
        )));
    }
    config.validate()?;

    let (f13, f31) = rayon::join(
        || estimate_flow(first, last, &config.flow),
        || estimate_flow(last, first, &config.flow),
    );
    let (f13, f31) = (f13?, f31?);
    let (to_first, to_last) = midframe_flows(&f13, &f31, config.split_mode)?;

    let warped_first = backward_warp(first, &to_first)?;
    let warped_last = backward_warp(last, &to_last)?;

    let tol = config.consistency_tolerance_px;
    let mask_first = consistency_mask(&f13, &f31, tol)?.into_image();
    let mask_last = consistency_mask(&f31, &f13, tol)?.into_image();
    let c1 = backward_warp(&mask_first, &to_first)?;
    let c3 = backward_warp(&mask_last, &to_last)?;

    let (fb_first, fb_last) = config.fallback_blend;
    let (w, h) = (first.width(), first.height());
    let mut slice = Vec::with_capacity(w * h);
    let mut weights = Vec::with_capacity(w * h);
    for i in 0..w * h {
        let (a, b) = (c1.as_slice()[i], c3.as_slice()[i]);
        let (p1, p3) = (warped_first.as_slice()[i], warped_last.as_slice()[i]);
        let s = a + b;
        let wt = if s > 0.0 { a / s } else { fb_first };
        let value = if s > 0.0 {
            (a * p1 + b * p3) / s
        } else {
            fb_first * p1 + fb_last * p3
        };
        slice.push(value.clamp(0.0, 1.0));
        weights.push(wt);
    }

    Ok(MidframeResult {
        slice: Image::new(w, h, slice)?,
        flow_to_first: to_first,
        flow_to_last: to_last,
        fusion_weights: Image::new(w, h, weights)?,
    })
}
