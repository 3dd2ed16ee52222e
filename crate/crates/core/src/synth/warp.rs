use crate::error::{Error, Result};
use crate::flow::FlowField;
use crate::image::Image;

/// Samples `image` at `p + F(p)` for every pixel `p`.
///
/// Bilinear interpolation; positions outside the image are clamped to the
/// border. A zero flow reproduces the input bit for bit.
pub fn backward_warp(image: &Image, flow: &FlowField) -> Result<Image> {
    if image.shape() != flow.shape() {
        return Err(Error::shape(image.shape(), flow.shape()));
    }
    // FlowField's constructor rejects non-finite values; this guards fields
    // assembled through crate-internal paths.
    if flow.u().iter().chain(flow.v()).any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument(
            "flow contains non-finite values".into(),
        ));
    }
    Ok(warp_unchecked(image, flow))
}

pub(crate) fn warp_unchecked(image: &Image, flow: &FlowField) -> Image {
    Image::from_fn(image.width(), image.height(), |x, y| {
        let (u, v) = flow.get(x, y);
        image.sample_bilinear(x as f64 + u, y as f64 + v)
    })
}
