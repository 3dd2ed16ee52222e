use super::FlowField;
use crate::error::{Error, Result};
use crate::image::Image;

/// Per-pixel forward-backward agreement in `[0, 1]`; 1 is fully consistent.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyMask(pub Image);

impl ConsistencyMask {
    pub fn weights(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn image(&self) -> &Image {
        &self.0
    }

    pub fn into_image(self) -> Image {
        self.0
    }
}

/// `w(p) = max(0, 1 - |F_fwd(p) + F_bwd(p + F_fwd(p))| / tolerance_px)`.
///
/// The backward flow is sampled bilinearly; pixels whose forward target
/// leaves the image get weight 0.
pub fn consistency_mask(
    forward: &FlowField,
    backward: &FlowField,
    tolerance_px: f64,
) -> Result<ConsistencyMask> {
    forward.check_same_shape(backward)?;
    if !(tolerance_px > 0.0 && tolerance_px.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "consistency tolerance must be positive, got {tolerance_px}"
        )));
    }
    let (w, h) = (forward.width(), forward.height());
    let (xmax, ymax) = ((w - 1) as f64, (h - 1) as f64);
    let img = Image::from_fn(w, h, |x, y| {
        let (fu, fv) = forward.get(x, y);
        let (qx, qy) = (x as f64 + fu, y as f64 + fv);
        if !(0.0..=xmax).contains(&qx) || !(0.0..=ymax).contains(&qy) {
            return 0.0;
        }
        let (bu, bv) = backward.sample(qx, qy);
        (1.0 - (fu + bu).hypot(fv + bv) / tolerance_px).max(0.0)
    });
    Ok(ConsistencyMask(img))
}
