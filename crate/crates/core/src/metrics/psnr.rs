use crate::error::Result;
use crate::image::Image;

/// Returned by [`psnr`] when the two images are identical.
pub const PSNR_ZERO_MSE_DB: f64 = 99.0;

pub fn mse(reference: &Image, test: &Image) -> Result<f64> {
    reference.check_same_shape(test)?;
    let sum: f64 = reference
        .as_slice()
        .iter()
        .zip(test.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.len() as f64)
}

/// `10 log10(range^2 / MSE)` in dB, or [`PSNR_ZERO_MSE_DB`] when MSE is 0.
pub fn psnr(reference: &Image, test: &Image, data_range: f64) -> Result<f64> {
    if data_range.is_nan() || data_range <= 0.0 {
        return Err(crate::Error::InvalidArgument(format!(
            "data range must be positive, got {data_range}"
        )));
    }
    let m = mse(reference, test)?;
    if m == 0.0 {
        return Ok(PSNR_ZERO_MSE_DB);
    }
    Ok(10.0 * (data_range * data_range / m).log10())
}
