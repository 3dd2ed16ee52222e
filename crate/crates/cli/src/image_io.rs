use std::path::Path;

use anyhow::{bail, Context, Result};
use zup_core::{read_volume, Image, VolumeFormat};

/// Loads a single grayscale slice. PNG files go through the `image` crate;
/// TIFF stacks and raw volumes are read as volumes and `slice` is taken.
pub fn read_slice(path: &Path, slice: usize) -> Result<Image> {
    if VolumeFormat::from_path(path).is_some() {
        let vol = read_volume(path, None)?;
        if slice >= vol.depth() {
            bail!(
                "{} has {} slice(s); slice {slice} does not exist",
                path.display(),
                vol.depth()
            );
        }
        return Ok(vol.slice(slice));
    }
    let img = image::open(path)
        .with_context(|| format!("cannot read image {}", path.display()))?
        .into_luma16();
    let (w, h) = img.dimensions();
    let data = img
        .into_raw()
        .into_iter()
        .map(|s| s as f64 / 65535.0)
        .collect();
    Ok(Image::new(w as usize, h as usize, data)?)
}

pub fn write_rgb_png(path: &Path, width: usize, height: usize, rgb: Vec<u8>) -> Result<()> {
    let img = image::RgbImage::from_raw(width as u32, height as u32, rgb)
        .context("RGB buffer does not match the image size")?;
    img.save_with_format(path, image::ImageFormat::Png)
        .with_context(|| format!("cannot write {}", path.display()))
}
