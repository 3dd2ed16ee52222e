use std::path::Path;

use super::{raw, tiff, Volume, VolumeFormat};
use crate::error::{Error, Result};

fn resolve_format(path: &Path, hint: Option<VolumeFormat>) -> Result<VolumeFormat> {
    hint.or_else(|| VolumeFormat::from_path(path))
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "cannot infer volume format of {}; use a .tif/.tiff or .raw extension",
                path.display()
            ))
        })
}

/// Reads a multi-page grayscale TIFF or a raw stack with JSON sidecar.
///
/// Samples are normalized by `2^bits - 1`; page order becomes slice order.
/// Without a hint the format is taken from the file extension.
pub fn read_volume(path: impl AsRef<Path>, format_hint: Option<VolumeFormat>) -> Result<Volume> {
    let path = path.as_ref();
    match resolve_format(path, format_hint)? {
        VolumeFormat::TiffStack => tiff::read_tiff(path),
        VolumeFormat::Raw => raw::read_raw(path),
    }
}

/// Writes `volume` quantized to its source bit depth.
pub fn write_volume(
    volume: &Volume,
    path: impl AsRef<Path>,
    format: Option<VolumeFormat>,
) -> Result<()> {
    let path = path.as_ref();
    match resolve_format(path, format)? {
        VolumeFormat::TiffStack => tiff::write_tiff(volume, path),
        VolumeFormat::Raw => raw::write_raw(volume, path),
    }
}
