//! Volumes: the in-memory stack type, file I/O and dataset preparation.
//!
//! Intensities are held as unit-interval `f64` values. Quantization to the
//! source bit depth happens only when a volume is written to disk.

mod dataset;
mod io;
mod raw;
mod tiff;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;

pub use self::dataset::{
    crop_subvolumes, decimate_z, generate_triplets, triplet_indices, Decimation, SliceTriplet,
};
pub use self::io::{read_volume, write_volume};
pub use self::raw::RawSidecar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn bits(self) -> u32 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }

    /// Largest representable sample, `2^bits - 1`.
    pub fn max_value(self) -> f64 {
        match self {
            BitDepth::Eight => 255.0,
            BitDepth::Sixteen => 65535.0,
        }
    }

    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(BitDepth::Eight),
            16 => Ok(BitDepth::Sixteen),
            other => Err(Error::InvalidArgument(format!(
                "unsupported bit depth {other}, expected 8 or 16"
            ))),
        }
    }

    /// Round-to-nearest, ties away from zero.
    #[inline]
    pub fn quantize(self, v: f64) -> u16 {
        (v.clamp(0.0, 1.0) * self.max_value()).round() as u16
    }

    #[inline]
    pub fn normalize(self, sample: u16) -> f64 {
        sample as f64 / self.max_value()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeFormat {
    TiffStack,
    Raw,
}

impl VolumeFormat {
    /// Guess from the file extension: `.tif`/`.tiff` or `.raw`.
    pub fn from_path(path: &std::path::Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "tif" | "tiff" => Some(VolumeFormat::TiffStack),
            "raw" => Some(VolumeFormat::Raw),
            _ => None,
        }
    }
}

impl std::str::FromStr for VolumeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tiff" | "tiff-stack" | "tif" => Ok(VolumeFormat::TiffStack),
            "raw" => Ok(VolumeFormat::Raw),
            other => Err(Error::InvalidArgument(format!(
                "unknown volume format '{other}'"
            ))),
        }
    }
}

/// Description of a volume file as found on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeMeta {
    pub path: PathBuf,
    pub format: VolumeFormat,
    pub bit_depth: BitDepth,
    /// `(depth, height, width)`.
    pub dimensions: [usize; 3],
    pub voxel_size: Option<[f64; 3]>,
}

/// A `depth x height x width` stack of intensities in `[0, 1]`.
///
/// `voxel_size` is `(z, y, x)` in nanometers and is carried as metadata only.
#[derive(Clone, Debug, PartialEq)]
pub struct Volume {
    depth: usize,
    height: usize,
    width: usize,
    data: Vec<f64>,
    voxel_size: Option<[f64; 3]>,
    source_bit_depth: BitDepth,
}

impl Volume {
    pub fn new(
        depth: usize,
        height: usize,
        width: usize,
        data: Vec<f64>,
        source_bit_depth: BitDepth,
    ) -> Result<Self> {
        if depth == 0 || height == 0 || width == 0 {
            return Err(Error::InvalidVolume(format!(
                "dimensions must be positive, got {depth}x{height}x{width}"
            )));
        }
        if data.len() != depth * height * width {
            return Err(Error::InvalidVolume(format!(
                "data holds {} samples, expected {}",
                data.len(),
                depth * height * width
            )));
        }
        if let Some(i) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidVolume(format!(
                "intensity {} at flat index {i} lies outside [0, 1]",
                data[i]
            )));
        }
        Ok(Self {
            depth,
            height,
            width,
            data,
            voxel_size: None,
            source_bit_depth,
        })
    }

    /// Stacks equally sized slices in order.
    pub fn from_slices(slices: &[Image], source_bit_depth: BitDepth) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::InvalidVolume("no slices".into()))?;
        let (height, width) = first.shape();
        let mut data = Vec::with_capacity(slices.len() * height * width);
        for (z, s) in slices.iter().enumerate() {
            if s.shape() != (height, width) {
                return Err(Error::InvalidVolume(format!(
                    "slice {z} is {}x{}, expected {height}x{width}",
                    s.height(),
                    s.width()
                )));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::new(slices.len(), height, width, data, source_bit_depth)
    }

    pub fn with_voxel_size(mut self, voxel_size: Option<[f64; 3]>) -> Self {
        self.voxel_size = voxel_size;
        self
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    /// `(depth, height, width)`.
    pub fn shape(&self) -> [usize; 3] {
        [self.depth, self.height, self.width]
    }

    pub fn voxel_size(&self) -> Option<[f64; 3]> {
        self.voxel_size
    }

    pub fn source_bit_depth(&self) -> BitDepth {
        self.source_bit_depth
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, z: usize, y: usize, x: usize) -> f64 {
        self.data[(z * self.height + y) * self.width + x]
    }

    pub fn slice_data(&self, z: usize) -> &[f64] {
        let n = self.height * self.width;
        &self.data[z * n..(z + 1) * n]
    }

    pub fn slice(&self, z: usize) -> Image {
        Image::new(self.width, self.height, self.slice_data(z).to_vec())
            .expect("volume slices are non-empty")
    }

    pub fn slices(&self) -> Vec<Image> {
        (0..self.depth).map(|z| self.slice(z)).collect()
    }

    /// New volume made of the slices at `indices`, in the given order.
    pub fn select_slices(&self, indices: &[usize]) -> Result<Self> {
        let n = self.height * self.width;
        let mut data = Vec::with_capacity(indices.len() * n);
        for &z in indices {
            if z >= self.depth {
                return Err(Error::InvalidArgument(format!(
                    "slice index {z} out of range for depth {}",
                    self.depth
                )));
            }
            data.extend_from_slice(self.slice_data(z));
        }
        Ok(Self::new(
            indices.len(),
            self.height,
            self.width,
            data,
            self.source_bit_depth,
        )?
        .with_voxel_size(self.voxel_size))
    }

    /// Copy with every intensity rounded to the source bit depth.
    pub fn quantized(&self) -> Self {
        let bd = self.source_bit_depth;
        let mut out = self.clone();
        for v in &mut out.data {
            *v = bd.normalize(bd.quantize(*v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_intensity() {
        let err = Volume::new(1, 1, 2, vec![0.5, 1.5], BitDepth::Eight).unwrap_err();
        assert!(err.to_string().contains("outside"));
        assert!(Volume::new(1, 1, 2, vec![0.5, f64::NAN], BitDepth::Eight).is_err());
    }

    #[test]
    fn rejects_wrong_length_and_empty() {
        assert!(Volume::new(2, 2, 2, vec![0.0; 7], BitDepth::Eight).is_err());
        assert!(Volume::new(0, 2, 2, vec![], BitDepth::Eight).is_err());
    }

    #[test]
    fn quantize_rounds_ties_away() {
        assert_eq!(BitDepth::Eight.quantize(0.5), 128);
        assert_eq!(BitDepth::Sixteen.quantize(1.0), 65535);
        assert_eq!(BitDepth::Eight.quantize(0.0), 0);
    }

    #[test]
    fn slices_round_trip() {
        let data: Vec<f64> = (0..24).map(|i| i as f64 / 23.0).collect();
        let v = Volume::new(2, 3, 4, data, BitDepth::Sixteen).unwrap();
        let back = Volume::from_slices(&v.slices(), BitDepth::Sixteen).unwrap();
        assert_eq!(v, back);
        assert_eq!(v.get(1, 2, 3), 1.0);
    }
}
