use log::warn;
use serde::{Deserialize, Serialize};

use super::Volume;
use crate::error::{Error, Result};
use crate::image::Image;

/// Three consecutive slices: two inputs and the middle target.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceTriplet {
    pub first: Image,
    pub middle: Image,
    pub last: Image,
    pub z_indices: [usize; 3],
}

/// Indices of the triplets `(z, z+1, z+2)` for `z = 0, 2, 4, ...`.
///
/// Neighbouring triplets share their boundary slice, so a stack of depth
/// `2k + 1` yields exactly `k` triplets. Trailing slices that cannot complete
/// a triplet are dropped.
pub fn triplet_indices(depth: usize) -> Result<Vec<[usize; 3]>> {
    if depth < 3 {
        return Err(Error::InvalidArgument(format!(
            "triplets need depth >= 3, got {depth}"
        )));
    }
    Ok((0..(depth - 1) / 2)
        .map(|k| [2 * k, 2 * k + 1, 2 * k + 2])
        .collect())
}

pub fn generate_triplets(volume: &Volume) -> Result<Vec<SliceTriplet>> {
    Ok(triplet_indices(volume.depth())?
        .into_iter()
        .map(|z| SliceTriplet {
            first: volume.slice(z[0]),
            middle: volume.slice(z[1]),
            last: volume.slice(z[2]),
            z_indices: z,
        })
        .collect())
}

/// Non-overlapping `sub_shape` tiles in z-major, then y, then x order.
pub fn crop_subvolumes(
    volume: &Volume,
    sub_shape: [usize; 3],
    max_count: usize,
) -> Result<Vec<Volume>> {
    let shape = volume.shape();
    if sub_shape.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "sub-volume shape {sub_shape:?} has a zero extent"
        )));
    }
    if sub_shape.iter().zip(shape).any(|(&s, d)| s > d) {
        return Err(Error::InvalidArgument(format!(
            "sub-volume shape {sub_shape:?} exceeds volume shape {shape:?}"
        )));
    }
    let [sd, sh, sw] = sub_shape;
    let (nz, ny, nx) = (shape[0] / sd, shape[1] / sh, shape[2] / sw);

    let mut tiles = Vec::new();
    'scan: for tz in 0..nz {
        for ty in 0..ny {
            for tx in 0..nx {
                if tiles.len() == max_count {
                    break 'scan;
                }
                let mut data = Vec::with_capacity(sd * sh * sw);
                for z in tz * sd..(tz + 1) * sd {
                    for y in ty * sh..(ty + 1) * sh {
                        let row = (z * shape[1] + y) * shape[2];
                        data.extend_from_slice(&volume.data()[row + tx * sw..row + (tx + 1) * sw]);
                    }
                }
                tiles.push(
                    Volume::new(sd, sh, sw, data, volume.source_bit_depth())?
                        .with_voxel_size(volume.voxel_size()),
                );
            }
        }
    }
    Ok(tiles)
}

/// Result of withholding slices from an isotropic stack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecimationIndices {
    pub kept: Vec<usize>,
    pub skipped: Vec<usize>,
    /// Trailing slices dropped so that both ends of the stack are kept.
    pub trimmed: usize,
}

#[derive(Clone, Debug)]
pub struct Decimation {
    pub kept: Volume,
    pub indices: DecimationIndices,
}

impl Decimation {
    pub fn skipped_indices(&self) -> &[usize] {
        &self.indices.skipped
    }

    pub fn kept_indices(&self) -> &[usize] {
        &self.indices.kept
    }
}

pub(crate) fn decimation_indices(depth: usize, factor: usize) -> Result<DecimationIndices> {
    if !crate::is_upsampling_factor(factor) {
        return Err(Error::InvalidArgument(format!(
            "decimation factor must be a power of two >= 2 (2^n), got {factor}"
        )));
    }
    if depth < factor + 1 {
        return Err(Error::InvalidArgument(format!(
            "depth {depth} is too shallow for factor {factor}; need at least {}",
            factor + 1
        )));
    }
    let usable = depth - (depth - 1) % factor;
    let trimmed = depth - usable;
    let kept = (0..usable).step_by(factor).collect();
    let skipped = (0..usable).filter(|z| z % factor != 0).collect();
    Ok(DecimationIndices {
        kept,
        skipped,
        trimmed,
    })
}

/// Keeps every `factor`-th slice starting at 0.
///
/// The stack is first trimmed at the end so that its depth is `1 mod factor`
/// and every skipped slice sits between two kept ones; the trim is logged
/// and reported in the returned indices.
pub fn decimate_z(volume: &Volume, factor: usize) -> Result<Decimation> {
    let indices = decimation_indices(volume.depth(), factor)?;
    if indices.trimmed > 0 {
        warn!(
            "depth {} is not 1 mod {factor}; trimming {} trailing slice(s)",
            volume.depth(),
            indices.trimmed
        );
    }
    let kept = volume.select_slices(&indices.kept)?;
    Ok(Decimation { kept, indices })
}
