//! Intensity-only z interpolation: cubic convolution, linear, nearest and
//! the plain two-slice average.
//!
//! Every lateral pixel's z-profile is resampled independently. Sample
//! positions beyond the ends of the stack replicate the end slices.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::volume::Volume;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    CubicConvolution,
    Linear,
    Nearest,
    /// Every inserted slice is the mean of its two bracketing input slices.
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    /// Free parameter of the cubic kernel; -0.5 is Catmull–Rom.
    pub a: f64,
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self::cubic()
    }
}

impl KernelSpec {
    pub fn cubic() -> Self {
        Self {
            kind: KernelKind::CubicConvolution,
            a: -0.5,
        }
    }

    pub fn of(kind: KernelKind) -> Self {
        Self { kind, a: -0.5 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == KernelKind::CubicConvolution && !(-1.0..0.0).contains(&self.a) {
            return Err(Error::InvalidArgument(format!(
                "cubic parameter a must lie in [-1, 0), got {}",
                self.a
            )));
        }
        Ok(())
    }
}

/// Keys' cubic convolution kernel.
#[inline]
pub fn cubic_kernel(s: f64, a: f64) -> f64 {
    let s = s.abs();
    if s <= 1.0 {
        (a + 2.0) * s * s * s - (a + 3.0) * s * s + 1.0
    } else if s < 2.0 {
        a * s * s * s - 5.0 * a * s * s + 8.0 * a * s - 4.0 * a
    } else {
        0.0
    }
}

/// Weights for the samples at offsets -1, 0, 1, 2 around fractional `t`.
#[inline]
pub fn cubic_weights(t: f64, a: f64) -> [f64; 4] {
    [
        cubic_kernel(t + 1.0, a),
        cubic_kernel(t, a),
        cubic_kernel(t - 1.0, a),
        cubic_kernel(t - 2.0, a),
    ]
}

/// Interpolates a single output position `i + t` (`0 < t < 1`) from a
/// profile sampler with clamped indexing.
#[inline]
fn interpolate(at: impl Fn(isize) -> f64, i: isize, t: f64, kernel: &KernelSpec) -> f64 {
    match kernel.kind {
        KernelKind::CubicConvolution => {
            let w = cubic_weights(t, kernel.a);
            w[0] * at(i - 1) + w[1] * at(i) + w[2] * at(i + 1) + w[3] * at(i + 2)
        }
        KernelKind::Linear => (1.0 - t) * at(i) + t * at(i + 1),
        KernelKind::Nearest => {
            if t < 0.5 {
                at(i)
            } else {
                at(i + 1)
            }
        }
        KernelKind::Average => 0.5 * (at(i) + at(i + 1)),
    }
}

/// Upsamples along z by `factor` (a power of two).
///
/// Output depth is `(depth - 1) * factor + 1`; input slice `k` is copied
/// unchanged to index `k * factor`. Results are clamped to `[0, 1]`. With
/// fewer than four input slices the cubic kernel lacks support and linear
/// interpolation is used instead (a warning is logged).
pub fn interp_z(volume: &Volume, factor: usize, kernel: KernelSpec) -> Result<Volume> {
    if !crate::is_upsampling_factor(factor) {
        return Err(Error::InvalidArgument(format!(
            "upsampling factor must be a power of two (2^n, n >= 1), got {factor}"
        )));
    }
    if volume.depth() < 2 {
        return Err(Error::InvalidArgument(format!(
            "interpolation needs depth >= 2, got {}",
            volume.depth()
        )));
    }
    kernel.validate()?;
    let mut kernel = kernel;
    if kernel.kind == KernelKind::CubicConvolution && volume.depth() < 4 {
        warn!(
            "depth {} is below the 4 slices cubic convolution needs; falling back to linear",
            volume.depth()
        );
        kernel.kind = KernelKind::Linear;
    }

    let depth = volume.depth();
    let plane = volume.height() * volume.width();
    let out_depth = (depth - 1) * factor + 1;
    let slices: Vec<Vec<f64>> = (0..out_depth)
        .into_par_iter()
        .map(|j| {
            let (i, r) = (j / factor, j % factor);
            if r == 0 {
                return volume.slice_data(i).to_vec();
            }
            let t = r as f64 / factor as f64;
            let i = i as isize;
            (0..plane)
                .map(|p| {
                    let at = |k: isize| {
                        let k = k.clamp(0, depth as isize - 1) as usize;
                        volume.data()[k * plane + p]
                    };
                    interpolate(at, i, t, &kernel).clamp(0.0, 1.0)
                })
                .collect()
        })
        .collect();

    let data = slices.concat();
    let voxel_size = volume
        .voxel_size()
        .map(|[z, y, x]| [z / factor as f64, y, x]);
    Ok(Volume::new(
        out_depth,
        volume.height(),
        volume.width(),
        data,
        volume.source_bit_depth(),
    )?
    .with_voxel_size(voxel_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::volume::BitDepth;
    use proptest::prelude::*;

    fn column(values: &[f64]) -> Volume {
        Volume::new(values.len(), 1, 1, values.to_vec(), BitDepth::Sixteen).unwrap()
    }

    #[test]
    fn kernel_is_interpolating() {
        assert_eq!(cubic_kernel(0.0, -0.5), 1.0);
        assert_eq!(cubic_kernel(1.0, -0.5), 0.0);
        assert_eq!(cubic_kernel(2.0, -0.5), 0.0);
        assert_eq!(cubic_kernel(-1.0, -0.75), 0.0);
    }

    proptest! {
        #[test]
        fn weights_partition_unity(t in 0.0f64..1.0, a in -1.0f64..-0.01) {
            let w = cubic_weights(t, a);
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_volume_stays_constant() {
        let v = column(&[0.3; 6]);
        for kind in [
            KernelKind::CubicConvolution,
            KernelKind::Linear,
            KernelKind::Nearest,
            KernelKind::Average,
        ] {
            let out = interp_z(&v, 4, KernelSpec::of(kind)).unwrap();
            assert!(
                out.data().iter().all(|&x| (x - 0.3).abs() < 1e-15),
                "{kind:?}"
            );
        }
    }

    #[test]
    fn linear_ramp_midpoints() {
        let n = 9;
        let v = column(
            &(0..n)
                .map(|k| k as f64 / (n - 1) as f64)
                .collect::<Vec<_>>(),
        );
        let out = interp_z(&v, 2, KernelSpec::cubic()).unwrap();
        // away from the replicated ends
        for k in 1..n - 2 {
            let expected = (k as f64 + 0.5) / (n - 1) as f64;
            assert!((out.data()[2 * k + 1] - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn shallow_cubic_falls_back_to_linear() {
        let v = column(&[0.0, 1.0, 0.0]);
        let out = interp_z(&v, 2, KernelSpec::cubic()).unwrap();
        assert_eq!(out.data(), &[0.0, 0.5, 1.0, 0.5, 0.0]);
    }

    #[test]
    fn nearest_and_average() {
        let v = column(&[0.0, 1.0]);
        let near = interp_z(&v, 4, KernelSpec::of(KernelKind::Nearest)).unwrap();
        assert_eq!(near.data(), &[0.0, 0.0, 1.0, 1.0, 1.0]);
        let avg = interp_z(&v, 4, KernelSpec::of(KernelKind::Average)).unwrap();
        assert_eq!(avg.data(), &[0.0, 0.5, 0.5, 0.5, 1.0]);
    }

    #[test]
    fn overshoot_is_clamped() {
        let v = column(&[0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
        let out = interp_z(&v, 8, KernelSpec::cubic()).unwrap();
        assert!(out.data().iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn errors() {
        let v = column(&[0.0, 1.0]);
        assert!(interp_z(&v, 3, KernelSpec::cubic()).is_err());
        assert!(interp_z(&column(&[0.5]), 2, KernelSpec::cubic()).is_err());
        let bad = KernelSpec {
            kind: KernelKind::CubicConvolution,
            a: 0.5,
        };
        assert!(interp_z(&v, 2, bad).is_err());
    }
}
