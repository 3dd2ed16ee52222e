//! Dense optical flow between two slices.
//!
//! Flow is estimated coarse to fine over a binomial image pyramid with an
//! incremental-warping Horn–Schunck solver. A flow field `F` estimated from
//! `reference` to `target` maps reference coordinates to target coordinates:
//! the content at `p` in the reference appears at `p + F(p)` in the target.

mod consistency;
mod flo;
mod horn_schunck;
mod pyramid;
pub mod viz;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;

pub use self::consistency::{consistency_mask, ConsistencyMask};
pub use self::flo::{decode_flo, encode_flo, read_flo, write_flo};
pub use self::horn_schunck::estimate_flow;
pub use self::pyramid::{build_pyramid, ImagePyramid, MIN_LEVEL_DIM};

/// Tunables of the coarse-to-fine estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub max_levels: usize,
    /// Smoothness weight. Expressed against 8-bit intensity steps; see
    /// [`FlowConfig::smoothness_lambda`].
    pub alpha: f64,
    pub iterations_per_level: usize,
    pub warps_per_level: usize,
    /// Relaxation stops early once the mean per-pixel update falls below this.
    pub convergence_epsilon: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            max_levels: 7,
            alpha: 15.0,
            iterations_per_level: 100,
            warps_per_level: 3,
            convergence_epsilon: 1e-4,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_levels < 1 {
            return Err(Error::InvalidArgument("max_levels must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.iterations_per_level < 1 {
            return Err(Error::InvalidArgument(
                "iterations_per_level must be >= 1".into(),
            ));
        }
        if self.warps_per_level < 1 {
            return Err(Error::InvalidArgument(
                "warps_per_level must be >= 1".into(),
            ));
        }
        if self.convergence_epsilon.is_nan() || self.convergence_epsilon < 0.0 {
            return Err(Error::InvalidArgument(
                "convergence_epsilon must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Weight of the squared flow gradient relative to the squared
    /// brightness-constancy residual, for unit-interval intensities.
    ///
    /// `alpha` is measured in 8-bit intensity steps, so the weight used on
    /// `[0, 1]` data is `(alpha / 255)^2`.
    pub fn smoothness_lambda(&self) -> f64 {
        let a = self.alpha / 255.0;
        a * a
    }
}

/// Per-pixel displacement `(u, v)` in pixels along x and y.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowField {
    width: usize,
    height: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl FlowField {
    pub fn new(width: usize, height: usize, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument(
                "flow field must be non-empty".into(),
            ));
        }
        if u.len() != width * height || v.len() != width * height {
            return Err(Error::InvalidArgument(format!(
                "flow components hold {} and {} values, expected {}",
                u.len(),
                v.len(),
                width * height
            )));
        }
        if u.iter().chain(&v).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "flow contains non-finite values".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            u,
            v,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self::uniform(width, height, 0.0, 0.0)
    }

    pub fn uniform(width: usize, height: usize, u: f64, v: f64) -> Self {
        assert!(width > 0 && height > 0, "empty flow field");
        Self {
            width,
            height,
            u: vec![u; width * height],
            v: vec![v; width * height],
        }
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> (f64, f64),
    ) -> Self {
        let mut u = Vec::with_capacity(width * height);
        let mut v = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let (a, b) = f(x, y);
                u.push(a);
                v.push(b);
            }
        }
        Self {
            width,
            height,
            u,
            v,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// `(height, width)`.
    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (f64, f64) {
        let i = y * self.width + x;
        (self.u[i], self.v[i])
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub(crate) fn components_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.u, &mut self.v)
    }

    pub fn u_image(&self) -> Image {
        Image::new(self.width, self.height, self.u.clone()).expect("non-empty flow")
    }

    pub fn v_image(&self) -> Image {
        Image::new(self.width, self.height, self.v.clone()).expect("non-empty flow")
    }

    /// Bilinear sample of both components, replicate borders.
    pub fn sample(&self, x: f64, y: f64) -> (f64, f64) {
        (
            sample_plane(&self.u, self.width, self.height, x, y),
            sample_plane(&self.v, self.width, self.height, x, y),
        )
    }

    pub fn magnitudes(&self) -> impl Iterator<Item = f64> + '_ {
        self.u.iter().zip(&self.v).map(|(a, b)| a.hypot(*b))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes().fold(0.0, f64::max)
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &FlowField, b: f64) -> Result<FlowField> {
        self.check_same_shape(other)?;
        let u = self
            .u
            .iter()
            .zip(&other.u)
            .map(|(x, y)| a * x + b * y)
            .collect();
        let v = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(FlowField {
            width: self.width,
            height: self.height,
            u,
            v,
        })
    }

    pub fn scaled(&self, s: f64) -> FlowField {
        FlowField {
            width: self.width,
            height: self.height,
            u: self.u.iter().map(|x| x * s).collect(),
            v: self.v.iter().map(|x| x * s).collect(),
        }
    }

    /// Resamples onto the next finer pyramid grid and doubles the vectors.
    ///
    /// Fine pixel `x` sits at coarse position `x / 2`, matching the
    /// even-index subsampling used to build the pyramid.
    pub(crate) fn upsample_to(&self, width: usize, height: usize) -> FlowField {
        FlowField::from_fn(width, height, |x, y| {
            let (u, v) = self.sample(x as f64 * 0.5, y as f64 * 0.5);
            (2.0 * u, 2.0 * v)
        })
    }

    pub(crate) fn check_same_shape(&self, other: &FlowField) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::shape(self.shape(), other.shape()));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn sample_plane(data: &[f64], width: usize, height: usize, x: f64, y: f64) -> f64 {
    let xc = x.clamp(0.0, (width - 1) as f64);
    let yc = y.clamp(0.0, (height - 1) as f64);
    let x0 = xc.floor() as usize;
    let y0 = yc.floor() as usize;
    let x1 = (x0 + 1).min(width - 1);
    let y1 = (y0 + 1).min(height - 1);
    let fx = xc - x0 as f64;
    let fy = yc - y0 as f64;
    let at = |xx: usize, yy: usize| data[yy * width + xx];
    let top = at(x0, y0) + (at(x1, y0) - at(x0, y0)) * fx;
    let bottom = at(x0, y1) + (at(x1, y1) - at(x0, y1)) * fx;
    top + (bottom - top) * fy
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(FlowConfig::default().validate().is_ok());
        let bad = FlowConfig {
            alpha: 0.0,
            ..FlowConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FlowConfig {
            max_levels: 0,
            ..FlowConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(FlowField::new(1, 1, vec![f64::NAN], vec![0.0]).is_err());
        assert!(FlowField::new(2, 1, vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn upsampling_doubles_constant_flow() {
        let f = FlowField::uniform(4, 4, 1.5, -0.5);
        let up = f.upsample_to(7, 8);
        assert_eq!(up.shape(), (8, 7));
        assert!(up.u().iter().all(|&u| u == 3.0));
        assert!(up.v().iter().all(|&v| v == -1.0));
    }
}
