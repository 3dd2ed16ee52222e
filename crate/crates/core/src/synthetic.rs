//! Analytic test volumes.
//!
//! Shapes are drawn with a one-pixel linear coverage ramp: a point at
//! distance `d` from the center of a shape of radius `r` gets intensity
//! `clamp(r + 0.5 - d, 0, 1)`, so the half-maximum contour sits exactly at
//! radius `r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;
use crate::volume::{BitDepth, Volume};

#[inline]
fn coverage(radius: f64, dist: f64) -> f64 {
    (radius + 0.5 - dist).clamp(0.0, 1.0)
}

/// Anti-aliased disk of `radius` centered at `(cx, cy)` on a black field.
pub fn disk(width: usize, height: usize, cx: f64, cy: f64, radius: f64) -> Image {
    Image::from_fn(width, height, |x, y| {
        coverage(radius, (x as f64 - cx).hypot(y as f64 - cy))
    })
}

/// Anti-aliased ball. `center` is `(z, y, x)`.
pub fn sphere(shape: [usize; 3], center: [f64; 3], radius: f64) -> Result<Volume> {
    check_shape(shape)?;
    let [d, h, w] = shape;
    let mut data = Vec::with_capacity(d * h * w);
    for z in 0..d {
        for y in 0..h {
            for x in 0..w {
                let dz = z as f64 - center[0];
                let dy = y as f64 - center[1];
                let dx = x as f64 - center[2];
                data.push(coverage(radius, (dz * dz + dy * dy + dx * dx).sqrt()));
            }
        }
    }
    Volume::new(d, h, w, data, BitDepth::Sixteen)
}

/// Geometric center of a grid, `(z, y, x)`.
pub fn grid_center(shape: [usize; 3]) -> [f64; 3] {
    shape.map(|n| (n as f64 - 1.0) / 2.0)
}

/// A disk moving linearly by `displacement = (dx, dy)` from the first slice
/// to the last. The motion is centered on `center = (x, y)`. Only the end
/// slices are drawn unless `fill_interior` is set; interior slices are left
/// black for synthesis experiments.
pub fn disk_translate(
    shape: [usize; 3],
    center: (f64, f64),
    radius: f64,
    displacement: (f64, f64),
    fill_interior: bool,
) -> Result<Volume> {
    check_shape(shape)?;
    let [d, h, w] = shape;
    if d < 2 {
        return Err(Error::InvalidArgument(
            "disk-translate needs at least 2 slices".into(),
        ));
    }
    let start = (
        center.0 - displacement.0 / 2.0,
        center.1 - displacement.1 / 2.0,
    );
    let slices: Vec<Image> = (0..d)
        .map(|k| {
            let t = k as f64 / (d - 1) as f64;
            if k == 0 || k == d - 1 || fill_interior {
                disk(
                    w,
                    h,
                    start.0 + t * displacement.0,
                    start.1 + t * displacement.1,
                    radius,
                )
            } else {
                Image::filled(w, h, 0.0)
            }
        })
        .collect();
    Volume::from_slices(&slices, BitDepth::Sixteen)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    Y,
    X,
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(Axis::Z),
            "y" => Ok(Axis::Y),
            "x" => Ok(Axis::X),
            other => Err(Error::InvalidArgument(format!("unknown axis '{other}'"))),
        }
    }
}

/// Linear ramp from 0 to 1 along `axis`.
pub fn ramp(shape: [usize; 3], axis: Axis) -> Result<Volume> {
    check_shape(shape)?;
    let [d, h, w] = shape;
    let along = |n: usize, i: usize| {
        if n > 1 {
            i as f64 / (n - 1) as f64
        } else {
            0.0
        }
    };
    let mut data = Vec::with_capacity(d * h * w);
    for z in 0..d {
        for y in 0..h {
            for x in 0..w {
                data.push(match axis {
                    Axis::Z => along(d, z),
                    Axis::Y => along(h, y),
                    Axis::X => along(w, x),
                });
            }
        }
    }
    Volume::new(d, h, w, data, BitDepth::Sixteen)
}

fn check_shape(shape: [usize; 3]) -> Result<()> {
    if shape.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "volume shape {shape:?} has a zero extent"
        )));
    }
    Ok(())
}
