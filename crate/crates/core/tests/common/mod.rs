//! Test-only generators and oracles, independent of the library's code paths.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zup_core::{FlowField, Image};

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = (4.0 * sigma).ceil() as isize;
    let k: Vec<f64> = (-r..=r)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|v| v / s).collect()
}

fn blur(data: &[f64], w: usize, h: usize, sigma: f64) -> Vec<f64> {
    let k = gaussian_kernel(sigma);
    let r = (k.len() / 2) as isize;
    let at = |v: &[f64], x: isize, y: isize| {
        let x = x.clamp(0, w as isize - 1) as usize;
        let y = y.clamp(0, h as isize - 1) as usize;
        v[y * w + x]
    };
    let mut tmp = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            tmp[y * w + x] = k
                .iter()
                .enumerate()
                .map(|(i, c)| c * at(data, x as isize + i as isize - r, y as isize))
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = k
                .iter()
                .enumerate()
                .map(|(i, c)| c * at(&tmp, x as isize, y as isize + i as isize - r))
                .sum();
        }
    }
    out
}

/// Gaussian-blurred uniform noise of `size x size`, and the same texture
/// translated by `shift` (content at `p` moves to `p + shift`).
///
/// The field is synthesized on a grid twice as fine with a wide margin, so
/// integer and half-integer shifts are exact resamplings with no fill.
/// Intensities are stretched to [0.1, 0.9].
pub fn shifted_texture_pair(
    size: usize,
    shift: (f64, f64),
    sigma: f64,
    seed: u64,
) -> (Image, Image) {
    let margin = 16usize;
    let n = 2 * (size + 2 * margin);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = (0..n * n).map(|_| rng.gen::<f64>()).collect();
    let field = blur(&noise, n, n, 2.0 * sigma);
    let (lo, hi) = field
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let stretch = |v: f64| 0.1 + 0.8 * (v - lo) / (hi - lo);
    let (sx, sy) = (
        (2.0 * shift.0).round() as isize,
        (2.0 * shift.1).round() as isize,
    );
    assert_eq!(sx as f64, 2.0 * shift.0, "shift must be a multiple of 0.5");
    assert_eq!(sy as f64, 2.0 * shift.1, "shift must be a multiple of 0.5");
    let sample = |x: usize, y: usize, dx: isize, dy: isize| {
        let fx = (2 * (x + margin)) as isize - dx;
        let fy = (2 * (y + margin)) as isize - dy;
        stretch(field[fy as usize * n + fx as usize])
    };
    let reference = Image::from_fn(size, size, |x, y| sample(x, y, 0, 0));
    let target = Image::from_fn(size, size, |x, y| sample(x, y, sx, sy));
    (reference, target)
}

/// Pixel range of the central 75% along an axis of length `n`.
pub fn central(n: usize) -> std::ops::Range<usize> {
    n / 8..n - n / 8
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Median endpoint error against a constant flow over the central region.
pub fn median_epe(flow: &FlowField, truth: (f64, f64)) -> f64 {
    let mut errs = Vec::new();
    for y in central(flow.height()) {
        for x in central(flow.width()) {
            let (u, v) = flow.get(x, y);
            errs.push((u - truth.0).hypot(v - truth.1));
        }
    }
    median(errs)
}

/// Median of each component over the central region.
pub fn median_vector(flow: &FlowField) -> (f64, f64) {
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for y in central(flow.height()) {
        for x in central(flow.width()) {
            let (u, v) = flow.get(x, y);
            us.push(u);
            vs.push(v);
        }
    }
    (median(us), median(vs))
}

pub fn mse(a: &Image, b: &Image) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / a.len() as f64
}

/// PSNR on unit-range data computed directly from the definition.
pub fn psnr_oracle(a: &Image, b: &Image) -> f64 {
    10.0 * (1.0 / mse(a, b)).log10()
}

/// Intensity-weighted centroid `(x, y)`.
pub fn centroid(img: &Image) -> (f64, f64) {
    let (mut sx, mut sy, mut s) = (0.0, 0.0, 0.0);
    for y in 0..img.height() {
        for x in 0..img.width() {
            let v = img.get(x, y);
            sx += v * x as f64;
            sy += v * y as f64;
            s += v;
        }
    }
    (sx / s, sy / s)
}

/// Catmull–Rom segment between p1 and p2 in polynomial (Hermite) form.
/// Equivalent to cubic convolution with a = -0.5, written independently.
pub fn catmull_rom(p0: f64, p1: f64, p2: f64, p3: f64, t: f64) -> f64 {
    0.5 * (2.0 * p1
        + (-p0 + p2) * t
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t
        + (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t)
}

/// Scalar 1D upsampler with end replication and [0, 1] clamping.
pub fn upsample_profile_oracle(profile: &[f64], factor: usize) -> Vec<f64> {
    let n = profile.len() as isize;
    let at = |k: isize| profile[k.clamp(0, n - 1) as usize];
    let mut out = Vec::new();
    for i in 0..n - 1 {
        out.push(profile[i as usize]);
        for r in 1..factor {
            let t = r as f64 / factor as f64;
            let v = catmull_rom(at(i - 1), at(i), at(i + 1), at(i + 2), t);
            out.push(v.clamp(0.0, 1.0));
        }
    }
    out.push(profile[(n - 1) as usize]);
    out
}
