use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::Image;

/// Gaussian-windowed SSIM parameters; the defaults are the usual
/// 11x11 window with sigma 1.5, K1 = 0.01 and K2 = 0.03.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub data_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            data_range: 1.0,
        }
    }
}

fn gaussian_window(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let w: Vec<f64> = (0..size)
        .map(|i| {
            let d = i as f64 - c;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Separable "valid" filtering: only positions where the window fits.
fn filter_valid(data: &[f64], width: usize, height: usize, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let (ow, oh) = (width + 1 - n, height + 1 - n);
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        let src = &data[y * width..(y + 1) * width];
        for x in 0..ow {
            rows[y * ow + x] = k.iter().zip(&src[x..x + n]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = k
                .iter()
                .enumerate()
                .map(|(i, c)| c * rows[(y + i) * ow + x])
                .sum();
        }
    }
    out
}

/// Mean SSIM over all window positions that lie fully inside the image.
pub fn ssim(reference: &Image, test: &Image, params: &SsimParams) -> Result<f64> {
    reference.check_same_shape(test)?;
    let (w, h) = (reference.width(), reference.height());
    if params.window == 0 || w < params.window || h < params.window {
        return Err(Error::InvalidArgument(format!(
            "image {h}x{w} is smaller than the {0}x{0} SSIM window",
            params.window
        )));
    }
    if !(params.data_range > 0.0 && params.sigma > 0.0) {
        return Err(Error::InvalidArgument(
            "SSIM data range and sigma must be positive".into(),
        ));
    }
    let k = gaussian_window(params.window, params.sigma);
    let a = reference.as_slice();
    let b = test.as_slice();
    let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
    let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();

    let mu_a = filter_valid(a, w, h, &k);
    let mu_b = filter_valid(b, w, h, &k);
    let e_aa = filter_valid(&aa, w, h, &k);
    let e_bb = filter_valid(&bb, w, h, &k);
    let e_ab = filter_valid(&ab, w, h, &k);

    let c1 = (params.k1 * params.data_range).powi(2);
    let c2 = (params.k2 * params.data_range).powi(2);
    let total: f64 = (0..mu_a.len())
        .map(|i| {
            let (ma, mb) = (mu_a[i], mu_b[i]);
            let var_a = e_aa[i] - ma * ma;
            let var_b = e_bb[i] - mb * mb;
            let cov = e_ab[i] - ma * mb;
            ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
                / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2))
        })
        .sum();
    Ok(total / mu_a.len() as f64)
}
