use super::pyramid::build_pyramid;
use super::{FlowConfig, FlowField};
use crate::error::Result;
use crate::image::Image;
use crate::synth::warp::warp_unchecked;

/// Estimates the flow carrying `reference` onto `target`.
///
/// Coarse to fine over a binomial pyramid. At each level the incoming flow is
/// bilinearly upsampled and doubled, then refined `warps_per_level` times:
/// the target is backward-warped by the current flow, brightness-constancy is
/// linearized around it, and the Horn–Schunck equations for the total flow
/// are relaxed with red-black point updates, and a 5x5 median filter is
/// applied to the result of every warp. Textureless regions receive
/// whatever the smoothness term propagates into them, zero if nothing does.
pub fn estimate_flow(reference: &Image, target: &Image, config: &FlowConfig) -> Result<FlowField> {
    reference.check_same_shape(target)?;
    config.validate()?;
    let ref_pyr = build_pyramid(reference, config.max_levels)?;
    let tgt_pyr = build_pyramid(target, config.max_levels)?;
    let lambda = config.smoothness_lambda();

    let mut flow: Option<FlowField> = None;
    for (r, t) in ref_pyr.levels.iter().zip(&tgt_pyr.levels).rev() {
        let mut f = match flow {
            None => FlowField::zeros(r.width(), r.height()),
            Some(coarse) => coarse.upsample_to(r.width(), r.height()),
        };
        for _ in 0..config.warps_per_level {
            refine(r, t, &mut f, lambda, config);
            median_filter(&mut f);
        }
        flow = Some(f);
    }
    Ok(flow.expect("pyramid has at least one level"))
}

/// 5x5 median of each flow component, clamped at the borders. Knocks out the
/// outliers that re-linearization produces on sharp, sparse edges.
fn median_filter(flow: &mut FlowField) {
    const R: isize = 2;
    let (w, h) = (flow.width(), flow.height());
    let filter = |src: &[f64]| -> Vec<f64> {
        let mut win = Vec::with_capacity(25);
        let mut out = vec![0.0; w * h];
        for y in 0..h as isize {
            for x in 0..w as isize {
                win.clear();
                for dy in -R..=R {
                    let yy = (y + dy).clamp(0, h as isize - 1) as usize;
                    for dx in -R..=R {
                        let xx = (x + dx).clamp(0, w as isize - 1) as usize;
                        win.push(src[yy * w + xx]);
                    }
                }
                let mid = win.len() / 2;
                out[y as usize * w + x as usize] =
                    *win.select_nth_unstable_by(mid, f64::total_cmp).1;
            }
        }
        out
    };
    let (nu, nv) = (filter(flow.u()), filter(flow.v()));
    let (u, v) = flow.components_mut();
    u.copy_from_slice(&nu);
    v.copy_from_slice(&nv);
}

/// Central differences with replicate borders.
fn gradients(img: &Image) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (img.width(), img.height());
    let d = img.as_slice();
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    for y in 0..h {
        let ym = y.saturating_sub(1);
        let yp = (y + 1).min(h - 1);
        for x in 0..w {
            let xm = x.saturating_sub(1);
            let xp = (x + 1).min(w - 1);
            gx[y * w + x] = 0.5 * (d[y * w + xp] - d[y * w + xm]);
            gy[y * w + x] = 0.5 * (d[yp * w + x] - d[ym * w + x]);
        }
    }
    (gx, gy)
}

fn refine(reference: &Image, target: &Image, flow: &mut FlowField, lambda: f64, cfg: &FlowConfig) {
    let (w, h) = (reference.width(), reference.height());
    let n = w * h;
    let warped = warp_unchecked(target, flow);
    let (rx, ry) = gradients(reference);
    let (wx, wy) = gradients(&warped);

    let ix: Vec<f64> = rx.iter().zip(&wx).map(|(a, b)| 0.5 * (a + b)).collect();
    let iy: Vec<f64> = ry.iter().zip(&wy).map(|(a, b)| 0.5 * (a + b)).collect();
    let it: Vec<f64> = warped
        .as_slice()
        .iter()
        .zip(reference.as_slice())
        .map(|(a, b)| a - b)
        .collect();
    let inv_denom: Vec<f64> = ix
        .iter()
        .zip(&iy)
        .map(|(gx, gy)| 1.0 / (lambda + gx * gx + gy * gy))
        .collect();

    let u0 = flow.u().to_vec();
    let v0 = flow.v().to_vec();
    let (u, v) = flow.components_mut();

    for _ in 0..cfg.iterations_per_level {
        let mut total = 0.0;
        for color in 0..2 {
            for y in 0..h {
                let row = y * w;
                let up = y.saturating_sub(1) * w;
                let down = (y + 1).min(h - 1) * w;
                for x in ((y + color) % 2..w).step_by(2) {
                    let left = x.saturating_sub(1);
                    let right = (x + 1).min(w - 1);
                    let i = row + x;
                    let ubar = 0.25 * (u[row + left] + u[row + right] + u[up + x] + u[down + x]);
                    let vbar = 0.25 * (v[row + left] + v[row + right] + v[up + x] + v[down + x]);
                    let residual = ix[i] * (ubar - u0[i]) + iy[i] * (vbar - v0[i]) + it[i];
                    let scale = residual * inv_denom[i];
                    let nu = ubar - ix[i] * scale;
                    let nv = vbar - iy[i] * scale;
                    total += (nu - u[i]).hypot(nv - v[i]);
                    u[i] = nu;
                    v[i] = nv;
                }
            }
        }
        if total / (n as f64) < cfg.convergence_epsilon {
            break;
        }
    }
}
