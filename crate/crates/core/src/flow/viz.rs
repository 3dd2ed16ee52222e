//! Middlebury color-wheel rendering of flow fields.
//!
//! Hue encodes direction, saturation encodes magnitude normalized by the
//! 99th-percentile magnitude. The normalizer never drops below
//! [`MIN_NORMALIZER_PX`], so near-zero flow renders as near-white instead of
//! amplified noise.

use super::FlowField;

pub const MIN_NORMALIZER_PX: f64 = 1.0;

const RY: usize = 15;
const YG: usize = 6;
const GC: usize = 4;
const CB: usize = 11;
const BM: usize = 13;
const MR: usize = 6;

fn color_wheel() -> Vec<[f64; 3]> {
    let ramp = |i: usize, n: usize| (255 * i / n) as f64;
    let mut wheel = Vec::with_capacity(RY + YG + GC + CB + BM + MR);
    wheel.extend((0..RY).map(|i| [255.0, ramp(i, RY), 0.0]));
    wheel.extend((0..YG).map(|i| [255.0 - ramp(i, YG), 255.0, 0.0]));
    wheel.extend((0..GC).map(|i| [0.0, 255.0, ramp(i, GC)]));
    wheel.extend((0..CB).map(|i| [0.0, 255.0 - ramp(i, CB), 255.0]));
    wheel.extend((0..BM).map(|i| [ramp(i, BM), 0.0, 255.0]));
    wheel.extend((0..MR).map(|i| [255.0, 0.0, 255.0 - ramp(i, MR)]));
    wheel
}

fn percentile_99(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let idx = ((values.len() - 1) as f64 * 0.99).round() as usize;
    values[idx]
}

/// Magnitude that maps to full saturation.
pub fn normalizer(flow: &FlowField) -> f64 {
    let mut mags: Vec<f64> = flow.magnitudes().collect();
    percentile_99(&mut mags).max(MIN_NORMALIZER_PX)
}

/// Renders one normalized vector; `(0, 0)` is white.
pub fn flow_color(u: f64, v: f64, wheel: &[[f64; 3]]) -> [u8; 3] {
    let ncols = wheel.len();
    let rad = u.hypot(v);
    let angle = (-v).atan2(-u) / std::f64::consts::PI;
    let fk = (angle + 1.0) / 2.0 * (ncols - 1) as f64;
    let k0 = (fk.floor() as usize).min(ncols - 1);
    let k1 = (k0 + 1) % ncols;
    let f = fk - k0 as f64;
    let mut out = [0u8; 3];
    for (c, o) in out.iter_mut().enumerate() {
        let col = ((1.0 - f) * wheel[k0][c] + f * wheel[k1][c]) / 255.0;
        let col = if rad <= 1.0 {
            1.0 - rad * (1.0 - col)
        } else {
            col * 0.75
        };
        *o = (255.0 * col).floor().clamp(0.0, 255.0) as u8;
    }
    out
}

/// Row-major RGB8 buffer of `width * height * 3` bytes.
pub fn flow_to_rgb(flow: &FlowField) -> Vec<u8> {
    let wheel = color_wheel();
    let norm = normalizer(flow);
    flow.u()
        .iter()
        .zip(flow.v())
        .flat_map(|(u, v)| flow_color(u / norm, v / norm, &wheel))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_has_55_entries() {
        assert_eq!(color_wheel().len(), 55);
    }

    #[test]
    fn zero_flow_is_white() {
        let rgb = flow_to_rgb(&FlowField::zeros(3, 3));
        assert!(rgb.iter().all(|&c| c == 255));
    }

    #[test]
    fn tiny_flow_stays_near_white() {
        let rgb = flow_to_rgb(&FlowField::uniform(4, 4, 1e-3, -2e-3));
        assert!(rgb.iter().all(|&c| c >= 253));
    }

    #[test]
    fn rightward_flow_is_reddish() {
        let wheel = color_wheel();
        // +x maps to the start of the wheel: red with a touch of magenta
        let [r, g, b] = flow_color(1.0, 0.0, &wheel);
        assert_eq!(r, 255);
        assert!(g < 10 && b < 60, "{r} {g} {b}");
    }
}
