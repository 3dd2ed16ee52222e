mod common;

use common::upsample_profile_oracle;
use proptest::prelude::*;
use zup_core::*;

fn column(values: &[f64]) -> Volume {
    Volume::new(values.len(), 1, 1, values.to_vec(), BitDepth::Sixteen).unwrap()
}

#[test]
fn sinusoid_matches_scalar_oracle() {
    let profile: Vec<f64> = (0..9)
        .map(|k| 0.5 + 0.4 * (2.0 * std::f64::consts::PI * k as f64 / 8.0).sin())
        .collect();
    let out = interp_z(&column(&profile), 2, KernelSpec::cubic()).unwrap();
    let expected = upsample_profile_oracle(&profile, 2);
    assert_eq!(out.depth(), expected.len());
    for (a, b) in out.data().iter().zip(&expected) {
        assert!((a - b).abs() <= 1e-9);
    }
}

#[test]
fn every_lateral_pixel_is_resampled_independently() {
    let (d, h, w) = (6, 3, 4);
    let data: Vec<f64> = (0..d * h * w)
        .map(|i| ((i * 53) % 97) as f64 / 96.0)
        .collect();
    let v = Volume::new(d, h, w, data, BitDepth::Sixteen).unwrap();
    let out = interp_z(&v, 4, KernelSpec::cubic()).unwrap();
    for y in 0..h {
        for x in 0..w {
            let profile: Vec<f64> = (0..d).map(|z| v.get(z, y, x)).collect();
            let expected = upsample_profile_oracle(&profile, 4);
            for (z, e) in expected.iter().enumerate() {
                assert!((out.get(z, y, x) - e).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn voxel_size_follows_factor() {
    let v = column(&[0.0, 0.5, 1.0]).with_voxel_size(Some([32.0, 4.0, 4.0]));
    let out = interp_z(&v, 8, KernelSpec::of(KernelKind::Linear)).unwrap();
    assert_eq!(out.voxel_size(), Some([4.0, 4.0, 4.0]));
}

proptest! {
    #[test]
    fn random_profiles_match_oracle(
        profile in proptest::collection::vec(0.0f64..=1.0, 4..20),
        n in 1u32..=3,
    ) {
        let factor = 1usize << n;
        let out = interp_z(&column(&profile), factor, KernelSpec::cubic()).unwrap();
        let expected = upsample_profile_oracle(&profile, factor);
        prop_assert_eq!(out.depth(), expected.len());
        for (a, b) in out.data().iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn all_kernels_pass_kept_slices_through(
        profile in proptest::collection::vec(0.0f64..=1.0, 2..16),
        n in 1u32..=3,
        kind in prop_oneof![
            Just(KernelKind::CubicConvolution),
            Just(KernelKind::Linear),
            Just(KernelKind::Nearest),
            Just(KernelKind::Average),
        ],
    ) {
        let factor = 1usize << n;
        let out = interp_z(&column(&profile), factor, KernelSpec::of(kind)).unwrap();
        prop_assert_eq!(out.depth(), (profile.len() - 1) * factor + 1);
        for (k, &p) in profile.iter().enumerate() {
            prop_assert_eq!(out.data()[k * factor], p);
        }
    }

    #[test]
    fn linear_ramps_are_reproduced(len in 6usize..20, lo in 0.0f64..0.5, span in 0.0f64..0.5) {
        let profile: Vec<f64> = (0..len).map(|k| lo + span * k as f64 / (len - 1) as f64).collect();
        let out = interp_z(&column(&profile), 4, KernelSpec::cubic()).unwrap();
        // skip the first and last intervals, which see replicated ends
        for j in 4..4 * (len - 2) {
            let expected = lo + span * (j as f64 / 4.0) / (len - 1) as f64;
            prop_assert!((out.data()[j] - expected).abs() <= 1e-12);
        }
    }
}
