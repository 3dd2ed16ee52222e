mod common;

use common::psnr_oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zup_core::metrics::{render, report_schema, SliceScore};
use zup_core::*;

fn random_image(seed: u64, w: usize, h: usize) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image::from_fn(w, h, |_, _| rng.gen::<f64>())
}

fn validate(report: &EvalReport) -> bool {
    let schema = report_schema();
    let validator = jsonschema::draft7::new(&schema).unwrap();
    validator.is_valid(&serde_json::to_value(report).unwrap())
}

#[test]
fn psnr_of_a_ten_level_offset() {
    let a = Image::filled(16, 16, 100.0 / 255.0);
    let b = Image::filled(16, 16, 110.0 / 255.0);
    let expected = 10.0 * (255.0f64 * 255.0 / 100.0).log10();
    let p = psnr(&a, &b, 1.0).unwrap();
    assert!((p - 28.1308).abs() < 1e-3);
    assert!((p - expected).abs() < 1e-9);
    assert_eq!(psnr(&a, &a, 1.0).unwrap(), 99.0);
}

#[test]
fn psnr_agrees_with_definition() {
    let a = random_image(1, 20, 12);
    let b = random_image(2, 20, 12);
    assert!((psnr(&a, &b, 1.0).unwrap() - psnr_oracle(&a, &b)).abs() < 1e-9);
}

#[test]
fn psnr_decreases_with_offset() {
    let a = Image::filled(8, 8, 0.3);
    let mut last = f64::INFINITY;
    for d in [0.01, 0.02, 0.05, 0.1, 0.4] {
        let p = psnr(&a, &a.map(|v| v + d), 1.0).unwrap();
        assert!(p < last);
        last = p;
    }
}

#[test]
fn ssim_of_constant_images_is_the_luminance_term() {
    let (ma, mb) = (100.0 / 255.0, 110.0 / 255.0);
    let c1 = 0.01f64 * 0.01;
    let expected = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
    let s = ssim(
        &Image::filled(16, 16, ma),
        &Image::filled(16, 16, mb),
        &SsimParams::default(),
    )
    .unwrap();
    assert!((s - expected).abs() < 1e-12);
    assert!((s - 0.99548).abs() < 1e-4);
}

#[test]
fn ssim_identity_symmetry_and_range() {
    let p = SsimParams::default();
    for seed in 0..20 {
        let a = random_image(seed, 24, 20);
        let b = random_image(seed + 100, 24, 20);
        assert!((ssim(&a, &a, &p).unwrap() - 1.0).abs() < 1e-9);
        let ab = ssim(&a, &b, &p).unwrap();
        let ba = ssim(&b, &a, &p).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!((-1.0..=1.0).contains(&ab));
        assert!(ab < 1.0);
    }
    assert!(ssim(&Image::filled(10, 10, 0.0), &Image::filled(10, 10, 0.0), &p).is_err());
    assert!(ssim(&Image::filled(12, 12, 0.0), &Image::filled(12, 11, 0.0), &p).is_err());
}

#[test]
fn ssim_drops_below_one_under_perturbation() {
    let p = SsimParams::default();
    let a = random_image(7, 16, 16);
    for eps in [1e-3, 1e-2, 1e-1] {
        let mut b = a.clone();
        let v = a.get(8, 8);
        b.set(8, 8, if v + eps <= 1.0 { v + eps } else { v - eps });
        assert!(ssim(&a, &b, &p).unwrap() < 1.0);
    }
}

fn row(method: &str, z: &[usize]) -> MetricRow {
    let scores = z
        .iter()
        .map(|&z| SliceScore {
            z,
            psnr: 30.0 + z as f64,
            ssim: 0.5 + 0.01 * z as f64,
        })
        .collect();
    MetricRow::from_scores(method, 2, "synthetic", scores).unwrap()
}

#[test]
fn row_invariants() {
    let r = row("flow", &[1, 3, 5]);
    assert!((r.psnr_mean - 33.0).abs() < 1e-9);
    assert!((r.ssim_mean - 0.53).abs() < 1e-9);
    let dup = vec![
        SliceScore {
            z: 3,
            psnr: 1.0,
            ssim: 0.0,
        },
        SliceScore {
            z: 3,
            psnr: 1.0,
            ssim: 0.0,
        },
    ];
    assert!(MetricRow::from_scores("x", 2, "d", dup).is_err());
}

#[test]
fn report_ordering_and_formats() {
    let report = EvalReport::new(
        vec![row("flow", &[1, 3]), row("bicubic", &[1, 3])],
        serde_json::json!({"factor": 2}),
    )
    .unwrap();
    assert_eq!(report.rows[0].method, "bicubic");
    assert!(validate(&report));

    let csv = render(&report, ReportFormat::Csv).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "method,factor,dataset,psnr_mean,ssim_mean");
    assert!(lines[1].starts_with("bicubic,2,synthetic,"));

    let table = render(&report, ReportFormat::Table).unwrap();
    assert!(table.contains("bicubic") && table.contains("flow"));

    let json: serde_json::Value =
        serde_json::from_str(&render(&report, ReportFormat::Json).unwrap()).unwrap();
    for key in ["rows", "config", "version", "timestamp"] {
        assert!(json.get(key).is_some(), "{key}");
    }

    assert!(EvalReport::new(vec![], serde_json::json!({})).is_err());
}

#[test]
fn schema_rejects_malformed_reports() {
    let report = EvalReport::new(vec![row("flow", &[1])], serde_json::json!({})).unwrap();
    let schema = report_schema();
    let validator = jsonschema::draft7::new(&schema).unwrap();
    let mut v = serde_json::to_value(&report).unwrap();
    assert!(validator.is_valid(&v));
    v["rows"] = serde_json::json!([]);
    assert!(!validator.is_valid(&v));
    let mut v = serde_json::to_value(&report).unwrap();
    v.as_object_mut().unwrap().remove("version");
    assert!(!validator.is_valid(&v));
}

#[test]
fn emitted_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = EvalReport::new(vec![row("average", &[1, 2, 3])], serde_json::json!({})).unwrap();
    let path = dir.path().join("r.json");
    emit_report(&report, &path, ReportFormat::Json).unwrap();
    let back: EvalReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, report);
    assert!(emit_report(&report, dir.path().join("missing/r.csv"), ReportFormat::Csv).is_err());
}

#[test]
fn skip_eval_on_an_already_perfect_method() {
    // a z-constant volume is reproduced exactly by every method
    let v = Volume::new(9, 12, 12, vec![0.25; 9 * 144], BitDepth::Eight).unwrap();
    let report = run_skip_eval(&v, 8, &Method::ALL, &EvalOptions::default()).unwrap();
    assert_eq!(report.rows.len(), 5);
    for r in &report.rows {
        assert_eq!(
            r.per_slice.iter().map(|s| s.z).collect::<Vec<_>>(),
            (1..8).collect::<Vec<_>>()
        );
        for s in &r.per_slice {
            assert_eq!(s.psnr, 99.0);
            assert!((s.ssim - 1.0).abs() < 1e-9);
        }
    }
    assert!(validate(&report));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn psnr_ignores_common_offsets(seed in 0u64..500, c in -0.2f64..0.2) {
        let a = random_image(seed, 10, 10).map(|v| 0.25 + 0.5 * v);
        let b = random_image(seed + 1, 10, 10).map(|v| 0.25 + 0.5 * v);
        let p = psnr(&a, &b, 1.0).unwrap();
        let q = psnr(&a.map(|v| v + c), &b.map(|v| v + c), 1.0).unwrap();
        prop_assert!((p - q).abs() < 1e-9);
    }
}
