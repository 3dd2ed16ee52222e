use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{Context, Result};
use log::{debug, info};
use serde_json::json;
use zup_core::flow::viz::flow_to_rgb;
use zup_core::metrics::{render_table, ReportFormat};
use zup_core::synthetic::{disk_translate, grid_center, ramp, sphere};
use zup_core::*;

use crate::args::*;
use crate::config::FileConfig;
use crate::image_io::{read_slice, write_rgb_png};

const DEFAULT_EVAL_METHODS: [Method; 3] = [Method::Flow, Method::Bicubic, Method::Average];

pub fn upscale(args: &UpscaleArgs, file: &FileConfig) -> Result<()> {
    let synthesis = file.synthesis(&args.flow, &args.synth)?;
    let volume = read_volume(&args.input, None)?;
    info!(
        "read {} ({}x{}x{}, {}-bit)",
        args.input.display(),
        volume.depth(),
        volume.height(),
        volume.width(),
        volume.source_bit_depth().bits()
    );
    if args.method == Method::Flow {
        debug!("synthesis config: {}", serde_json::to_string(&synthesis)?);
    }

    let t0 = Instant::now();
    let out = if args.method == Method::Flow {
        let (tx, rx) = mpsc::channel();
        let listener = std::thread::spawn(move || {
            for event in rx {
                match event {
                    ProgressEvent::RoundStarted {
                        round,
                        rounds,
                        pairs,
                    } => {
                        info!("round {}/{rounds}: {pairs} pair(s)", round + 1)
                    }
                    ProgressEvent::PairDone { round, pair } => {
                        debug!("round {}: pair {pair} done", round + 1)
                    }
                    ProgressEvent::RoundFinished { round, depth } => {
                        info!("round {} finished: {depth} slices", round + 1)
                    }
                }
            }
        });
        let result = upscale_volume(&volume, args.factor, &synthesis, &tx);
        drop(tx);
        let _ = listener.join();
        result?
    } else {
        args.method.reconstruct(&volume, args.factor, &synthesis)?
    };
    let elapsed = t0.elapsed();

    write_volume(&out, &args.output, None)?;
    println!(
        "{} → {} slices (x{}, {}) in {:.2} s",
        volume.depth(),
        out.depth(),
        args.factor,
        args.method,
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn format_for(path: &Path) -> ReportFormat {
    match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
        Some(e) if e.eq_ignore_ascii_case("txt") => ReportFormat::Table,
        _ => ReportFormat::Json,
    }
}

pub fn eval(args: &EvalArgs, file: &FileConfig) -> Result<()> {
    let synthesis = file.synthesis(&args.flow, &args.synth)?;
    let methods = args
        .methods
        .clone()
        .or_else(|| file.eval.methods.clone())
        .unwrap_or_else(|| DEFAULT_EVAL_METHODS.to_vec());
    let dataset = args
        .dataset
        .clone()
        .or_else(|| file.eval.dataset.clone())
        .unwrap_or_else(|| {
            args.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "volume".into())
        });

    let volume = read_volume(&args.input, None)?;
    let options = EvalOptions {
        synthesis,
        dataset,
        ..EvalOptions::default()
    };
    let t0 = Instant::now();
    let mut report = run_skip_eval(&volume, args.factor, &methods, &options)?;
    info!("evaluation took {:.2} s", t0.elapsed().as_secs_f64());
    report.config["input"] = json!(args.input.display().to_string());

    print!("{}", render_table(&report));
    if let Some(path) = &args.report {
        let format = args
            .format
            .or(file.eval.format)
            .unwrap_or_else(|| format_for(path));
        emit_report(&report, path, format)?;
        info!("report written to {}", path.display());
    }
    Ok(())
}

pub fn prep(args: &PrepArgs) -> Result<()> {
    let volume = read_volume(&args.input, None)?;
    let tiles = crop_subvolumes(
        &volume,
        args.sub_shape,
        args.max_count.unwrap_or(usize::MAX),
    )?;
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;

    let mut manifest = Vec::new();
    let mut total = 0;
    for (i, tile) in tiles.iter().enumerate() {
        let name = format!("sub_{i:04}.tif");
        write_volume(tile, args.out_dir.join(&name), None)?;
        if args.triplets {
            let triplets = triplet_indices(tile.depth())?;
            total += triplets.len();
            manifest.push(json!({ "file": name, "triplets": triplets }));
        }
    }
    if args.triplets {
        let doc = json!({
            "sub_shape": args.sub_shape,
            "triplet_count": total,
            "subvolumes": manifest,
        });
        let path = args.out_dir.join("triplets.json");
        std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!(
            "wrote {} sub-volume(s) and {total} triplet(s) to {}",
            tiles.len(),
            args.out_dir.display()
        );
    } else {
        println!(
            "wrote {} sub-volume(s) to {}",
            tiles.len(),
            args.out_dir.display()
        );
    }
    Ok(())
}

pub fn flow(args: &FlowArgs, file: &FileConfig) -> Result<()> {
    let config = file.synthesis(&args.flow, &Default::default())?.flow;
    let a = read_slice(&args.a, args.slice)?;
    let b = read_slice(&args.b, args.slice)?;
    let t0 = Instant::now();
    let field = estimate_flow(&a, &b, &config)?;
    let n = field.u().len() as f64;
    let mean_u = field.u().iter().sum::<f64>() / n;
    let mean_v = field.v().iter().sum::<f64>() / n;
    write_flo(&field, &args.out)?;
    if let Some(viz) = &args.viz {
        write_rgb_png(viz, field.width(), field.height(), flow_to_rgb(&field))?;
    }
    println!(
        "{}x{} flow, mean ({mean_u:.3}, {mean_v:.3}) px, max |F| {:.3} px in {:.2} s",
        field.width(),
        field.height(),
        field.max_magnitude(),
        t0.elapsed().as_secs_f64()
    );
    Ok(())
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let shape = args.size;
    let [_, h, w] = shape;
    let radius = args.radius.unwrap_or(0.25 * h.min(w) as f64);
    let volume = match args.kind {
        SynthKind::Sphere => {
            let center = match &args.center {
                Some(c) => [c[0], c[1], c[2]],
                None => grid_center(shape),
            };
            sphere(shape, center, radius)?
        }
        SynthKind::DiskTranslate => {
            let [_, cy, cx] = grid_center(shape);
            disk_translate(
                shape,
                (cx, cy),
                radius,
                (args.displacement[0], args.displacement[1]),
                args.fill_interior,
            )?
        }
        SynthKind::Ramp => ramp(shape, args.axis)?,
    };
    let bits = match args.bit_depth {
        BitDepthArg::Eight => BitDepth::Eight,
        BitDepthArg::Sixteen => BitDepth::Sixteen,
    };
    let volume = Volume::new(
        volume.depth(),
        volume.height(),
        volume.width(),
        volume.data().to_vec(),
        bits,
    )?;
    write_volume(&volume, &args.out, None)?;
    println!(
        "wrote {:?} volume {}x{}x{} to {}",
        args.kind,
        shape[0],
        shape[1],
        shape[2],
        args.out.display()
    );
    Ok(())
}
