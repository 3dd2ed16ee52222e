use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zup_core::metrics::ReportFormat;
use zup_core::synthetic::Axis;
use zup_core::{Method, SplitMode};

#[derive(Debug, Parser)]
#[command(
    name = "zup",
    version,
    about = "Optical-flow guided z-upscaling of anisotropic image volumes"
)]
pub struct Cli {
    /// Increase log verbosity on stderr (-v info, -vv debug, -vvv trace)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Worker threads; 0 uses all available cores
    #[arg(long, global = true, env = "ZUP_THREADS", default_value_t = 0)]
    pub threads: usize,

    /// TOML or JSON config file; command-line flags take precedence over it
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Upsample a volume along z by a power of two
    Upscale(UpscaleArgs),
    /// Skip-frame evaluation of reconstruction methods on an isotropic volume
    Eval(EvalArgs),
    /// Crop non-overlapping sub-volumes and enumerate slice triplets
    Prep(PrepArgs),
    /// Estimate optical flow between two images
    Flow(FlowArgs),
    /// Write an analytic test volume
    Synth(SynthArgs),
}

/// Flow estimator overrides shared by the flow-based commands.
#[derive(Debug, Default, Args)]
pub struct FlowOverrides {
    /// Smoothness weight [default: 15]
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Maximum pyramid levels [default: 7]
    #[arg(long)]
    pub levels: Option<usize>,

    /// Relaxation sweeps per warp [default: 100]
    #[arg(long)]
    pub iterations: Option<usize>,

    /// Warps per pyramid level [default: 3]
    #[arg(long)]
    pub warps: Option<usize>,
}

/// Midframe synthesis overrides.
#[derive(Debug, Default, Args)]
pub struct SynthOverrides {
    /// How middle-grid flows are derived from the pair flows [default: symmetric]
    #[arg(long, value_parser = parse_split_mode)]
    pub split_mode: Option<SplitMode>,

    /// Forward-backward disagreement (px) at which a pixel loses all weight [default: 1]
    #[arg(long)]
    pub consistency_tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct UpscaleArgs {
    /// Input volume (.tif/.tiff or .raw with .raw.json sidecar)
    #[arg(long, short)]
    pub input: PathBuf,

    /// Output volume; format follows the extension
    #[arg(long, short)]
    pub output: PathBuf,

    /// Upsampling factor, a power of two (2, 4, 8, ...)
    #[arg(long, short, value_parser = parse_factor)]
    pub factor: usize,

    /// Interpolation method
    #[arg(long, short, default_value = "flow", value_parser = parse_method)]
    pub method: Method,

    #[command(flatten)]
    pub flow: FlowOverrides,

    #[command(flatten)]
    pub synth: SynthOverrides,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Isotropic input volume
    #[arg(long, short)]
    pub input: PathBuf,

    /// Decimation/upsampling factor, a power of two
    #[arg(long, short, value_parser = parse_factor)]
    pub factor: usize,

    /// Comma-separated methods: average, bicubic, flow, linear, nearest
    /// [default: flow,bicubic,average]
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub methods: Option<Vec<Method>>,

    /// Where to write the report; without it only the table is printed
    #[arg(long, short)]
    pub report: Option<PathBuf>,

    /// Report file format [default: from the report extension, else json]
    #[arg(long, value_parser = parse_format)]
    pub format: Option<ReportFormat>,

    /// Dataset label stored in every report row [default: input file stem]
    #[arg(long)]
    pub dataset: Option<String>,

    #[command(flatten)]
    pub flow: FlowOverrides,

    #[command(flatten)]
    pub synth: SynthOverrides,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    #[arg(long, short)]
    pub input: PathBuf,

    /// Sub-volume shape as ZxHxW
    #[arg(long, value_parser = parse_shape)]
    pub sub_shape: [usize; 3],

    /// Maximum number of sub-volumes [default: all that fit]
    #[arg(long)]
    pub max_count: Option<usize>,

    /// Directory receiving sub_NNNN.tif files (created if missing)
    #[arg(long)]
    pub out_dir: PathBuf,

    /// Also write triplets.json listing the slice triplets of every sub-volume
    #[arg(long)]
    pub triplets: bool,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Reference image (.png, or a .tif/.raw volume)
    #[arg(long)]
    pub a: PathBuf,

    /// Target image
    #[arg(long)]
    pub b: PathBuf,

    /// Output .flo file
    #[arg(long, short)]
    pub out: PathBuf,

    /// Optional color-wheel rendering of the flow (.png)
    #[arg(long)]
    pub viz: Option<PathBuf>,

    /// Slice to use when an input is a multi-slice volume
    #[arg(long, default_value_t = 0)]
    pub slice: usize,

    #[command(flatten)]
    pub flow: FlowOverrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SynthKind {
    Sphere,
    DiskTranslate,
    Ramp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BitDepthArg {
    #[value(name = "8")]
    Eight,
    #[value(name = "16")]
    Sixteen,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,

    /// Volume shape as ZxHxW
    #[arg(long, value_parser = parse_shape)]
    pub size: [usize; 3],

    /// Output volume; format follows the extension
    #[arg(long, short)]
    pub out: PathBuf,

    /// Sphere or disk radius in voxels [default: a quarter of the smaller lateral extent]
    #[arg(long)]
    pub radius: Option<f64>,

    /// Sphere center as z,y,x [default: grid center]
    #[arg(long, value_delimiter = ',', num_args = 3)]
    pub center: Option<Vec<f64>>,

    /// Disk displacement from first to last slice as dx,dy
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [8.0, 0.0])]
    pub displacement: Vec<f64>,

    /// Draw the disk in interior slices too (by default only the end slices)
    #[arg(long)]
    pub fill_interior: bool,

    /// Ramp axis
    #[arg(long, default_value = "z", value_parser = parse_axis)]
    pub axis: Axis,

    /// Sample bit depth of the written file
    #[arg(long, value_enum, default_value = "16")]
    pub bit_depth: BitDepthArg,
}

fn parse_factor(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n >= 2 && n.is_power_of_two() {
        Ok(n)
    } else {
        Err(format!(
            "factor must be a power of two (2^n with n >= 1), got {n}"
        ))
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.trim().parse().map_err(|e| format!("{e}"))
}

fn parse_split_mode(s: &str) -> Result<SplitMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_shape(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 3 {
        return Err(format!("expected ZxHxW, got '{s}'"));
    }
    let mut shape = [0; 3];
    for (dst, p) in shape.iter_mut().zip(parts) {
        *dst = p
            .trim()
            .parse()
            .map_err(|_| format!("bad extent '{p}' in '{s}'"))?;
        if *dst == 0 {
            return Err(format!("extents must be positive, got '{s}'"));
        }
    }
    Ok(shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn factor_parser() {
        assert_eq!(parse_factor("8"), Ok(8));
        assert!(parse_factor("3").unwrap_err().contains("power of two"));
        assert!(parse_factor("1").is_err());
        assert!(parse_factor("x").is_err());
    }

    #[test]
    fn shape_parser() {
        assert_eq!(parse_shape("65x96x96"), Ok([65, 96, 96]));
        assert!(parse_shape("4x4").is_err());
        assert!(parse_shape("0x4x4").is_err());
    }
}
