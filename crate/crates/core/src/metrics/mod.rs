//! Image quality metrics and the skip-frame evaluation protocol.

mod eval;
mod psnr;
mod report;
mod ssim;

pub use self::eval::{run_skip_eval, score_reconstruction, EvalOptions, Method};
pub use self::psnr::{mse, psnr, PSNR_ZERO_MSE_DB};
pub use self::report::{
    emit_report, render, render_csv, render_table, report_schema, EvalReport, MetricRow,
    ReportFormat, SliceScore, REPORT_SCHEMA,
};
pub use self::ssim::{ssim, SsimParams};
