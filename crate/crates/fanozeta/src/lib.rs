//! Command-line driver around `fanozeta-core`: JSON job files and presets,
//! multi-threaded counting, checkpoints and machine-readable reports.

pub mod driver;
pub mod error;
pub mod job;
pub mod pipeline;
pub mod report;

pub use error::AppError;
pub use job::{preset, JobSpec, Term};
pub use pipeline::{locate_line, resume, run, Checkpoint, RunOptions};
pub use report::ZetaReport;
