//! Experiment configuration, sweeps and result analysis.

pub mod compare;
pub mod config;
pub mod fit;
pub mod plot;
pub mod stats;
pub mod sweep;

pub use compare::{compare_variants, Comparison, Winner};
pub use config::{ExperimentConfig, InitLeak};
pub use fit::{fit_exponent, FitResult};
pub use plot::emit_plot_data;
pub use stats::wilson95;
pub use sweep::{read_rows, run_sweep, write_rows, PointResult, ResultRow};
