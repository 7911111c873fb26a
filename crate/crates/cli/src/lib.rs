//! Library side of the `kicktop` command: configuration, dataset writers,
//! plot scripts and the experiment runner.

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;

pub use config::{Experiment, RunConfig, Settings};
pub use error::RunError;
pub use output::RunManifest;
pub use plot::emit_plot_script;
pub use run::{compute, compute_with_workers, run, Dataset};
