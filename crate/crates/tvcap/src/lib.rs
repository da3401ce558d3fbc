//! Scenario files, CSV output and the `tvcap` command for the
//! [`tvcap_core`] simulators.

pub mod app;
pub mod config;
pub mod csv_out;
pub mod waveform;

pub use app::AppError;
pub use config::{ConfigError, ModelKind, ScenarioConfig};
