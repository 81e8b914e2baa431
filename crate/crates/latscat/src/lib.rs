//! Configuration files, parameter sweeps, threaded execution and CSV/JSON
//! output around `latscat_core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod exec;
pub mod output;
pub mod scenario;
pub mod sweep;

pub use commands::{dispersion, oracle, scatter, wavefield, Artifact, Check, OracleReport};
pub use config::{Config, Scenario};
pub use error::{CliError, Result};
pub use exec::Pool;
pub use sweep::SweepSpec;
