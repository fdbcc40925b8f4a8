//! Monte Carlo harness for IRS-assisted mmWave MIMO links: scenario
//! configuration, per-trial simulation, figure sweeps and result files.

pub mod config;
mod error;
pub mod figures;
pub mod geometry;
pub mod montecarlo;
pub mod report;

pub use config::{load_config, PhasePolicy, PowerPolicy, ScenarioConfig};
pub use error::{Result, SimError};
pub use figures::{figure_command, FigureData, FigureName};
pub use geometry::derive_geometry;
pub use montecarlo::{run_monte_carlo, run_monte_carlo_with_threads, TrialOutcome};
pub use report::{emit_report, RateReport};
