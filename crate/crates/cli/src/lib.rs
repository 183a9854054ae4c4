//! Sweep driver for the two-level Otto engine: key-value configs, built-in
//! presets, a parallel grid runner and CSV output.

pub mod config;
pub mod format;
pub mod presets;
pub mod sweep;

pub use config::{
    parse_config, parse_config_with_preset, ConfigError, DriveKind, SweepMode, SweepSpec,
};
pub use sweep::{run_sweep, write_csv, Metrics, Outcome, SweepError, SweepRow, CSV_HEADER};
