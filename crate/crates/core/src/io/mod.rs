//! Configuration, snapshot files and CSV tables.

pub mod config;
pub mod csv;
pub mod presets;
pub mod snapshot;

pub use config::{load_config, parse_config, InitialCondition, SimulationConfig, SolverKind};
pub use presets::{load_preset, preset_names};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot};
