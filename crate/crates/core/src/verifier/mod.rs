//! Verification machinery: the manufactured diffusion problem, self-referenced
//! refinement studies, and an independent fractional centered-difference
//! discretization used to cross-check the Grünwald-based solver.

mod centered;
mod convergence;
mod manufactured;

pub use centered::{centered_coeffs, centered_generator};
pub use convergence::{
    coincident_error, convergence_study, relative_l2, sine_solution, DiffusionSolver, Problem, RateRow, RateTable,
    Refinement, SeparableSource, SourceSampling, StudyConfig, StudyKind,
};
pub use manufactured::{exact_ex1, source_ex1, ManufacturedCase};

use crate::error::Result;
use crate::io::config::{SimulationConfig, SolverKind};
use crate::solver::{run, Trajectory};

/// Run `config` with the fractional centered-difference discretization,
/// regardless of its configured solver.
pub fn cross_run(config: &SimulationConfig) -> Result<Trajectory> {
    let mut cfg = config.clone();
    cfg.solver = SolverKind::Cross;
    run(&cfg)
}
