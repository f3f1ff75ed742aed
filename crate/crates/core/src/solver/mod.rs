//! Crank-Nicolson ADI time stepping for the fractional Gray-Scott system
//!
//! ```text
//! u_t = -μ_u (-Δ)^{α/2} u - u v² + F (1 - u)
//! v_t = -μ_v (-Δ)^{α/2} v + u v² - (F + κ) v
//! ```
//!
//! on a rectangle with homogeneous Dirichlet data. Each step solves
//!
//! ```text
//! (I + τK/h_x^α B) Uⁿ⁺¹ (I + τK/h_y^α B) = (I - τK/h_x^α B) Uⁿ (I - τK/h_y^α B) + H
//! ```
//!
//! and the `V` analogue with `G`. The reaction terms use the extrapolant
//! `V* = (3Vⁿ - Vⁿ⁻¹)/2` (or `V⁰` on the first step) and the implicit averages
//! `Uⁿ⁺¹ᐟ², Vⁿ⁺¹ᐟ²`, which are resolved by Picard iteration.

mod diagnostics;
mod field;
mod params;
mod run;
mod workspace;

pub use diagnostics::{norm_diagnostics, EnergyBounds, NormDiagnostics};
pub use field::{norm_sq, FieldPair};
pub use params::{Domain2D, ModelParams, TimeGrid};
pub use run::{diagnostics_table, initial_state, run, Integrator, SnapshotRecord, Trajectory, BOUND_SLACK};
pub use workspace::{
    precompute, AxisOperator, PicardSettings, SolverWorkspace, SpatialScheme, SpeciesOperators, StepOutcome,
};
