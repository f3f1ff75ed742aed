use super::{EnergyBounds, FieldPair, NormDiagnostics, SolverWorkspace};
use crate::error::{Error, Result};
use crate::io::config::{ensure_writable, InitialCondition, SimulationConfig};
use crate::io::csv::Table;
use crate::io::snapshot::{read_snapshot, write_snapshot, Snapshot};
use std::path::PathBuf;

/// Roundoff allowance when comparing norms against the energy bounds.
pub const BOUND_SLACK: f64 = 1e-9;

/// Steps the scheme forward while holding `Vⁿ⁻¹` for the extrapolation.
#[derive(Debug, Clone)]
pub struct Integrator {
    ws: SolverWorkspace,
    prev: Option<FieldPair>,
    curr: FieldPair,
    step: usize,
    picard_iterations: usize,
}

impl Integrator {
    pub fn new(ws: SolverWorkspace, state0: FieldPair) -> Self {
        Self {
            ws,
            prev: None,
            curr: state0,
            step: 0,
            picard_iterations: 0,
        }
    }

    pub fn workspace(&self) -> &SolverWorkspace {
        &self.ws
    }
    pub fn state(&self) -> &FieldPair {
        &self.curr
    }
    pub fn step_index(&self) -> usize {
        self.step
    }
    pub fn time(&self) -> f64 {
        self.step as f64 * self.ws.tau()
    }
    /// Total fixed-point sweeps performed so far (both species).
    pub fn picard_iterations(&self) -> usize {
        self.picard_iterations
    }

    pub fn advance(&mut self) -> Result<&FieldPair> {
        let out = match &self.prev {
            None => self.ws.step_first(&self.curr)?,
            Some(prev) => self.ws.step(prev, &self.curr, self.step)?,
        };
        self.picard_iterations += out.u_iterations + out.v_iterations;
        let old = std::mem::replace(&mut self.curr, out.state);
        self.prev = Some(old);
        self.step += 1;
        Ok(&self.curr)
    }
}

/// One stored snapshot of a run.
#[derive(Debug, Clone)]
pub struct SnapshotRecord {
    pub step: usize,
    pub t: f64,
    pub state: FieldPair,
    pub path: Option<PathBuf>,
}

/// Outcome of [`run`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<SnapshotRecord>,
    pub diagnostics: Vec<NormDiagnostics>,
    pub final_state: FieldPair,
    pub picard_iterations: usize,
    pub bound_violations: usize,
}

impl Trajectory {
    pub fn diagnostics_table(&self) -> Table {
        diagnostics_table(&self.diagnostics)
    }
}

pub fn diagnostics_table(records: &[NormDiagnostics]) -> Table {
    let mut t = Table::new(["step", "t", "norm_u_sq", "norm_w_sq", "bound_u", "bound_w"]);
    for d in records {
        t.push([
            d.step.to_string(),
            d.t.to_string(),
            d.norm_u_sq.to_string(),
            d.norm_w_sq.to_string(),
            d.bound_u.to_string(),
            d.bound_w.to_string(),
        ]);
    }
    t
}

/// Materialize the configured initial condition.
pub fn initial_state(config: &SimulationConfig) -> Result<FieldPair> {
    let domain = &config.domain;
    match &config.initial {
        InitialCondition::Uniform { u, v } => Ok(FieldPair::uniform(domain, *u, *v)),
        InitialCondition::Disk {
            center,
            radius,
            inside,
            outside,
        } => Ok(FieldPair::disk(
            domain,
            (center[0], center[1]),
            *radius,
            (inside[0], inside[1]),
            (outside[0], outside[1]),
        )),
        InitialCondition::File { path } => {
            let snap = read_snapshot(path)?;
            if snap.state.shape() != domain.interior_shape() {
                let (r, c) = domain.interior_shape();
                return Err(Error::DimensionMismatch {
                    expected: r * c,
                    actual: snap.state.u.len(),
                });
            }
            Ok(snap.state)
        }
    }
}

/// Advance the configured system to `T`, storing snapshots and norm
/// diagnostics on the configured schedules.
pub fn run(config: &SimulationConfig) -> Result<Trajectory> {
    if let Some(dir) = &config.output_dir {
        ensure_writable(dir)?;
        std::fs::write(dir.join("resolved.toml"), config.to_toml())?;
    }
    let state0 = initial_state(config)?;
    if state0.non_finite_species().is_some() {
        return Err(Error::NonFinite {
            step: 0,
            species: state0.non_finite_species().unwrap(),
        });
    }
    let ws = SolverWorkspace::new(
        config.params,
        config.domain,
        config.time.tau(),
        config.solver.scheme(),
        config.picard,
    )?;
    let bounds = EnergyBounds::new(&state0, &config.params, &config.domain);
    let snapshot_steps = config.snapshot_steps();
    let total = config.time.steps();
    let mut traj = Trajectory {
        snapshots: Vec::new(),
        diagnostics: Vec::new(),
        final_state: state0.clone(),
        picard_iterations: 0,
        bound_violations: 0,
    };
    let mut integrator = Integrator::new(ws, state0);
    record(config, &bounds, &integrator, &snapshot_steps, &mut traj)?;
    while integrator.step_index() < total {
        if let Err(e) = integrator.advance() {
            if let Some(dir) = &config.output_dir {
                let last = snapshot_of(config, integrator.time(), integrator.state());
                write_snapshot(&dir.join("last_good.fgs"), &last)?;
                log::error!("run aborted at t = {}: {e}; last good state saved", integrator.time());
            }
            return Err(e);
        }
        record(config, &bounds, &integrator, &snapshot_steps, &mut traj)?;
    }
    traj.picard_iterations = integrator.picard_iterations();
    traj.final_state = integrator.state().clone();
    if let Some(dir) = &config.output_dir {
        write_snapshot(&dir.join("final.fgs"), &snapshot_of(config, integrator.time(), integrator.state()))?;
        traj.diagnostics_table().write(&dir.join("diagnostics.csv"))?;
    }
    Ok(traj)
}

fn snapshot_of(config: &SimulationConfig, t: f64, state: &FieldPair) -> Snapshot {
    Snapshot {
        domain: config.domain,
        alpha: config.params.alpha().value(),
        t,
        state: state.clone(),
    }
}

fn record(
    config: &SimulationConfig,
    bounds: &EnergyBounds,
    integrator: &Integrator,
    snapshot_steps: &[usize],
    traj: &mut Trajectory,
) -> Result<()> {
    let n = integrator.step_index();
    let t = integrator.time();
    let state = integrator.state();
    if n % config.diagnostics_stride == 0 || n == config.time.steps() {
        let d = bounds.diagnose(state, &config.domain, n, t);
        if !d.within_bounds(BOUND_SLACK) {
            traj.bound_violations += 1;
            let (quantity, value, bound) = if d.norm_u_sq > d.bound_u + BOUND_SLACK {
                ("norm_u_sq", d.norm_u_sq, d.bound_u)
            } else {
                ("norm_w_sq", d.norm_w_sq, d.bound_w)
            };
            if config.strict_bounds {
                return Err(Error::BoundViolated {
                    step: n,
                    quantity,
                    value,
                    bound,
                });
            }
            log::warn!("step {n}: {quantity} = {value:e} exceeds bound {bound:e}");
        }
        traj.diagnostics.push(d);
    }
    if snapshot_steps.binary_search(&n).is_ok() {
        let path = match &config.output_dir {
            Some(dir) => {
                let p = dir.join(format!("snap_{n:08}.fgs"));
                write_snapshot(&p, &snapshot_of(config, t, state))?;
                Some(p)
            }
            None => None,
        };
        traj.snapshots.push(SnapshotRecord {
            step: n,
            t,
            state: state.clone(),
            path,
        });
    }
    Ok(())
}
