//! `key = value` configuration files with `[section]` headers (TOML).

use crate::error::{invalid, Error, Result};
use crate::solver::{Domain2D, ModelParams, PicardSettings, SpatialScheme, TimeGrid};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Initial state of `(u, v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialCondition {
    Uniform {
        u: f64,
        v: f64,
    },
    /// `inside` on the closed disk (node coordinates), `outside` elsewhere.
    Disk {
        center: [f64; 2],
        radius: f64,
        inside: [f64; 2],
        #[serde(default = "trivial_state")]
        outside: [f64; 2],
    },
    File {
        path: PathBuf,
    },
}

fn trivial_state() -> [f64; 2] {
    [1.0, 0.0]
}

impl Default for InitialCondition {
    /// Perturbation of `(1, 0)` by `(1/2, 1/4)` on the disk of radius 0.04
    /// around `(0.5, 0.5)`.
    fn default() -> Self {
        InitialCondition::Disk {
            center: [0.5, 0.5],
            radius: 0.04,
            inside: [0.5, 0.25],
            outside: trivial_state(),
        }
    }
}

/// Which spatial discretization drives a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    #[default]
    Primary,
    Cross,
}

impl SolverKind {
    pub fn scheme(self) -> SpatialScheme {
        match self {
            SolverKind::Primary => SpatialScheme::ShiftedGrunwald,
            SolverKind::Cross => SpatialScheme::FractionalCentered,
        }
    }
}

/// Fully validated simulation setup.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub params: ModelParams,
    pub domain: Domain2D,
    pub time: TimeGrid,
    pub initial: InitialCondition,
    /// Snapshot times, sorted, within `[0, T]`.
    pub snapshot_times: Vec<f64>,
    pub diagnostics_stride: usize,
    pub output_dir: Option<PathBuf>,
    pub solver: SolverKind,
    pub picard: PicardSettings,
    pub strict_bounds: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    model: ModelParams,
    domain: Domain2D,
    time: RawTime,
    #[serde(default)]
    initial: InitialCondition,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    solver: RawSolver,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTime {
    tau: f64,
    t_end: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snapshot_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    snapshot_stride: Option<usize>,
    #[serde(default = "default_diag_stride")]
    diagnostics_stride: usize,
}

fn default_diag_stride() -> usize {
    10
}

impl Default for RawOutput {
    fn default() -> Self {
        Self {
            dir: None,
            snapshot_times: None,
            snapshot_stride: None,
            diagnostics_stride: default_diag_stride(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    #[serde(default)]
    scheme: SolverKind,
    #[serde(default = "default_tol")]
    picard_tolerance: f64,
    #[serde(default = "default_iters")]
    picard_max_iterations: usize,
    #[serde(default)]
    strict_bounds: bool,
}

fn default_tol() -> f64 {
    PicardSettings::default().tolerance
}
fn default_iters() -> usize {
    PicardSettings::default().max_iterations
}

impl Default for RawSolver {
    fn default() -> Self {
        Self {
            scheme: SolverKind::default(),
            picard_tolerance: default_tol(),
            picard_max_iterations: default_iters(),
            strict_bounds: false,
        }
    }
}

/// Figure times of the reference runs (final time 30000), keyed by `(α, κ)`.
const FIGURE_TIMES: [(f64, f64, [f64; 5]); 6] = [
    (2.0, 0.063, [1000.0, 6200.0, 6800.0, 9400.0, 30000.0]),
    (1.7, 0.063, [200.0, 2000.0, 3400.0, 6000.0, 30000.0]),
    (1.5, 0.063, [2000.0, 3000.0, 5000.0, 9000.0, 30000.0]),
    (2.0, 0.055, [200.0, 800.0, 2000.0, 15000.0, 30000.0]),
    (1.7, 0.055, [400.0, 1600.0, 5000.0, 10000.0, 30000.0]),
    (1.5, 0.055, [800.0, 2600.0, 4000.0, 5800.0, 30000.0]),
];
const FIGURE_FINAL_TIME: f64 = 30000.0;

/// Figure times of the nearest reference `(α, κ)` row, scaled to end at `t_end`.
pub fn default_snapshot_times(alpha: f64, kappa: f64, t_end: f64) -> Vec<f64> {
    let (_, _, times) = FIGURE_TIMES
        .iter()
        .min_by(|a, b| {
            let da = (a.0 - alpha).abs() + 10.0 * (a.1 - kappa).abs();
            let db = (b.0 - alpha).abs() + 10.0 * (b.1 - kappa).abs();
            da.total_cmp(&db)
        })
        .expect("table is non-empty");
    times.iter().map(|t| t * t_end / FIGURE_FINAL_TIME).collect()
}

/// Parse and validate a configuration file's contents.
pub fn parse_config(text: &str) -> Result<SimulationConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    SimulationConfig::from_raw(raw)
}

pub fn load_config(path: &Path) -> Result<SimulationConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

impl SimulationConfig {
    fn from_raw(raw: RawConfig) -> Result<Self> {
        let time = TimeGrid::from_end(raw.time.tau, raw.time.t_end)
            .map_err(|e| Error::Config(format!("[time] {e}")))?;
        let t_end = time.t_end();
        let snapshot_times = match (raw.output.snapshot_times, raw.output.snapshot_stride) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "[output] give either snapshot_times or snapshot_stride, not both".into(),
                ))
            }
            (Some(mut times), None) => {
                if let Some(bad) = times.iter().find(|t| !(**t >= 0.0 && **t <= t_end * (1.0 + 1e-12))) {
                    return Err(Error::Config(format!(
                        "[output] snapshot_times entry {bad} outside [0, {t_end}]"
                    )));
                }
                times.sort_by(f64::total_cmp);
                times
            }
            (None, Some(0)) => return Err(Error::Config("[output] snapshot_stride must be >= 1".into())),
            (None, Some(stride)) => (0..=time.steps())
                .step_by(stride)
                .map(|n| time.t(n))
                .collect(),
            (None, None) => default_snapshot_times(raw.model.alpha().value(), raw.model.kill(), t_end),
        };
        if raw.output.diagnostics_stride == 0 {
            return Err(Error::Config("[output] diagnostics_stride must be >= 1".into()));
        }
        if let InitialCondition::Disk { radius, .. } = raw.initial {
            if !(radius > 0.0) {
                return Err(Error::Config(format!("[initial] radius must be > 0, got {radius}")));
            }
        }
        let picard = PicardSettings {
            tolerance: raw.solver.picard_tolerance,
            max_iterations: raw.solver.picard_max_iterations,
        };
        if !(picard.tolerance > 0.0) || picard.max_iterations == 0 {
            return Err(Error::Config(
                "[solver] picard_tolerance must be > 0 and picard_max_iterations >= 1".into(),
            ));
        }
        Ok(Self {
            params: raw.model,
            domain: raw.domain,
            time,
            initial: raw.initial,
            snapshot_times,
            diagnostics_stride: raw.output.diagnostics_stride,
            output_dir: raw.output.dir,
            solver: raw.solver.scheme,
            picard,
            strict_bounds: raw.solver.strict_bounds,
        })
    }

    fn to_raw(&self) -> RawConfig {
        RawConfig {
            model: self.params,
            domain: self.domain,
            time: RawTime {
                tau: self.time.tau(),
                t_end: self.time.t_end(),
            },
            initial: self.initial.clone(),
            output: RawOutput {
                dir: self.output_dir.clone(),
                snapshot_times: Some(self.snapshot_times.clone()),
                snapshot_stride: None,
                diagnostics_stride: self.diagnostics_stride,
            },
            solver: RawSolver {
                scheme: self.solver,
                picard_tolerance: self.picard.tolerance,
                picard_max_iterations: self.picard.max_iterations,
                strict_bounds: self.strict_bounds,
            },
        }
    }

    /// Resolved configuration with every default spelled out.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_raw()).expect("config always serializes")
    }

    /// Time steps at which snapshots are taken.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let tau = self.time.tau();
        let mut steps: Vec<usize> = self
            .snapshot_times
            .iter()
            .map(|t| ((t / tau).round() as usize).min(self.time.steps()))
            .collect();
        steps.dedup();
        steps
    }
}

/// Check that `dir` exists (creating it) and accepts files.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let probe = dir.join(".fgs-write-probe");
    std::fs::write(&probe, b"")?;
    std::fs::remove_file(&probe)?;
    if !dir.is_dir() {
        return Err(invalid("output.dir", format!("{} is not a directory", dir.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"
[model]
alpha = 1.7
mu_u = 2e-5
mu_v = 1e-5
F = 0.03
kappa = 0.063

[domain]
x = [-1.0, 2.0]
y = [-1.0, 2.0]
nx = 768
ny = 768

[time]
tau = 0.1
t_end = 30000.0
"#;

    #[test]
    fn reference_setup_parses() {
        let c = parse_config(REFERENCE).unwrap();
        assert_eq!(c.params.alpha().value(), 1.7);
        let expected_k = 2e-5 / (4.0 * (1.7 * std::f64::consts::PI / 2.0).cos());
        assert!((c.params.k_u() - expected_k).abs() < 1e-20);
        assert_eq!(c.time.steps(), 300_000);
        assert_eq!(c.initial, InitialCondition::default());
        assert_eq!(c.snapshot_times, vec![200.0, 2000.0, 3400.0, 6000.0, 30000.0]);
        assert_eq!(c.solver, SolverKind::Primary);
    }

    #[test]
    fn alpha_out_of_range_rejected() {
        let text = REFERENCE.replace("alpha = 1.7", "alpha = 2.5");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("(1, 2]"), "{err}");
    }

    #[test]
    fn missing_tau_rejected() {
        let text = REFERENCE.replace("tau = 0.1\n", "");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("tau"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_location() {
        let text = REFERENCE.replace("kappa = 0.063", "kappa = 0.063\nbogus = 1");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn type_mismatch_rejected() {
        let text = REFERENCE.replace("nx = 768", "nx = \"many\"");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("nx") || err.contains("integer"), "{err}");
    }

    #[test]
    fn snapshot_times_validated() {
        let text = format!("{REFERENCE}\n[output]\nsnapshot_times = [10.0, 40000.0]\n");
        assert!(parse_config(&text).is_err());
        let text = format!("{REFERENCE}\n[output]\nsnapshot_stride = 1000\nsnapshot_times = [1.0]\n");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn resolved_dump_round_trips() {
        let extra = r#"
[initial]
kind = "uniform"
u = 1.0
v = 0.0

[output]
dir = "out/run"
snapshot_stride = 50000
diagnostics_stride = 7

[solver]
scheme = "cross"
strict_bounds = true
"#;
        for text in [REFERENCE.to_string(), format!("{REFERENCE}{extra}")] {
            let c = parse_config(&text).unwrap();
            let again = parse_config(&c.to_toml()).unwrap();
            assert_eq!(c, again);
        }
    }

    #[test]
    fn default_times_scale_with_t_end() {
        let t = default_snapshot_times(2.0, 0.063, 3000.0);
        assert_eq!(t, vec![100.0, 620.0, 680.0, 940.0, 3000.0]);
    }
}
