use super::ManufacturedCase;
use crate::error::{invalid, Error, Result};
use crate::fracops::FractionalOrder;
use crate::io::csv::{cell, Table};
use crate::solver::{Domain2D, SpatialScheme, SpeciesOperators};
use ndarray::{Array2, Zip};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which discretization parameter a study refines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    Spatial,
    Temporal,
    /// `h` and `τ` refined together; rates are reported against `h`.
    Coupled,
}

/// Time at which the source enters the Crank-Nicolson right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceSampling {
    /// `f(t_{n+1/2})`
    #[default]
    Midpoint,
    /// `(f(t_n) + f(t_{n+1}))/2`
    Average,
}

/// `f(x, y, t) = profile(x, y) e^{-decay t}`.
#[derive(Debug, Clone)]
pub struct SeparableSource {
    pub profile: Array2<f64>,
    pub decay: f64,
}

impl SeparableSource {
    fn weight(&self, t: f64, tau: f64, sampling: SourceSampling) -> f64 {
        match sampling {
            SourceSampling::Midpoint => (-self.decay * (t + 0.5 * tau)).exp(),
            SourceSampling::Average => 0.5 * ((-self.decay * t).exp() + (-self.decay * (t + tau)).exp()),
        }
    }
}

/// Crank-Nicolson ADI for `u_t = ∂^α_{|x|} u + ∂^α_{|y|} u + f`: the solver
/// with the reaction replaced by a prescribed source.
#[derive(Debug, Clone)]
pub struct DiffusionSolver {
    ops: SpeciesOperators,
    domain: Domain2D,
    tau: f64,
}

impl DiffusionSolver {
    pub fn new(scheme: SpatialScheme, alpha: FractionalOrder, domain: Domain2D, tau: f64) -> Result<Self> {
        let ops = SpeciesOperators::new(scheme, alpha, 1.0, &domain, tau)?;
        Ok(Self { ops, domain, tau })
    }

    pub fn domain(&self) -> &Domain2D {
        &self.domain
    }

    /// March `steps` steps from `u0` at `t = 0`.
    pub fn run(&self, u0: &Array2<f64>, source: &SeparableSource, steps: usize, sampling: SourceSampling) -> Array2<f64> {
        // the source is separable, so its implicit solve is shared by all steps
        let solved = self.ops.solve(&source.profile) * self.tau;
        let mut u = u0.clone();
        for n in 0..steps {
            let w = source.weight(n as f64 * self.tau, self.tau, sampling);
            let mut next = self.ops.propagate(&u);
            next.scaled_add(w, &solved);
            u = next;
        }
        u
    }
}

/// One `(h, τ)` level: `h = (b-a)/partitions`, `τ = t_end/steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    pub partitions: usize,
    pub steps: usize,
}

/// Test problem on `(0,1)²` up to `t_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "problem")]
pub enum Problem {
    /// Exact solution `e^{-t} x⁴(1-x)⁴ y⁴(1-y)⁴` with its manufactured source.
    Manufactured,
    /// `u₀ = sin πx sin πy`, `f = 1`, compared with a fine-grid reference at
    /// coincident nodes.
    SineSelfReference { reference: Refinement },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub problem: Problem,
    pub scheme: SpatialScheme,
    pub sampling: SourceSampling,
    pub t_end: f64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Manufactured,
            scheme: SpatialScheme::default(),
            sampling: SourceSampling::default(),
            t_end: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub alpha: f64,
    pub h: f64,
    pub tau: f64,
    pub rel_l2_error: f64,
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    pub kind: StudyKind,
    pub rows: Vec<RateRow>,
}

impl RateTable {
    pub fn for_alpha(&self, alpha: f64) -> Vec<RateRow> {
        self.rows.iter().copied().filter(|r| r.alpha == alpha).collect()
    }

    /// Least-squares slope of `ln e` against `ln h` (or `ln τ` for temporal
    /// studies) over all levels of one order.
    pub fn slope(&self, alpha: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .for_alpha(alpha)
            .iter()
            .map(|r| (self.parameter(r).ln(), r.rel_l2_error.ln()))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    }

    fn parameter(&self, r: &RateRow) -> f64 {
        match self.kind {
            StudyKind::Temporal => r.tau,
            StudyKind::Spatial | StudyKind::Coupled => r.h,
        }
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["alpha", "h", "tau", "rel_l2_error", "rate"]);
        for r in &self.rows {
            t.push([
                r.alpha.to_string(),
                r.h.to_string(),
                r.tau.to_string(),
                r.rel_l2_error.to_string(),
                cell(r.rate),
            ]);
        }
        t
    }
}

fn validate(kind: StudyKind, alphas: &[f64], levels: &[Refinement], config: &StudyConfig) -> Result<()> {
    if levels.len() < 2 {
        return Err(Error::TooFewLevels(levels.len()));
    }
    if alphas.is_empty() {
        return Err(invalid("alphas", "at least one order required"));
    }
    if !(config.t_end > 0.0 && config.t_end.is_finite()) {
        return Err(invalid("t_end", "must be positive"));
    }
    for w in levels.windows(2) {
        let (a, b) = (w[0], w[1]);
        let ok = match kind {
            StudyKind::Spatial => b.partitions > a.partitions,
            StudyKind::Temporal => b.steps > a.steps,
            StudyKind::Coupled => b.partitions > a.partitions && b.steps > a.steps,
        };
        if !ok {
            return Err(invalid("refinements", format!("sequence is not monotone in the refined parameter at {a:?} -> {b:?}")));
        }
    }
    if let Problem::SineSelfReference { reference } = config.problem {
        for l in levels {
            if reference.partitions <= l.partitions || reference.partitions % l.partitions != 0 {
                return Err(invalid(
                    "reference",
                    format!("reference partitions {} must be a strict multiple of {}", reference.partitions, l.partitions),
                ));
            }
        }
    }
    Ok(())
}

/// Relative discrete L2 errors and successive rates for every `(α, level)`
/// cell. Cells run in parallel; each is sequential, so results do not depend
/// on the thread count.
pub fn convergence_study(
    kind: StudyKind,
    alphas: &[f64],
    refinements: &[Refinement],
    config: &StudyConfig,
) -> Result<RateTable> {
    validate(kind, alphas, refinements, config)?;
    let orders: Vec<FractionalOrder> = alphas.iter().map(|&a| FractionalOrder::new(a)).collect::<Result<_>>()?;

    let references: Vec<Option<Array2<f64>>> = orders
        .par_iter()
        .map(|&alpha| match config.problem {
            Problem::Manufactured => Ok(None),
            Problem::SineSelfReference { reference } => sine_solution(alpha, reference, config).map(Some),
        })
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..orders.len())
        .flat_map(|a| (0..refinements.len()).map(move |l| (a, l)))
        .collect();
    let errors: Vec<f64> = cells
        .par_iter()
        .map(|&(a, l)| {
            let level = refinements[l];
            match (&config.problem, &references[a]) {
                (Problem::Manufactured, _) => manufactured_error(orders[a], level, config),
                (Problem::SineSelfReference { reference }, Some(fine)) => {
                    let coarse = sine_solution(orders[a], level, config)?;
                    Ok(coincident_error(&coarse, fine, reference.partitions / level.partitions))
                }
                _ => unreachable!("reference computed for every self-referenced order"),
            }
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cells.len());
    for (&(a, l), &e) in cells.iter().zip(&errors) {
        let level = refinements[l];
        let h = 1.0 / level.partitions as f64;
        let tau = config.t_end / level.steps as f64;
        let rate = (l > 0).then(|| {
            let prev = refinements[l - 1];
            let e_prev = errors[a * refinements.len() + l - 1];
            let ratio = match kind {
                StudyKind::Temporal => level.steps as f64 / prev.steps as f64,
                _ => level.partitions as f64 / prev.partitions as f64,
            };
            (e_prev / e).ln() / ratio.ln()
        });
        rows.push(RateRow {
            alpha: alphas[a],
            h,
            tau,
            rel_l2_error: e,
            rate,
        });
    }
    Ok(RateTable { kind, rows })
}

fn manufactured_error(alpha: FractionalOrder, level: Refinement, config: &StudyConfig) -> Result<f64> {
    let case = ManufacturedCase::new(alpha)?;
    let domain = Domain2D::unit_square(level.partitions)?;
    let tau = config.t_end / level.steps as f64;
    let solver = DiffusionSolver::new(config.scheme, alpha, domain, tau)?;
    let source = SeparableSource {
        profile: case.source_profile(&domain),
        decay: 1.0,
    };
    let u = solver.run(&case.exact_grid(&domain, 0.0), &source, level.steps, config.sampling);
    Ok(relative_l2(&u, &case.exact_grid(&domain, config.t_end)))
}

/// Diffusion of `sin πx sin πy` with unit source, at `t_end`.
pub fn sine_solution(alpha: FractionalOrder, level: Refinement, config: &StudyConfig) -> Result<Array2<f64>> {
    let domain = Domain2D::unit_square(level.partitions)?;
    let tau = config.t_end / level.steps as f64;
    let solver = DiffusionSolver::new(config.scheme, alpha, domain, tau)?;
    let (nx, ny) = domain.interior_shape();
    let u0 = Array2::from_shape_fn((nx, ny), |(i, j)| (PI * domain.x(i)).sin() * (PI * domain.y(j)).sin());
    let source = SeparableSource {
        profile: Array2::ones((nx, ny)),
        decay: 0.0,
    };
    Ok(solver.run(&u0, &source, level.steps, config.sampling))
}

/// `‖coarse - fine|coarse‖ / ‖fine|coarse‖` on the coarse interior nodes;
/// coarse node `i` sits at fine node `(i+1)r - 1`.
pub fn coincident_error(coarse: &Array2<f64>, fine: &Array2<f64>, ratio: usize) -> f64 {
    let restricted = Array2::from_shape_fn(coarse.dim(), |(i, j)| fine[[(i + 1) * ratio - 1, (j + 1) * ratio - 1]]);
    relative_l2(coarse, &restricted)
}

/// `‖a - b‖ / ‖b‖` in the discrete interior norm (the `h_x h_y` factors cancel).
pub fn relative_l2(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let num = Zip::from(a).and(b).fold(0.0, |s, &x, &y| s + (x - y) * (x - y));
    let den = b.iter().map(|y| y * y).sum::<f64>();
    (num / den).sqrt()
}
