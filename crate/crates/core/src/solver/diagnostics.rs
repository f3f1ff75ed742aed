use super::field::norm_sq;
use super::{Domain2D, FieldPair, ModelParams};
use serde::Serialize;

/// Squared norms of the current state together with the energy bounds
/// `‖Uⁿ‖² ≤ ‖u₀‖² + F tₙ |Ω|` and the companion bound on `W = U + V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormDiagnostics {
    pub step: usize,
    pub t: f64,
    pub norm_u_sq: f64,
    pub norm_v_sq: f64,
    pub norm_w_sq: f64,
    pub bound_u: f64,
    pub bound_w: f64,
}

impl NormDiagnostics {
    pub fn within_bounds(&self, slack: f64) -> bool {
        self.norm_u_sq <= self.bound_u + slack && self.norm_w_sq <= self.bound_w + slack
    }
}

/// Initial-data quantities entering the bounds, computed once per run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBounds {
    u0_sq: f64,
    w0_sq: f64,
    area: f64,
    feed: f64,
    kill: f64,
    coupling: f64,
}

impl EnergyBounds {
    pub fn new(initial: &FieldPair, params: &ModelParams, domain: &Domain2D) -> Self {
        let w0 = &initial.u + &initial.v;
        Self {
            u0_sq: norm_sq(&initial.u, domain),
            w0_sq: norm_sq(&w0, domain),
            area: domain.area(),
            feed: params.feed(),
            kill: params.kill(),
            coupling: diffusion_mismatch(params),
        }
    }

    /// `‖u₀‖² + F t |Ω|`.
    pub fn bound_u(&self, t: f64) -> f64 {
        self.u0_sq + self.feed * t * self.area
    }

    /// `‖u₀+v₀‖² + (κt + X)‖u₀‖² + (1 + κt + X) F t |Ω|` with
    /// `X = |μ_v - μ_u|² / (2 μ_u μ_v cos²(πα/2))`.
    pub fn bound_w(&self, t: f64) -> f64 {
        let kt = self.kill * t;
        let x = self.coupling;
        let mut b = self.w0_sq + (kt + x) * self.u0_sq + (1.0 + kt + x) * self.feed * t * self.area;
        if b.is_nan() {
            b = f64::INFINITY;
        }
        b
    }
}

/// `|μ_v - μ_u|² / (2 μ_u μ_v cos²(πα/2))`; zero for equal diffusivities and
/// unbounded when exactly one of them vanishes.
fn diffusion_mismatch(params: &ModelParams) -> f64 {
    let d = params.mu_v() - params.mu_u();
    if d == 0.0 {
        return 0.0;
    }
    let denom = 2.0 * params.mu_u() * params.mu_v() * params.alpha().cos_half_pi().powi(2);
    if denom == 0.0 {
        f64::INFINITY
    } else {
        d * d / denom
    }
}

/// Norms of `state` at time `t` and the bounds implied by `initial`.
pub fn norm_diagnostics(
    state: &FieldPair,
    initial: &FieldPair,
    params: &ModelParams,
    domain: &Domain2D,
    step: usize,
    t: f64,
) -> NormDiagnostics {
    EnergyBounds::new(initial, params, domain).diagnose(state, domain, step, t)
}

impl EnergyBounds {
    pub fn diagnose(&self, state: &FieldPair, domain: &Domain2D, step: usize, t: f64) -> NormDiagnostics {
        let w = &state.u + &state.v;
        NormDiagnostics {
            step,
            t,
            norm_u_sq: norm_sq(&state.u, domain),
            norm_v_sq: norm_sq(&state.v, domain),
            norm_w_sq: norm_sq(&w, domain),
            bound_u: self.bound_u(t),
            bound_w: self.bound_w(t),
        }
    }
}
