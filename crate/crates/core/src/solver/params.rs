use crate::error::{invalid, Result};
use crate::fracops::FractionalOrder;
use serde::{Deserialize, Serialize};

/// Gray-Scott model parameters `(α, μ_u, μ_v, F, κ)`.
///
/// `K_u` and `K_v` are always derived from `(μ, α)` and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
    alpha: FractionalOrder,
    mu_u: f64,
    mu_v: f64,
    feed: f64,
    kill: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawModelParams {
    alpha: f64,
    mu_u: f64,
    mu_v: f64,
    #[serde(rename = "F")]
    feed: f64,
    kappa: f64,
}

impl ModelParams {
    pub fn new(alpha: FractionalOrder, mu_u: f64, mu_v: f64, feed: f64, kill: f64) -> Result<Self> {
        if !(mu_u >= 0.0 && mu_u.is_finite()) {
            return Err(invalid("mu_u", format!("must be finite and >= 0, got {mu_u}")));
        }
        if !(mu_v >= 0.0 && mu_v.is_finite()) {
            return Err(invalid("mu_v", format!("must be finite and >= 0, got {mu_v}")));
        }
        if !(feed > 0.0 && feed.is_finite()) {
            return Err(invalid("F", format!("feed rate must be > 0, got {feed}")));
        }
        if !(kill > 0.0 && kill.is_finite()) {
            return Err(invalid("kappa", format!("decay rate must be > 0, got {kill}")));
        }
        Ok(Self {
            alpha,
            mu_u,
            mu_v,
            feed,
            kill,
        })
    }

    /// Reaction terms may be switched off entirely (`F = κ = 0`); used by
    /// pure-diffusion checks and not reachable from config files.
    pub fn new_unchecked_reaction(
        alpha: FractionalOrder,
        mu_u: f64,
        mu_v: f64,
        feed: f64,
        kill: f64,
    ) -> Self {
        Self {
            alpha,
            mu_u,
            mu_v,
            feed,
            kill,
        }
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }
    pub fn mu_u(&self) -> f64 {
        self.mu_u
    }
    pub fn mu_v(&self) -> f64 {
        self.mu_v
    }
    pub fn feed(&self) -> f64 {
        self.feed
    }
    pub fn kill(&self) -> f64 {
        self.kill
    }

    /// `K_u = μ_u / (4 cos(πα/2))`, non-positive on `(1, 2]`.
    pub fn k_u(&self) -> f64 {
        self.mu_u / (4.0 * self.alpha.cos_half_pi())
    }

    /// `K_v = μ_v / (4 cos(πα/2))`.
    pub fn k_v(&self) -> f64 {
        self.mu_v / (4.0 * self.alpha.cos_half_pi())
    }
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = crate::Error;
    fn try_from(r: RawModelParams) -> Result<Self> {
        ModelParams::new(FractionalOrder::new(r.alpha)?, r.mu_u, r.mu_v, r.feed, r.kappa)
    }
}

impl From<ModelParams> for RawModelParams {
    fn from(p: ModelParams) -> Self {
        RawModelParams {
            alpha: p.alpha.value(),
            mu_u: p.mu_u,
            mu_v: p.mu_v,
            feed: p.feed,
            kappa: p.kill,
        }
    }
}

/// Rectangle `(a, b) × (c, d)` split into `N_x × N_y` cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub struct Domain2D {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    nx: usize,
    ny: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawDomain {
    x: [f64; 2],
    y: [f64; 2],
    nx: usize,
    ny: usize,
}

impl Domain2D {
    pub fn new(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(invalid("x", format!("need a < b, got ({a}, {b})")));
        }
        if !(c.is_finite() && d.is_finite() && d > c) {
            return Err(invalid("y", format!("need c < d, got ({c}, {d})")));
        }
        if nx < 4 {
            return Err(invalid("nx", format!("need at least 4 cells, got {nx}")));
        }
        if ny < 4 {
            return Err(invalid("ny", format!("need at least 4 cells, got {ny}")));
        }
        Ok(Self { a, b, c, d, nx, ny })
    }

    /// `(0, 1)²` with `n` cells per side.
    pub fn unit_square(n: usize) -> Result<Self> {
        Self::new(0.0, 1.0, 0.0, 1.0, n, n)
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d)
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn hx(&self) -> f64 {
        (self.b - self.a) / self.nx as f64
    }
    pub fn hy(&self) -> f64 {
        (self.d - self.c) / self.ny as f64
    }
    pub fn area(&self) -> f64 {
        (self.b - self.a) * (self.d - self.c)
    }
    /// Shape of the interior grid, `(N_x - 1, N_y - 1)`.
    pub fn interior_shape(&self) -> (usize, usize) {
        (self.nx - 1, self.ny - 1)
    }
    /// Physical x-coordinate of interior row `i` (0-based), i.e. `x_{i+1}`.
    pub fn x(&self, i: usize) -> f64 {
        self.a + (i + 1) as f64 * self.hx()
    }
    pub fn y(&self, j: usize) -> f64 {
        self.c + (j + 1) as f64 * self.hy()
    }
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.a && x <= self.b && y >= self.c && y <= self.d
    }
}

impl TryFrom<RawDomain> for Domain2D {
    type Error = crate::Error;
    fn try_from(r: RawDomain) -> Result<Self> {
        Domain2D::new(r.x[0], r.x[1], r.y[0], r.y[1], r.nx, r.ny)
    }
}

impl From<Domain2D> for RawDomain {
    fn from(d: Domain2D) -> Self {
        RawDomain {
            x: [d.a, d.b],
            y: [d.c, d.d],
            nx: d.nx,
            ny: d.ny,
        }
    }
}

/// Uniform time grid `t_n = n τ`, `n = 0..=M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    tau: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(tau: f64, steps: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("time step must be > 0, got {tau}")));
        }
        if steps < 1 {
            return Err(invalid("steps", "need at least one step"));
        }
        Ok(Self { tau, steps })
    }

    /// Grid reaching `t_end` in steps of `tau`; `t_end / tau` must be an
    /// integer up to rounding.
    pub fn from_end(tau: f64, t_end: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid("tau", format!("time step must be > 0, got {tau}")));
        }
        let m = t_end / tau;
        let steps = m.round();
        if !(steps >= 1.0) || (m - steps).abs() > 1e-9 * steps.max(1.0) {
            return Err(invalid(
                "t_end",
                format!("t_end = {t_end} is not a positive multiple of tau = {tau}"),
            ));
        }
        Self::new(tau, steps as usize)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn steps(&self) -> usize {
        self.steps
    }
    pub fn t_end(&self) -> f64 {
        self.steps as f64 * self.tau
    }
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }
}
