//! Grünwald difference weights and the one-dimensional Riesz operators built
//! from them.
//!
//! The left and right weighted shifted Grünwald differences with shifts
//! `(p, q) = (1, 0)` share one weight sequence `ω_k`. On `n` interior points
//! with homogeneous Dirichlet data the left operator is the lower-Hessenberg
//! Toeplitz matrix `A` with `A[i][j] = ω_{i-j+1}` and the right operator is
//! `Aᵀ`, so `δ^α = (A + Aᵀ) / h^α = B / h^α`.

mod toeplitz;
mod weights;

pub use toeplitz::{assemble_operator, ToeplitzOperator};
pub use weights::{grunwald_g_coeffs, grunwald_weights, GrunwaldWeights};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fractional order `α` of the Riesz derivative, restricted to `(1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 && alpha <= 2.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `cos(πα/2)`; strictly negative on `(1, 2]` and exactly `-1` at `α = 2`.
    pub fn cos_half_pi(self) -> f64 {
        if self.0 == 2.0 {
            -1.0
        } else {
            (PI * self.0 / 2.0).cos()
        }
    }

    /// Factor `c_α = -1 / (2 cos(πα/2))` mapping `(ₐD^α + D_b^α)` onto the
    /// Riesz derivative `∂^α/∂|x|^α`. Positive on `(1, 2]`.
    pub fn riesz_factor(self) -> f64 {
        -1.0 / (2.0 * self.cos_half_pi())
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(a: FractionalOrder) -> f64 {
        a.0
    }
}

impl std::fmt::Display for FractionalOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Apply `δ^α = B / h^α` to one grid line.
pub fn apply_riesz_1d(
    line: &[f64],
    op: &ToeplitzOperator,
    h: f64,
    alpha: FractionalOrder,
) -> Result<Vec<f64>> {
    if line.len() != op.size() {
        return Err(Error::DimensionMismatch {
            expected: op.size(),
            actual: line.len(),
        });
    }
    if !(h > 0.0) {
        return Err(crate::error::invalid("h", format!("grid spacing must be positive, got {h}")));
    }
    let scale = h.powf(-alpha.value());
    let mut out = op.apply(line)?;
    out.iter_mut().for_each(|v| *v *= scale);
    Ok(out)
}

/// Symmetric Toeplitz matrix of the discrete Riesz derivative `∂^α/∂|x|^α`
/// on `n` interior points with spacing `h`: `c_α · B / h^α`.
pub fn riesz_generator(alpha: FractionalOrder, n: usize, h: f64) -> Result<ToeplitzOperator> {
    let w = grunwald_weights(alpha, n)?;
    let b = assemble_operator(&w, n, true)?;
    Ok(b.scaled(alpha.riesz_factor() * h.powf(-alpha.value())))
}
