use super::FractionalOrder;
use crate::error::{invalid, Result};

/// `g_k = (-1)^k C(α, k)` for `k = 0..=n`, via `g_k = g_{k-1} (1 - (α+1)/k)`.
///
/// Accepts any real `α`; the integer orders are handy reference points.
pub fn grunwald_g_coeffs(alpha: f64, n: usize) -> Vec<f64> {
    let mut g = Vec::with_capacity(n + 1);
    g.push(1.0);
    for k in 1..=n {
        let prev = g[k - 1];
        g.push(prev * (1.0 - (alpha + 1.0) / k as f64));
    }
    g
}

/// Weighted shifted Grünwald weights `ω_0..=ω_n` together with the
/// binomial-type coefficients they are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct GrunwaldWeights {
    alpha: FractionalOrder,
    omega: Vec<f64>,
    g: Vec<f64>,
}

impl GrunwaldWeights {
    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn g(&self) -> &[f64] {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// `ω_0 = (α/2) g_0`, `ω_k = (α/2) g_k + ((2-α)/2) g_{k-1}` for `k = 1..=n`.
pub fn grunwald_weights(alpha: FractionalOrder, n: usize) -> Result<GrunwaldWeights> {
    if n < 1 {
        return Err(invalid("n", "weight sequence needs n >= 1"));
    }
    let a = alpha.value();
    let g = grunwald_g_coeffs(a, n);
    let half = a / 2.0;
    let rest = (2.0 - a) / 2.0;
    let mut omega = Vec::with_capacity(n + 1);
    omega.push(half * g[0]);
    for k in 1..=n {
        omega.push(half * g[k] + rest * g[k - 1]);
    }
    Ok(GrunwaldWeights { alpha, omega, g })
}
