use crate::error::{invalid, Result};
use crate::fracops::{FractionalOrder, ToeplitzOperator};
use statrs::function::gamma::ln_gamma;

/// Fractional centered-difference coefficients
/// `g_k = (-1)^k Γ(α+1) / (Γ(α/2-k+1) Γ(α/2+k+1))` for `k = 0..n`.
pub fn centered_coeffs(alpha: FractionalOrder, n: usize) -> Vec<f64> {
    let a = alpha.value();
    let mut g = Vec::with_capacity(n + 1);
    let g0 = (ln_gamma(a + 1.0) - 2.0 * ln_gamma(0.5 * a + 1.0)).exp();
    g.push(g0);
    for k in 0..n {
        let prev = g[k];
        g.push(prev * (1.0 - (a + 1.0) / (0.5 * a + k as f64 + 1.0)));
    }
    g
}

/// `-h^{-α} T(g)`: the fractional centered approximation of `∂^α/∂|x|^α`
/// with homogeneous Dirichlet data. Independent of the Grünwald weights;
/// reduces to the classical three-point Laplacian at `α = 2`.
pub fn centered_generator(alpha: FractionalOrder, n: usize, h: f64) -> Result<ToeplitzOperator> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid("h", format!("grid spacing must be positive, got {h}")));
    }
    if n < 2 {
        return Err(invalid("n", "at least two interior points required"));
    }
    let scale = -h.powf(-alpha.value());
    let g = centered_coeffs(alpha, n - 1);
    ToeplitzOperator::symmetric(g.into_iter().map(|c| scale * c).collect())
}
