use crate::error::{invalid, Result};
use crate::fracops::FractionalOrder;
use crate::solver::Domain2D;
use ndarray::Array2;
use statrs::function::gamma::ln_gamma;

/// Monomial expansion of `x⁴(1-x)⁴ = Σ c_p x^p`, `p = 4..8`.
const BUMP: [(i32, f64); 5] = [(4, 1.0), (5, -4.0), (6, 6.0), (7, -4.0), (8, 1.0)];

fn bump(x: f64) -> f64 {
    (x * (1.0 - x)).powi(4)
}

/// `e^{-t} x⁴(1-x)⁴ y⁴(1-y)⁴`.
pub fn exact_ex1(x: f64, y: f64, t: f64) -> f64 {
    (-t).exp() * bump(x) * bump(y)
}

/// Source making [`exact_ex1`] solve `u_t = -(-Δ)^{α/2} u + f`.
pub fn source_ex1(x: f64, y: f64, t: f64, alpha: f64) -> Result<f64> {
    Ok(ManufacturedCase::new(FractionalOrder::new(alpha)?)?.source(x, y, t))
}

/// The manufactured diffusion problem on `(0,1)²`, with the Γ quotients of
/// the Riemann-Liouville derivatives precomputed.
#[derive(Debug, Clone)]
pub struct ManufacturedCase {
    alpha: FractionalOrder,
    k: f64,
    // c_p Γ(p+1)/Γ(p+1-α), paired with the exponent p-α
    terms: [(f64, f64); 5],
}

impl ManufacturedCase {
    pub fn new(alpha: FractionalOrder) -> Result<Self> {
        let a = alpha.value();
        if a >= 2.0 {
            return Err(invalid(
                "alpha",
                "the manufactured source carries 1/(2cos(πα/2)) with one-sided derivatives; α = 2 is not covered, use 1 < α < 2",
            ));
        }
        let k = 1.0 / (2.0 * alpha.cos_half_pi());
        let terms = BUMP.map(|(p, c)| {
            let p = p as f64;
            (c * (ln_gamma(p + 1.0) - ln_gamma(p + 1.0 - a)).exp(), p - a)
        });
        Ok(Self { alpha, k, terms })
    }

    pub fn alpha(&self) -> FractionalOrder {
        self.alpha
    }

    pub fn domain(n: usize) -> Result<Domain2D> {
        Domain2D::unit_square(n)
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        exact_ex1(x, y, t)
    }

    /// `(D_L + D_R)[x⁴(1-x)⁴]`.
    pub fn two_sided(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, e)| c * (x.powf(e) + (1.0 - x).powf(e)))
            .sum()
    }

    pub fn source(&self, x: f64, y: f64, t: f64) -> f64 {
        let (bx, by) = (bump(x), bump(y));
        let spatial = -bx * by + self.k * (by * self.two_sided(x) + bx * self.two_sided(y));
        spatial * (-t).exp()
    }

    /// `f(·,·,0)` on the interior nodes.
    pub fn source_profile(&self, domain: &Domain2D) -> Array2<f64> {
        let (nx, ny) = domain.interior_shape();
        Array2::from_shape_fn((nx, ny), |(i, j)| self.source(domain.x(i), domain.y(j), 0.0))
    }

    pub fn exact_grid(&self, domain: &Domain2D, t: f64) -> Array2<f64> {
        let (nx, ny) = domain.interior_shape();
        Array2::from_shape_fn((nx, ny), |(i, j)| exact_ex1(domain.x(i), domain.y(j), t))
    }
}
