use super::Domain2D;
use crate::error::{Error, Result};
use ndarray::Array2;

/// Interior values of `(u, v)`; rows follow x, columns follow y. The
/// boundary is implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
}

impl FieldPair {
    pub fn new(u: Array2<f64>, v: Array2<f64>) -> Result<Self> {
        if u.raw_dim() != v.raw_dim() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                actual: v.len(),
            });
        }
        Ok(Self {
            u: u.as_standard_layout().into_owned(),
            v: v.as_standard_layout().into_owned(),
        })
    }

    /// Constant state `(u, v)` on every interior node of `domain`.
    pub fn uniform(domain: &Domain2D, u: f64, v: f64) -> Self {
        let shape = domain.interior_shape();
        Self {
            u: Array2::from_elem(shape, u),
            v: Array2::from_elem(shape, v),
        }
    }

    /// `(inside)` on the closed disk, `(outside)` elsewhere, sampled at the
    /// interior nodes.
    pub fn disk(
        domain: &Domain2D,
        center: (f64, f64),
        radius: f64,
        inside: (f64, f64),
        outside: (f64, f64),
    ) -> Self {
        let shape = domain.interior_shape();
        let inside_disk = |i: usize, j: usize| {
            let dx = domain.x(i) - center.0;
            let dy = domain.y(j) - center.1;
            dx * dx + dy * dy <= radius * radius
        };
        let u = Array2::from_shape_fn(shape, |(i, j)| if inside_disk(i, j) { inside.0 } else { outside.0 });
        let v = Array2::from_shape_fn(shape, |(i, j)| if inside_disk(i, j) { inside.1 } else { outside.1 });
        Self { u, v }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.u.dim()
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().chain(self.v.iter()).all(|v| v.is_finite())
    }

    /// Name of the first species holding a non-finite value.
    pub fn non_finite_species(&self) -> Option<&'static str> {
        if !self.u.iter().all(|v| v.is_finite()) {
            Some("u")
        } else if !self.v.iter().all(|v| v.is_finite()) {
            Some("v")
        } else {
            None
        }
    }
}

/// Discrete `L²` norm squared, `h_x h_y Σ X_ij²`.
pub fn norm_sq(x: &Array2<f64>, domain: &Domain2D) -> f64 {
    domain.hx() * domain.hy() * x.iter().map(|v| v * v).sum::<f64>()
}
