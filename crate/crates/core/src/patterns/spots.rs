use crate::error::{invalid, Result};
use crate::solver::Domain2D;
use ndarray::Array2;
use serde::{Deserialize, Serialize};

/// Default spot threshold as a fraction of the field maximum.
pub const DEFAULT_THRESHOLD_FRACTION: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotSet {
    /// Intensity-weighted centroids in physical coordinates.
    pub centroids: Vec<(f64, f64)>,
    /// Pixel count of each component.
    pub areas: Vec<usize>,
    pub threshold: f64,
}

impl SpotSet {
    pub fn count(&self) -> usize {
        self.centroids.len()
    }
    pub fn is_empty(&self) -> bool {
        self.centroids.is_empty()
    }
}

/// Label 4-connected components of `field > threshold`. Components touching
/// the boundary are kept. Labels follow row-major discovery order.
pub fn detect_spots(field: &Array2<f64>, domain: &Domain2D, threshold: f64) -> Result<SpotSet> {
    if field.dim() != domain.interior_shape() {
        return Err(crate::Error::DimensionMismatch {
            expected: domain.interior_shape().0 * domain.interior_shape().1,
            actual: field.len(),
        });
    }
    if !threshold.is_finite() {
        return Err(invalid("threshold", "must be finite"));
    }
    if !field.iter().all(|v| v.is_finite()) {
        return Err(invalid("field", "contains non-finite values"));
    }
    let (nx, ny) = field.dim();
    let mut seen = Array2::from_elem((nx, ny), false);
    let mut stack = Vec::new();
    let mut spots = SpotSet {
        centroids: Vec::new(),
        areas: Vec::new(),
        threshold,
    };
    for i0 in 0..nx {
        for j0 in 0..ny {
            if seen[[i0, j0]] || field[[i0, j0]] <= threshold {
                continue;
            }
            seen[[i0, j0]] = true;
            stack.push((i0, j0));
            let (mut w, mut wx, mut wy, mut area) = (0.0, 0.0, 0.0, 0);
            while let Some((i, j)) = stack.pop() {
                let val = field[[i, j]];
                w += val;
                wx += val * domain.x(i);
                wy += val * domain.y(j);
                area += 1;
                let neighbours = [
                    (i.wrapping_sub(1), j),
                    (i + 1, j),
                    (i, j.wrapping_sub(1)),
                    (i, j + 1),
                ];
                for (a, b) in neighbours {
                    if a < nx && b < ny && !seen[[a, b]] && field[[a, b]] > threshold {
                        seen[[a, b]] = true;
                        stack.push((a, b));
                    }
                }
            }
            spots.centroids.push((wx / w, wy / w));
            spots.areas.push(area);
        }
    }
    Ok(spots)
}

/// [`detect_spots`] with `threshold = fraction · max(field)`; a field with no
/// positive values has no spots.
pub fn detect_spots_relative(field: &Array2<f64>, domain: &Domain2D, fraction: f64) -> Result<SpotSet> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(invalid("threshold_frac", format!("must lie in (0, 1), got {fraction}")));
    }
    let max = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > 0.0) {
        return Ok(SpotSet {
            centroids: Vec::new(),
            areas: Vec::new(),
            threshold: 0.0,
        });
    }
    detect_spots(field, domain, fraction * max)
}
