use crate::error::{invalid, Error, Result};
use crate::io::csv::{cell, Table};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Least-squares fit of `ln r = ln A - β/α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub beta: f64,
    /// `ln A`
    pub log_prefactor: f64,
    /// RMS residual in `ln r`.
    pub residual: f64,
    pub samples: Vec<(f64, f64)>,
}

impl ScalingFit {
    pub fn prefactor(&self) -> f64 {
        self.log_prefactor.exp()
    }

    pub fn predict(&self, alpha: f64) -> f64 {
        (self.log_prefactor - self.beta / alpha).exp()
    }

    /// `beta,prefactor,residual` header and value line.
    pub fn summary(&self) -> Table {
        let mut t = Table::new(["beta", "prefactor", "residual"]);
        t.push([self.beta.to_string(), self.prefactor().to_string(), self.residual.to_string()]);
        t
    }
}

pub fn fit_scaling(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            required: 3,
            actual: samples.len(),
        });
    }
    for &(a, r) in samples {
        if !(a > 1.0 && a <= 2.0) {
            return Err(Error::InvalidOrder(a));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid("r", format!("peak positions must be positive, got {r}")));
        }
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| 1.0 / s.0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-14 * mx * mx {
        return Err(Error::DegenerateFit("all samples share the same order".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(ScalingFit {
        beta: -slope,
        log_prefactor: intercept,
        residual: (rss / n).sqrt(),
        samples: samples.to_vec(),
    })
}

/// `alpha,r1,r2` table.
pub fn peaks_table(rows: &[(f64, Option<f64>, Option<f64>)]) -> Table {
    let mut t = Table::new(["alpha", "r1", "r2"]);
    for &(a, r1, r2) in rows {
        t.push([a.to_string(), cell(r1), cell(r2)]);
    }
    t
}

/// `(α, r)` samples from an `alpha,r1,r2` file, using `column`; rows with an
/// empty cell are skipped.
pub fn read_peaks(path: &Path, column: &str) -> Result<Vec<(f64, f64)>> {
    let t = Table::read(path)?;
    let alphas = t.numeric_column("alpha")?;
    let rs = t.numeric_column(column)?;
    Ok(alphas
        .into_iter()
        .zip(rs)
        .filter_map(|(a, r)| Some((a?, r?)))
        .collect())
}
