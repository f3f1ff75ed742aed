//! Spatially uniform steady states of the Gray-Scott kinetics, the
//! normal-mode dispersion relation `λ² + T_k λ + D_k = 0`, and the `(κ, F)`
//! phase diagram bounded by the saddle-node and Hopf curves.

use crate::error::{invalid, Result};
use crate::io::csv::Table;
use crate::solver::ModelParams;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Half-width of the band around a bifurcation curve reported as
/// [`Region::Boundary`].
pub const TIE_BAND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateSet {
    pub trivial: SteadyState,
    /// `((u₊, v₋), (u₋, v₊))` when the discriminant is nonnegative.
    pub nontrivial: Option<(SteadyState, SteadyState)>,
    pub gamma: f64,
    pub discriminant: f64,
}

impl SteadyStateSet {
    /// `(u₋, v₊)`, the branch that can be stable.
    pub fn upper(&self) -> Option<SteadyState> {
        self.nontrivial.map(|(_, s)| s)
    }

    pub fn all(&self) -> Vec<SteadyState> {
        let mut out = vec![self.trivial];
        if let Some((a, b)) = self.nontrivial {
            out.extend([a, b]);
        }
        out
    }
}

/// Residuals of `-uv² + F(1-u)` and `uv² - (F+κ)v`.
pub fn kinetics_residual(state: SteadyState, feed: f64, kill: f64) -> (f64, f64) {
    let SteadyState { u, v } = state;
    let uvv = u * v * v;
    (-uvv + feed * (1.0 - u), uvv - (feed + kill) * v)
}

pub fn steady_states(feed: f64, kill: f64) -> Result<SteadyStateSet> {
    if !(feed > 0.0 && feed.is_finite()) {
        return Err(invalid("F", format!("must be > 0, got {feed}")));
    }
    if !(kill >= 0.0 && kill.is_finite()) {
        return Err(invalid("kappa", format!("must be >= 0, got {kill}")));
    }
    let gamma = (feed + kill) / feed;
    let discriminant = 1.0 - 4.0 * gamma * gamma * feed;
    let nontrivial = (discriminant >= 0.0).then(|| {
        let r = discriminant.sqrt();
        (
            SteadyState {
                u: 0.5 * (1.0 + r),
                v: (1.0 - r) / (2.0 * gamma),
            },
            SteadyState {
                u: 0.5 * (1.0 - r),
                v: (1.0 + r) / (2.0 * gamma),
            },
        )
    });
    Ok(SteadyStateSet {
        trivial: SteadyState { u: 1.0, v: 0.0 },
        nontrivial,
        gamma,
        discriminant,
    })
}

/// Saddle-node curve `κ_c = -F + √F / 2`, `0 ≤ F ≤ 1/4`.
pub fn saddle_node_kappa(feed: f64) -> Result<f64> {
    if !(0.0..=0.25).contains(&feed) {
        return Err(invalid("F", format!("saddle-node curve is defined for 0 <= F <= 1/4, got {feed}")));
    }
    Ok(-feed + 0.5 * feed.sqrt())
}

/// Hopf curve `F_c = (√κ - 2κ - √((2κ - √κ)² - 4κ²)) / 2`, real for
/// `0 ≤ κ ≤ 1/16`.
pub fn hopf_feed(kill: f64) -> Result<f64> {
    let radicand = kill - 4.0 * kill.powf(1.5);
    if !(kill >= 0.0) || radicand < -TIE_BAND {
        return Err(invalid(
            "kappa",
            format!("Hopf curve requires 0 <= kappa <= 1/16 (nonnegative inner radicand), got {kill}"),
        ));
    }
    let s = kill.sqrt();
    Ok(0.5 * (s - 2.0 * kill - radicand.max(0.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionCoeffs {
    pub t_k: f64,
    pub d_k: f64,
    /// `|k₁|^α + |k₂|^α`
    pub k_abs_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion {
    pub coeffs: DispersionCoeffs,
    pub eigenvalues: [Complex64; 2],
}

impl Dispersion {
    pub fn max_real(&self) -> f64 {
        self.eigenvalues[0].re.max(self.eigenvalues[1].re)
    }
}

pub fn dispersion_coeffs(state: SteadyState, params: &ModelParams, k1: f64, k2: f64) -> DispersionCoeffs {
    let a = params.alpha().value();
    let k = k1.abs().powf(a) + k2.abs().powf(a);
    let (mu_u, mu_v, f, kap) = (params.mu_u(), params.mu_v(), params.feed(), params.kill());
    let SteadyState { u, v } = state;
    let t_k = (mu_u + mu_v) * k + 2.0 * f + kap + v * v - 2.0 * u * v;
    let d_k = mu_u * mu_v * k * k
        + ((v * v + f) * mu_v + (f + kap - 2.0 * u * v) * mu_u) * k
        + (f + kap) * (v * v + f)
        - 2.0 * f * u * v;
    DispersionCoeffs { t_k, d_k, k_abs_alpha: k }
}

/// Roots of `λ² + Tλ + D = 0`, computed without cancellation.
pub fn quadratic_roots(t: f64, d: f64) -> [Complex64; 2] {
    let disc = t * t - 4.0 * d;
    if disc >= 0.0 {
        let q = -0.5 * (t + t.signum() * disc.sqrt());
        if q == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        [Complex64::new(q, 0.0), Complex64::new(d / q, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(-0.5 * t, im), Complex64::new(-0.5 * t, -im)]
    }
}

pub fn dispersion(state: SteadyState, params: &ModelParams, k1: f64, k2: f64) -> Dispersion {
    let coeffs = dispersion_coeffs(state, params, k1, k2);
    Dispersion {
        coeffs,
        eigenvalues: quadratic_roots(coeffs.t_k, coeffs.d_k),
    }
}

/// Regions of the inviscid phase diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Three uniform states, `(u₋, v₊)` unstable (below the Hopf curve).
    I,
    /// Bistable: `(1, 0)` and `(u₋, v₊)` both stable.
    II,
    /// Only the trivial state exists.
    III,
    /// Within [`TIE_BAND`] of a curve.
    Boundary,
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::Boundary => "boundary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub region: Region,
    /// Largest real part at `k = 0` for `(u₋, v₊)`, or for `(1, 0)` in region III.
    pub re_lambda_max: f64,
}

/// Classify `(F, κ)` from the `k = 0` spectrum of `(u₋, v₊)`.
pub fn classify_region(feed: f64, kill: f64) -> Result<Classification> {
    if !(kill > 0.0) {
        return Err(invalid("kappa", format!("must be > 0, got {kill}")));
    }
    let set = steady_states(feed, kill)?;
    // diffusion does not enter at k = 0; any admissible order will do
    let params = ModelParams::new(crate::fracops::FractionalOrder::new(2.0)?, 0.0, 0.0, feed, kill)?;
    if set.discriminant < -TIE_BAND {
        let re = dispersion(set.trivial, &params, 0.0, 0.0).max_real();
        return Ok(Classification {
            region: Region::III,
            re_lambda_max: re,
        });
    }
    let upper = set.upper().unwrap_or(SteadyState { u: 0.5, v: 0.5 / set.gamma });
    let re = dispersion(upper, &params, 0.0, 0.0).max_real();
    let region = if set.discriminant.abs() <= TIE_BAND || re.abs() <= TIE_BAND {
        Region::Boundary
    } else if re < 0.0 {
        Region::II
    } else {
        Region::I
    };
    Ok(Classification { region, re_lambda_max: re })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub kappa: f64,
    pub feed: f64,
    pub region: Region,
    pub re_lambda_max: f64,
}

/// Classify cell centres of an `nk × nf` grid over `[κ₀, κ₁] × [F₀, F₁]`.
pub fn phase_scan(kappa: (f64, f64), feed: (f64, f64), nk: usize, nf: usize) -> Result<Vec<PhasePoint>> {
    if nk == 0 || nf == 0 {
        return Err(invalid("resolution", "grid must have at least one cell per axis"));
    }
    if !(kappa.1 > kappa.0 && kappa.0 >= 0.0 && feed.1 > feed.0 && feed.0 >= 0.0) {
        return Err(invalid("range", "need 0 <= lo < hi for both kappa and F"));
    }
    let dk = (kappa.1 - kappa.0) / nk as f64;
    let df = (feed.1 - feed.0) / nf as f64;
    (0..nk * nf)
        .into_par_iter()
        .map(|idx| {
            let k = kappa.0 + (idx / nf) as f64 * dk + 0.5 * dk;
            let f = feed.0 + (idx % nf) as f64 * df + 0.5 * df;
            let c = classify_region(f, k)?;
            Ok(PhasePoint {
                kappa: k,
                feed: f,
                region: c.region,
                re_lambda_max: c.re_lambda_max,
            })
        })
        .collect()
}

pub fn phase_table(points: &[PhasePoint]) -> Table {
    let mut t = Table::new(["kappa", "F", "region", "re_lambda_max"]);
    for p in points {
        t.push([p.kappa.to_string(), p.feed.to_string(), p.region.to_string(), p.re_lambda_max.to_string()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::FractionalOrder;
    use proptest::prelude::*;

    fn params(alpha: f64, mu_u: f64, mu_v: f64, f: f64, k: f64) -> ModelParams {
        ModelParams::new(FractionalOrder::new(alpha).unwrap(), mu_u, mu_v, f, k).unwrap()
    }

    #[test]
    fn degenerate_double_root() {
        let s = steady_states(0.25, 0.0).unwrap();
        assert_eq!(s.gamma, 1.0);
        assert_eq!(s.discriminant, 0.0);
        let (a, b) = s.nontrivial.unwrap();
        assert_eq!((a.u, a.v, b.u, b.v), (0.5, 0.5, 0.5, 0.5));
    }

    #[test]
    fn residuals_vanish() {
        let s = steady_states(0.03, 0.055).unwrap();
        assert!(s.nontrivial.is_some());
        for st in s.all() {
            let (r1, r2) = kinetics_residual(st, 0.03, 0.055);
            assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        }
        let (a, b) = s.nontrivial.unwrap();
        assert!((a.u + b.u - 1.0).abs() < 1e-15);
        assert!((a.u * a.v - 0.085).abs() < 1e-12);
    }

    #[test]
    fn curve_values() {
        assert!((saddle_node_kappa(1.0 / 16.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(saddle_node_kappa(0.25).unwrap(), 0.0);
        assert!((saddle_node_kappa(0.04).unwrap() - 0.06).abs() < 1e-15);
        assert!(saddle_node_kappa(0.3).is_err());
        assert!((hopf_feed(1.0 / 16.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        assert!(hopf_feed(1e-14).unwrap().abs() < 1e-12);
        let e = hopf_feed(0.07).unwrap_err().to_string();
        assert!(e.contains("1/16"));
    }

    #[test]
    fn saddle_node_zeroes_discriminant() {
        for i in 1..50 {
            let f = 0.25 * i as f64 / 50.0;
            let k = saddle_node_kappa(f).unwrap();
            if k > 0.0 {
                assert!(steady_states(f, k).unwrap().discriminant.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_state_spectrum() {
        let p = params(1.6, 2e-5, 1e-5, 0.03, 0.06);
        let d = dispersion(SteadyState { u: 1.0, v: 0.0 }, &p, 3.0, -4.0);
        let k = 3f64.powf(1.6) + 4f64.powf(1.6);
        let mut want = [-2e-5 * k - 0.03, -1e-5 * k - 0.09];
        let mut got = [d.eigenvalues[0].re, d.eigenvalues[1].re];
        want.sort_by(f64::total_cmp);
        got.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-14);
        }
        assert!(d.eigenvalues.iter().all(|e| e.im == 0.0));
    }

    #[test]
    fn lower_branch_always_unstable() {
        for &(f, k) in &[(0.03, 0.055), (0.05, 0.06), (0.01, 0.03), (0.1, 0.05)] {
            let s = steady_states(f, k).unwrap();
            let (lower, _) = s.nontrivial.unwrap();
            let p = params(1.5, 0.0, 0.0, f, k);
            assert!(dispersion(lower, &p, 0.0, 0.0).max_real() > 0.0);
        }
    }

    #[test]
    fn regions() {
        // (κ, F) = (0.02, 0.20) lies inside the saddle-node curve: κ_c(0.2) ≈ 0.0236
        assert!(steady_states(0.20, 0.02).unwrap().discriminant > 0.0);
        assert_eq!(classify_region(0.20, 0.02).unwrap().region, Region::II);
        assert_eq!(classify_region(0.25, 0.02).unwrap().region, Region::III);
        // bistable above the Hopf curve, oscillatory below it
        let k = 0.04;
        let fc = hopf_feed(k).unwrap();
        assert_eq!(classify_region(fc + 0.005, k).unwrap().region, Region::II);
        assert_eq!(classify_region(fc - 0.005, k).unwrap().region, Region::I);
        assert_eq!(classify_region(fc, k).unwrap().region, Region::Boundary);
    }

    #[test]
    fn phase_csv() {
        let pts = phase_scan((0.0, 0.08), (0.0, 0.3), 4, 5).unwrap();
        assert_eq!(pts.len(), 20);
        let t = phase_table(&pts);
        assert_eq!(t.header, ["kappa", "F", "region", "re_lambda_max"]);
    }

    proptest! {
        #[test]
        fn vieta(u in -2.0..2.0f64, v in -2.0..2.0f64, alpha in 1.01..2.0f64,
                 mu_u in 0.0..1.0f64, mu_v in 0.0..1.0f64, f in 1e-3..0.3f64, k in 1e-3..0.1f64,
                 k1 in -5.0..5.0f64, k2 in -5.0..5.0f64) {
            let p = params(alpha, mu_u, mu_v, f, k);
            let d = dispersion(SteadyState { u, v }, &p, k1, k2);
            let sum = d.eigenvalues[0] + d.eigenvalues[1];
            let prod = d.eigenvalues[0] * d.eigenvalues[1];
            let scale = 1.0 + d.coeffs.t_k.abs() + d.coeffs.d_k.abs();
            prop_assert!((sum.re + d.coeffs.t_k).abs() < 1e-10 * scale);
            prop_assert!(sum.im.abs() < 1e-10 * scale);
            prop_assert!((prod.re - d.coeffs.d_k).abs() < 1e-10 * scale);
            prop_assert!(prod.im.abs() < 1e-10 * scale);
        }
    }
}
