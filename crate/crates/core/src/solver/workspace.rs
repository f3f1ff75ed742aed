use super::{Domain2D, FieldPair, ModelParams};
use crate::error::{Error, Result};
use crate::fracops::{riesz_generator, FractionalOrder, ToeplitzOperator};
use crate::linalg::Cholesky;
use crate::verifier::centered_generator;
use ndarray::{Array2, Zip};
use serde::{Deserialize, Serialize};

/// Spatial discretization of the Riesz derivative along each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpatialScheme {
    /// Weighted shifted Grünwald differences, `(p, q) = (1, 0)`.
    #[default]
    ShiftedGrunwald,
    /// Fractional centered differences; the independent cross-check.
    FractionalCentered,
}

impl SpatialScheme {
    /// Symmetric Toeplitz matrix approximating `∂^α/∂|x|^α` on `n` interior
    /// points of spacing `h`.
    pub fn generator(self, alpha: FractionalOrder, n: usize, h: f64) -> Result<ToeplitzOperator> {
        match self {
            SpatialScheme::ShiftedGrunwald => riesz_generator(alpha, n, h),
            SpatialScheme::FractionalCentered => centered_generator(alpha, n, h),
        }
    }
}

/// Fixed-point settings for the implicit reaction averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PicardSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 8,
        }
    }
}

/// Implicit and explicit Crank-Nicolson factors along one axis for one
/// species: `I - c D` and `I + c D` with `c = τμ/2` and `D` the discrete Riesz
/// derivative. For the Grünwald scheme these are `I ± τK/h^α B`.
#[derive(Debug, Clone)]
pub struct AxisOperator {
    implicit: ToeplitzOperator,
    explicit: ToeplitzOperator,
    factor: Cholesky,
    inverse: Array2<f64>,
    propagator: Array2<f64>,
}

impl AxisOperator {
    pub fn new(generator: &ToeplitzOperator, coefficient: f64, alpha: f64, tau: f64, h: f64) -> Result<Self> {
        let n = generator.size();
        let shift = |sign: f64| {
            let mut col: Vec<f64> = generator.first_column().iter().map(|g| sign * coefficient * g).collect();
            let mut row: Vec<f64> = generator.first_row().iter().map(|g| sign * coefficient * g).collect();
            col[0] += 1.0;
            row[0] += 1.0;
            ToeplitzOperator::new(col, row)
        };
        let implicit = shift(-1.0)?;
        let explicit = shift(1.0)?;
        let factor = Cholesky::factor(implicit.dense().view()).map_err(|e| Error::SingularOperator {
            alpha,
            tau,
            h,
            row: e.row,
            pivot: e.pivot,
        })?;
        let inverse = factor.inverse();
        let propagator = factor.solve_matrix(explicit.dense().view());
        debug_assert_eq!(inverse.nrows(), n);
        Ok(Self {
            implicit,
            explicit,
            factor,
            inverse,
            propagator,
        })
    }

    /// `I - c D` in compressed form.
    pub fn implicit(&self) -> &ToeplitzOperator {
        &self.implicit
    }

    /// `I + c D` in compressed form.
    pub fn explicit(&self) -> &ToeplitzOperator {
        &self.explicit
    }

    pub fn factor(&self) -> &Cholesky {
        &self.factor
    }

    /// Solve `(I - c D) x = b` with the cached factorization.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.factor.size() {
            return Err(Error::DimensionMismatch {
                expected: self.factor.size(),
                actual: b.len(),
            });
        }
        Ok(self.factor.solve(b))
    }
}

/// Both axes for one species.
#[derive(Debug, Clone)]
pub struct SpeciesOperators {
    pub x: AxisOperator,
    pub y: AxisOperator,
}

impl SpeciesOperators {
    pub fn new(
        scheme: SpatialScheme,
        alpha: FractionalOrder,
        mu: f64,
        domain: &Domain2D,
        tau: f64,
    ) -> Result<Self> {
        let (nx, ny) = domain.interior_shape();
        let c = 0.5 * tau * mu;
        let gx = scheme.generator(alpha, nx, domain.hx())?;
        let x = AxisOperator::new(&gx, c, alpha.value(), tau, domain.hx())?;
        let y = if nx == ny && domain.hx() == domain.hy() {
            x.clone()
        } else {
            let gy = scheme.generator(alpha, ny, domain.hy())?;
            AxisOperator::new(&gy, c, alpha.value(), tau, domain.hy())?
        };
        Ok(Self { x, y })
    }

    /// `Mx⁻¹ Ex X Ey My⁻¹`: the linear Crank-Nicolson update.
    pub fn propagate(&self, x: &Array2<f64>) -> Array2<f64> {
        self.x.propagator.dot(x).dot(&self.y.propagator.t())
    }

    /// `Mx⁻¹ R My⁻¹`: the two sweeps of 1D implicit solves, x then y.
    pub fn solve(&self, rhs: &Array2<f64>) -> Array2<f64> {
        self.x.inverse.dot(rhs).dot(&self.y.inverse.t())
    }

    /// `Ex X Ey` applied through the compressed Toeplitz operators.
    pub fn explicit_apply(&self, x: &Array2<f64>) -> Result<Array2<f64>> {
        let t = self.x.explicit.apply_left(x.view())?;
        self.y.explicit.apply_right_transposed(t.view())
    }
}

/// Everything needed to advance the Gray-Scott system by one step with a
/// fixed `(params, domain, τ)`.
#[derive(Debug, Clone)]
pub struct SolverWorkspace {
    params: ModelParams,
    domain: Domain2D,
    tau: f64,
    scheme: SpatialScheme,
    picard: PicardSettings,
    u_ops: SpeciesOperators,
    v_ops: SpeciesOperators,
}

/// Result of one time step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: FieldPair,
    pub u_iterations: usize,
    pub v_iterations: usize,
}

/// Factorize the implicit operators for `(params, domain, τ)`.
pub fn precompute(params: ModelParams, domain: Domain2D, tau: f64) -> Result<SolverWorkspace> {
    SolverWorkspace::new(params, domain, tau, SpatialScheme::default(), PicardSettings::default())
}

impl SolverWorkspace {
    pub fn new(
        params: ModelParams,
        domain: Domain2D,
        tau: f64,
        scheme: SpatialScheme,
        picard: PicardSettings,
    ) -> Result<Self> {
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(crate::error::invalid("tau", format!("must be >= 0, got {tau}")));
        }
        if !(picard.tolerance > 0.0) || picard.max_iterations == 0 {
            return Err(crate::error::invalid("picard", "tolerance must be > 0 and max_iterations >= 1"));
        }
        let alpha = params.alpha();
        let u_ops = SpeciesOperators::new(scheme, alpha, params.mu_u(), &domain, tau)?;
        let v_ops = SpeciesOperators::new(scheme, alpha, params.mu_v(), &domain, tau)?;
        Ok(Self {
            params,
            domain,
            tau,
            scheme,
            picard,
            u_ops,
            v_ops,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }
    pub fn domain(&self) -> &Domain2D {
        &self.domain
    }
    pub fn tau(&self) -> f64 {
        self.tau
    }
    pub fn scheme(&self) -> SpatialScheme {
        self.scheme
    }
    pub fn picard(&self) -> PicardSettings {
        self.picard
    }
    pub fn u_operators(&self) -> &SpeciesOperators {
        &self.u_ops
    }
    pub fn v_operators(&self) -> &SpeciesOperators {
        &self.v_ops
    }

    fn check_shape(&self, s: &FieldPair) -> Result<()> {
        let expected = self.domain.interior_shape();
        if s.shape() != expected || s.v.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected: expected.0 * expected.1,
                actual: s.u.len().max(s.v.len()),
            });
        }
        Ok(())
    }

    /// First step: the reaction uses `V⁰` in place of the extrapolant.
    pub fn step_first(&self, state0: &FieldPair) -> Result<StepOutcome> {
        self.check_shape(state0)?;
        self.advance(state0, &state0.v, 0)
    }

    /// Step `n ≥ 1` using the extrapolant `V* = (3Vⁿ - Vⁿ⁻¹)/2`.
    pub fn step(&self, prev: &FieldPair, curr: &FieldPair, n: usize) -> Result<StepOutcome> {
        self.check_shape(prev)?;
        self.check_shape(curr)?;
        let v_star = Zip::from(&curr.v)
            .and(&prev.v)
            .map_collect(|&vn, &vp| 0.5 * (3.0 * vn - vp));
        self.advance(curr, &v_star, n)
    }

    fn advance(&self, curr: &FieldPair, v_star: &Array2<f64>, n: usize) -> Result<StepOutcome> {
        let tau = self.tau;
        let feed = self.params.feed();
        let decay = self.params.feed() + self.params.kill();
        let v_star_sq = v_star.mapv(|v| v * v);

        // u: H = -τ U^{n+1/2} V*² + Fτ (1 - U^{n+1/2})
        let u_linear = self.u_ops.propagate(&curr.u);
        let (u_next, u_iterations) = self.fixed_point(&curr.u, &u_linear, &self.u_ops, |guess| {
            Zip::from(guess)
                .and(&curr.u)
                .and(&v_star_sq)
                .map_collect(|&g, &un, &vs| reaction_h(0.5 * (un + g), vs, feed, tau))
        })?;
        if !all_finite(&u_next) {
            return Err(Error::NonFinite { step: n + 1, species: "u" });
        }

        // v: G = τ U^{n+1/2} V*² - τ(F+κ) V^{n+1/2}
        let u_half_sq = Zip::from(&u_next)
            .and(&curr.u)
            .and(&v_star_sq)
            .map_collect(|&a, &b, &vs| 0.5 * (a + b) * vs);
        let v_linear = self.v_ops.propagate(&curr.v);
        let (v_next, v_iterations) = self.fixed_point(&curr.v, &v_linear, &self.v_ops, |guess| {
            Zip::from(guess)
                .and(&curr.v)
                .and(&u_half_sq)
                .map_collect(|&g, &vn, &uv| reaction_g(uv, 0.5 * (vn + g), decay, tau))
        })?;
        if !all_finite(&v_next) {
            return Err(Error::NonFinite { step: n + 1, species: "v" });
        }

        Ok(StepOutcome {
            state: FieldPair { u: u_next, v: v_next },
            u_iterations,
            v_iterations,
        })
    }

    /// Picard iteration `X ← L + S(R(X))` starting from `Xⁿ`.
    fn fixed_point<F>(
        &self,
        start: &Array2<f64>,
        linear: &Array2<f64>,
        ops: &SpeciesOperators,
        reaction: F,
    ) -> Result<(Array2<f64>, usize)>
    where
        F: Fn(&Array2<f64>) -> Array2<f64>,
    {
        let mut guess = start.clone();
        let mut update = f64::INFINITY;
        for it in 1..=self.picard.max_iterations {
            let mut next = ops.solve(&reaction(&guess));
            next += linear;
            update = Zip::from(&next)
                .and(&guess)
                .fold(0.0f64, |m, &a, &b| m.max((a - b).abs()));
            guess = next;
            if update < self.picard.tolerance {
                return Ok((guess, it));
            }
            if !update.is_finite() {
                break;
            }
        }
        Err(Error::PicardDiverged {
            iterations: self.picard.max_iterations,
            residual: update,
        })
    }
}

/// `H = -τ U^{n+1/2} V*² + Fτ(1 - U^{n+1/2})` at one node; `v_star_sq = V*²`.
pub fn reaction_h(u_half: f64, v_star_sq: f64, feed: f64, tau: f64) -> f64 {
    -tau * u_half * v_star_sq + feed * tau * (1.0 - u_half)
}

/// `G = τ U^{n+1/2} V*² - τ(F+κ) V^{n+1/2}` at one node; `uv_sq = U^{n+1/2} V*²`.
pub fn reaction_g(uv_sq: f64, v_half: f64, decay: f64, tau: f64) -> f64 {
    tau * uv_sq - tau * decay * v_half
}

fn all_finite(x: &Array2<f64>) -> bool {
    x.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::FractionalOrder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(alpha: f64, mu_u: f64, mu_v: f64) -> ModelParams {
        ModelParams::new(FractionalOrder::new(alpha).unwrap(), mu_u, mu_v, 0.03, 0.063).unwrap()
    }

    #[test]
    fn h_term_by_hand() {
        // U^{n+1/2} = 0.5, V* = 0.25, F = 0.03, τ = 0.1
        let h = reaction_h(0.5, 0.25 * 0.25, 0.03, 0.1);
        assert!((h + 0.001625).abs() < 1e-15, "{h}");
    }

    #[test]
    fn factorization_round_trip() {
        let d = Domain2D::unit_square(17).unwrap();
        let ws = precompute(params(1.5, 1e-3, 5e-4), d, 0.1).unwrap();
        let op = &ws.u_operators().x;
        let lhs = op.implicit().dense();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = lhs.dot(&ndarray::Array1::from(x.clone()));
        let back = op.solve(b.as_slice().unwrap()).unwrap();
        for (a, b) in back.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_step_is_identity() {
        let d = Domain2D::unit_square(8).unwrap();
        let ws = SolverWorkspace::new(params(1.3, 1.0, 0.5), d, 0.0, SpatialScheme::default(), PicardSettings::default())
            .unwrap();
        let eye = Array2::<f64>::eye(7);
        for ops in [ws.u_operators(), ws.v_operators()] {
            assert_eq!(ops.x.implicit().dense(), eye);
            assert_eq!(ops.x.explicit().dense(), eye);
        }
    }

    #[test]
    fn classical_implicit_structure() {
        // I + (τμ/(4h²))·2·tridiag(-1, 2, -1) at α = 2
        let (mu, tau, n) = (2e-5, 0.1, 1024);
        let d = Domain2D::unit_square(n).unwrap();
        let ws = precompute(params(2.0, mu, mu / 2.0), d, tau).unwrap();
        let imp = ws.u_operators().x.implicit();
        let h = 1.0 / n as f64;
        let c = tau * mu / (4.0 * h * h) * 2.0;
        assert!((imp.get(0, 0) - (1.0 + 2.0 * c)).abs() < 1e-12);
        assert!((imp.get(1, 0) + c).abs() < 1e-12);
        assert!((imp.get(0, 1) + c).abs() < 1e-12);
        assert_eq!(imp.get(2, 0), 0.0);
        assert!(imp.is_symmetric());
    }

    #[test]
    fn trivial_state_persists_away_from_boundary() {
        let d = Domain2D::unit_square(32).unwrap();
        for alpha in [2.0, 1.5] {
            let ws = precompute(params(alpha, 2e-5, 1e-5), d, 0.1).unwrap();
            let s0 = FieldPair::uniform(&d, 1.0, 0.0);
            let s1 = ws.step_first(&s0).unwrap().state;
            let s2 = ws.step(&s0, &s1, 1).unwrap().state;
            for s in [&s1, &s2] {
                assert!(s.v.iter().all(|&v| v == 0.0));
                let dev = |i: usize| (s.u[[i, 15]] - 1.0).abs();
                if alpha == 2.0 {
                    for i in 8..23 {
                        for j in 8..23 {
                            assert!((s.u[[i, j]] - 1.0).abs() < 1e-6);
                        }
                    }
                } else {
                    // the nonlocal operator sees the boundary everywhere, decaying like d^-α
                    assert!(dev(15) < 1e-5);
                    assert!((1..15).all(|i| dev(i) >= dev(i + 1)));
                }
            }
        }
    }

    #[test]
    fn pure_diffusion_is_dissipative() {
        let d = Domain2D::unit_square(24).unwrap();
        let p = ModelParams::new_unchecked_reaction(FractionalOrder::new(1.4).unwrap(), 1e-2, 1e-2, 0.0, 0.0);
        let ws = precompute(p, d, 0.05).unwrap();
        let s0 = FieldPair::disk(&d, (0.4, 0.6), 0.2, (0.8, 0.0), (0.1, 0.0));
        let s1 = ws.step_first(&s0).unwrap().state;
        assert!(crate::solver::norm_sq(&s1.u, &d) <= crate::solver::norm_sq(&s0.u, &d));
    }

    #[test]
    fn kinetics_only_matches_scalar_update() {
        // μ = 0 removes diffusion; each node follows the scalar C-N/IMEX map.
        let d = Domain2D::unit_square(6).unwrap();
        let (f, k, tau) = (0.03, 0.063, 0.3);
        let p = ModelParams::new(FractionalOrder::new(1.7).unwrap(), 0.0, 0.0, f, k).unwrap();
        let ws = precompute(p, d, tau).unwrap();
        let (u0, v0) = (0.6, 0.3);
        let s0 = FieldPair::uniform(&d, u0, v0);
        let s1 = ws.step_first(&s0).unwrap().state;

        let vs2 = v0 * v0;
        let u1 = (u0 * (1.0 - 0.5 * tau * (vs2 + f)) + f * tau) / (1.0 + 0.5 * tau * (vs2 + f));
        let uh = 0.5 * (u0 + u1);
        let v1 = (v0 * (1.0 - 0.5 * tau * (f + k)) + tau * uh * vs2) / (1.0 + 0.5 * tau * (f + k));
        assert!(s1.u.iter().all(|x| (x - u1).abs() < 1e-12));
        assert!(s1.v.iter().all(|x| (x - v1).abs() < 1e-12));

        // second step uses V* = (3V¹ - V⁰)/2
        let s2 = ws.step(&s0, &s1, 1).unwrap().state;
        let vs = 0.5 * (3.0 * v1 - v0);
        let vs2 = vs * vs;
        let u2 = (u1 * (1.0 - 0.5 * tau * (vs2 + f)) + f * tau) / (1.0 + 0.5 * tau * (vs2 + f));
        let uh = 0.5 * (u1 + u2);
        let v2 = (v1 * (1.0 - 0.5 * tau * (f + k)) + tau * uh * vs2) / (1.0 + 0.5 * tau * (f + k));
        assert!(s2.u.iter().all(|x| (x - u2).abs() < 1e-12));
        assert!(s2.v.iter().all(|x| (x - v2).abs() < 1e-12));
    }

    #[test]
    fn picard_cap_is_reported() {
        let d = Domain2D::unit_square(8).unwrap();
        let picard = PicardSettings { tolerance: 1e-300, max_iterations: 2 };
        let ws = SolverWorkspace::new(params(1.5, 1e-3, 1e-3), d, 0.1, SpatialScheme::default(), picard).unwrap();
        let s0 = FieldPair::disk(&d, (0.5, 0.5), 0.2, (0.5, 0.25), (1.0, 0.0));
        assert!(matches!(ws.step_first(&s0), Err(Error::PicardDiverged { iterations: 2, .. })));
    }

    #[test]
    fn non_finite_input_is_detected() {
        let d = Domain2D::unit_square(8).unwrap();
        let ws = precompute(params(1.5, 1e-3, 1e-3), d, 0.1).unwrap();
        let mut s0 = FieldPair::uniform(&d, 1.0, 0.0);
        s0.v[[3, 3]] = f64::NAN;
        assert!(ws.step_first(&s0).is_err());
    }
}
