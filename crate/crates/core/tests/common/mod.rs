//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use fgs_core::fracops::riesz_generator;
use fgs_core::FractionalOrder;
use nalgebra::DMatrix;
use ndarray::Array2;

pub fn to_dense(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

pub fn to_array(m: &DMatrix<f64>) -> Array2<f64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| m[(i, j)])
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

/// `tridiag(1, -2, 1) / h²`.
pub fn laplacian_1d(n: usize, h: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => -2.0 / (h * h),
        1 => 1.0 / (h * h),
        _ => 0.0,
    })
}

/// Grünwald-based `∂^α/∂|x|^α` as a dense matrix.
pub fn riesz_dense(alpha: f64, n: usize, h: f64) -> DMatrix<f64> {
    to_dense(&riesz_generator(FractionalOrder::new(alpha).unwrap(), n, h).unwrap().dense())
}

#[derive(Clone, Copy, Debug)]
pub struct Kinetics {
    pub mu_u: f64,
    pub mu_v: f64,
    pub feed: f64,
    pub kill: f64,
    pub tau: f64,
}

fn picard<F: Fn(&DMatrix<f64>) -> DMatrix<f64>>(start: &DMatrix<f64>, update: F) -> DMatrix<f64> {
    let mut x = start.clone();
    for _ in 0..100 {
        let next = update(&x);
        let change = max_abs_diff(&next, &x);
        x = next;
        if change < 1e-14 {
            break;
        }
    }
    x
}

/// Reaction right-hand sides with the implicit averages.
fn h_term(k: &Kinetics, u_half: &DMatrix<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
    u_half.zip_map(vs, |u, v| -k.tau * u * v * v + k.feed * k.tau * (1.0 - u))
}

fn g_term(k: &Kinetics, u_half: &DMatrix<f64>, v_half: &DMatrix<f64>, vs: &DMatrix<f64>) -> DMatrix<f64> {
    let uvv = u_half.zip_map(vs, |u, v| u * v * v);
    uvv.zip_map(v_half, |a, v| k.tau * a - k.tau * (k.feed + k.kill) * v)
}

/// Peaceman-Rachford-form C-N ADI with dense LU line solves, written against
/// plain matrices: `(I - c Dx) X (I - c Dy)ᵀ = (I + c Dx) Xⁿ (I + c Dy)ᵀ + R`.
pub struct DenseAdi {
    pub k: Kinetics,
    dx: DMatrix<f64>,
    dy: DMatrix<f64>,
}

impl DenseAdi {
    pub fn new(k: Kinetics, dx: DMatrix<f64>, dy: DMatrix<f64>) -> Self {
        Self { k, dx, dy }
    }

    fn sides(&self, mu: f64) -> [DMatrix<f64>; 4] {
        let c = 0.5 * self.k.tau * mu;
        let ix = DMatrix::identity(self.dx.nrows(), self.dx.nrows());
        let iy = DMatrix::identity(self.dy.nrows(), self.dy.nrows());
        [&ix - &self.dx * c, &iy - &self.dy * c, &ix + &self.dx * c, &iy + &self.dy * c]
    }

    fn species(&self, mu: f64, xn: &DMatrix<f64>, rhs: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> DMatrix<f64> {
        let [mx, my, ex, ey] = self.sides(mu);
        let lin = &ex * xn * ey.transpose();
        let (lx, ly) = (mx.lu(), my.lu());
        picard(xn, |guess| {
            let r = &lin + rhs(guess);
            let w = lx.solve(&r).unwrap();
            ly.solve(&w.transpose()).unwrap().transpose()
        })
    }

    pub fn step(&self, u: &DMatrix<f64>, v: &DMatrix<f64>, v_star: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let k = self.k;
        let u1 = self.species(k.mu_u, u, |g| h_term(&k, &((u + g) * 0.5), v_star));
        let uh = (u + &u1) * 0.5;
        let v1 = self.species(k.mu_v, v, |g| g_term(&k, &uh, &((v + g) * 0.5), v_star));
        (u1, v1)
    }
}

/// The same step without factorization: one dense solve with
/// `I - (τμ/2)(Dx ⊗ I + I ⊗ Dy)` on the row-major vectorized grid.
pub struct DenseUnfactored {
    pub k: Kinetics,
    dx: DMatrix<f64>,
    dy: DMatrix<f64>,
}

impl DenseUnfactored {
    pub fn new(k: Kinetics, dx: DMatrix<f64>, dy: DMatrix<f64>) -> Self {
        Self { k, dx, dy }
    }

    fn operator(&self) -> DMatrix<f64> {
        let (nx, ny) = (self.dx.nrows(), self.dy.nrows());
        DMatrix::from_fn(nx * ny, nx * ny, |p, q| {
            let (i, j) = (p / ny, p % ny);
            let (k, l) = (q / ny, q % ny);
            let mut a = 0.0;
            if j == l {
                a += self.dx[(i, k)];
            }
            if i == k {
                a += self.dy[(j, l)];
            }
            a
        })
    }

    fn species(&self, mu: f64, xn: &DMatrix<f64>, rhs: impl Fn(&DMatrix<f64>) -> DMatrix<f64>) -> DMatrix<f64> {
        let (nx, ny) = (xn.nrows(), xn.ncols());
        let a = self.operator() * (0.5 * self.k.tau * mu);
        let id = DMatrix::identity(nx * ny, nx * ny);
        let lu = (&id - &a).lu();
        let vec = |m: &DMatrix<f64>| nalgebra::DVector::from_fn(nx * ny, |p, _| m[(p / ny, p % ny)]);
        let lin = (&id + &a) * vec(xn);
        picard(xn, |guess| {
            let sol = lu.solve(&(&lin + vec(&rhs(guess)))).unwrap();
            DMatrix::from_fn(nx, ny, |i, j| sol[i * ny + j])
        })
    }

    pub fn step(&self, u: &DMatrix<f64>, v: &DMatrix<f64>, v_star: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let k = self.k;
        let u1 = self.species(k.mu_u, u, |g| h_term(&k, &((u + g) * 0.5), v_star));
        let uh = (u + &u1) * 0.5;
        let v1 = self.species(k.mu_v, v, |g| g_term(&k, &uh, &((v + g) * 0.5), v_star));
        (u1, v1)
    }
}

use fgs_core::solver::{precompute, Domain2D, FieldPair, Integrator, ModelParams};

pub fn bumpy_state(d: &Domain2D) -> FieldPair {
    let (nx, ny) = d.interior_shape();
    let u = ndarray::Array2::from_shape_fn((nx, ny), |(i, j)| {
        let (x, y) = (d.x(i), d.y(j));
        1.0 - 0.5 * (std::f64::consts::PI * x).sin() * (std::f64::consts::PI * y).sin()
    });
    let v = ndarray::Array2::from_shape_fn((nx, ny), |(i, j)| {
        let (x, y) = (d.x(i), d.y(j));
        0.25 * (-((x - 0.45).powi(2) + (y - 0.55).powi(2)) / 0.05).exp()
    });
    FieldPair::new(u, v).unwrap()
}

/// Largest per-step gap between the α = 2 solver and [`DenseAdi`] with the
/// classical Laplacian on an 8×8 interior over 20 steps.
pub fn classical_oracle_gap() -> f64 {
    let d = Domain2D::unit_square(9).unwrap();
    let k = Kinetics { mu_u: 2e-3, mu_v: 1e-3, feed: 0.03, kill: 0.063, tau: 0.5 };
    let params = ModelParams::new(FractionalOrder::new(2.0).unwrap(), k.mu_u, k.mu_v, k.feed, k.kill).unwrap();
    let mut it = Integrator::new(precompute(params, d, k.tau).unwrap(), bumpy_state(&d));
    let lap = laplacian_1d(8, d.hx());
    let oracle = DenseAdi::new(k, lap.clone(), lap);
    let (mut u, mut v) = (to_dense(&it.state().u), to_dense(&it.state().v));
    let mut v_prev = v.clone();
    let mut worst = 0.0f64;
    for n in 0..20 {
        let v_star = if n == 0 { v.clone() } else { (&v * 3.0 - &v_prev) * 0.5 };
        let (u1, v1) = oracle.step(&u, &v, &v_star);
        v_prev = v;
        u = u1;
        v = v1;
        let s = it.advance().unwrap();
        worst = worst
            .max(max_abs_diff(&to_dense(&s.u), &u))
            .max(max_abs_diff(&to_dense(&s.v), &v));
    }
    worst
}

/// Max-norm gap after one step between the ADI solver and [`DenseUnfactored`]
/// on a 16×16 interior.
pub fn splitting_gap(alpha: f64, tau: f64) -> f64 {
    let d = Domain2D::unit_square(17).unwrap();
    let k = Kinetics { mu_u: 1e-3, mu_v: 5e-4, feed: 0.03, kill: 0.063, tau };
    let params = ModelParams::new(FractionalOrder::new(alpha).unwrap(), k.mu_u, k.mu_v, k.feed, k.kill).unwrap();
    let s0 = bumpy_state(&d);
    let adi = precompute(params, d, tau).unwrap().step_first(&s0).unwrap().state;
    let op = riesz_dense(alpha, 16, d.hx());
    let (u0, v0) = (to_dense(&s0.u), to_dense(&s0.v));
    let (u1, v1) = DenseUnfactored::new(k, op.clone(), op).step(&u0, &v0, &v0);
    max_abs_diff(&to_dense(&adi.u), &u1).max(max_abs_diff(&to_dense(&adi.v), &v1))
}
