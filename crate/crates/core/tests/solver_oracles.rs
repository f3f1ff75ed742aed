mod common;

use common::*;
use fgs_core::solver::{precompute, Domain2D, FieldPair, Integrator, ModelParams};
use fgs_core::FractionalOrder;

#[test]
fn classical_order_matches_dense_adi_for_twenty_steps() {
    let gap = classical_oracle_gap();
    assert!(gap < 1e-10, "gap {gap:e}");
}

#[test]
fn splitting_error_is_third_order() {
    let gaps: Vec<f64> = [0.4, 0.2, 0.1].iter().map(|&t| splitting_gap(1.5, t)).collect();
    for w in gaps.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 8.0).abs() < 1.6, "gaps {gaps:?}");
    }
}

#[test]
fn zero_v_stays_zero_and_u_relaxes() {
    let d = Domain2D::unit_square(16).unwrap();
    let params = ModelParams::new(FractionalOrder::new(1.6).unwrap(), 1e-3, 5e-4, 0.03, 0.06).unwrap();
    let s0 = FieldPair::uniform(&d, 0.2, 0.0);
    let mut it = Integrator::new(precompute(params, d, 0.5).unwrap(), s0);
    let mut prev_gap = f64::INFINITY;
    for _ in 0..40 {
        let s = it.advance().unwrap();
        assert!(s.v.iter().all(|&v| v == 0.0));
        let gap = (1.0 - s.u[[7, 7]]).abs();
        assert!(gap < prev_gap);
        prev_gap = gap;
    }
}

#[test]
fn runs_are_bitwise_reproducible_across_pools() {
    let d = Domain2D::unit_square(24).unwrap();
    let params = ModelParams::new(FractionalOrder::new(1.7).unwrap(), 2e-4, 1e-4, 0.03, 0.063).unwrap();
    let go = || {
        let mut it = Integrator::new(precompute(params, d, 0.2).unwrap(), bumpy_state(&d));
        for _ in 0..15 {
            it.advance().unwrap();
        }
        it.state().clone()
    };
    let a = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(go);
    let b = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(go);
    let bits = |x: &ndarray::Array2<f64>| x.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.u), bits(&b.u));
    assert_eq!(bits(&a.v), bits(&b.v));
}

#[test]
fn classical_laplacian_matches_alpha_two_generator() {
    let lap = laplacian_1d(8, 0.125);
    assert!(max_abs_diff(&lap, &riesz_dense(2.0, 8, 0.125)) < 1e-9);
}
