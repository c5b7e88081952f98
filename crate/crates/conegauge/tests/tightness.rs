use conegauge::frf::{expcone_g, ExpFaceTag, GFunction};
use conegauge::pcone::{face_from_exposing, pnorm, project_cone, ConePoint, PExponent};
use conegauge::tightness::{
    default_grid, error_bound_constant, estimate_gamma, estimate_gamma_with, fit_exponent, g1_limsup, log_grid,
    offset_distance, witness_exp_beta, witness_exp_minus_infinity, witness_exp_plus_infinity,
    witness_large_support, witness_small_support, GammaConfig,
};
use proptest::prelude::*;

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

fn boundary(p: &PExponent, zbar: Vec<f64>) -> ConePoint {
    ConePoint::new(pnorm(&zbar, p.q()), zbar)
}

#[test]
fn small_support_curve_for_p3() {
    let p = pe(3.0);
    let ray = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &p, 1e-10).unwrap();
    assert_eq!(ray.f, ConePoint::new(1.0, vec![1.0, 0.0]));
    let curve = witness_small_support(&ray, 1).unwrap();
    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        assert_eq!(curve.eval(eps).unwrap(), vec![1.0, 1.0, eps]);
        let s = curve.sample(eps).unwrap();
        assert!((s.dist_f - eps).abs() <= 1e-12);
        assert!(s.dist_k <= eps.powi(3) / 3.0);
        let ratio = s.dist_k.powf(1.0 / 3.0) / s.dist_f;
        assert!(ratio <= (1.0f64 / 3.0).powf(1.0 / 3.0) + 0.01);
    }
}

#[test]
fn offset_distance_agrees_with_direct_projection() {
    // at moderate ε the two routes to dist(w_ε, K) must coincide
    for p in [1.5, 3.0, 5.0] {
        let p = pe(p);
        let ray = face_from_exposing(&boundary(&p, vec![-0.8, 0.5, 0.0]), &p, 1e-10).unwrap();
        let curve = witness_small_support(&ray, 2).unwrap();
        for eps in [0.3, 0.1, 0.03] {
            let w = ConePoint::from_slice(&curve.eval(eps).unwrap()).unwrap();
            let direct = project_cone(&w, &p, 1e-14).unwrap().distance;
            let s = curve.sample(eps).unwrap();
            assert!((s.dist_k - direct).abs() <= 1e-8 * direct, "p = {}: {} vs {direct}", p.p(), s.dist_k);
            let mut h = ConePoint::zeros(3);
            h.xbar[2] = eps;
            assert!((offset_distance(&ray.f, &h, p.p()).unwrap() - s.dist_k).abs() <= 1e-15 * s.dist_k.max(1e-300));
        }
    }
}

#[test]
fn large_support_curve_for_p2() {
    let p = pe(2.0);
    let c = 0.5f64.sqrt();
    let z = ConePoint::new(1.0, vec![-c, -c]);
    let ray = face_from_exposing(&z, &p, 1e-10).unwrap();
    let curve = witness_large_support(&ray, None).unwrap();
    let mut lower = f64::INFINITY;
    for k in 1..=5 {
        let eps = 10f64.powi(-k);
        let s = curve.sample(eps).unwrap();
        let w = curve.eval(eps).unwrap();
        let zw: f64 = z.to_vec().iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!(zw.abs() <= 1e-14);
        assert!(s.dist_k / (eps * eps) < 10.0);
        lower = lower.min(s.dist_f / eps);
    }
    assert!(lower > 1e-3);
}

#[test]
fn limsup_examples() {
    let grid = default_grid();
    for p in [1.5, 3.0, 5.0, 8.0] {
        let p = pe(p);
        let ray = face_from_exposing(&boundary(&p, vec![0.0, -1.0, 0.0]), &p, 1e-10).unwrap();
        let est = g1_limsup(&witness_small_support(&ray, 0).unwrap(), &GFunction::power(p.inv_p()), &grid).unwrap();
        assert!(est.estimate <= (1.0 / p.p()).powf(1.0 / p.p()) + 0.01);
        assert!(est.warnings.is_empty());
    }
    let est = g1_limsup(&witness_exp_plus_infinity(), &expcone_g(ExpFaceTag::PlusInfinity), &grid).unwrap();
    assert!(est.estimate <= 1.05);
    let est = g1_limsup(&witness_exp_minus_infinity(), &expcone_g(ExpFaceTag::MinusInfinity), &grid).unwrap();
    assert!(est.estimate <= 1.05);
    for beta in [-1.0, 0.0, 0.5, 0.9] {
        let est = g1_limsup(&witness_exp_beta(beta).unwrap(), &expcone_g(ExpFaceTag::Beta), &grid).unwrap();
        assert!(est.estimate.is_finite() && est.estimate > 0.0, "β = {beta}");
    }
}

#[test]
fn slope_examples() {
    let grid = default_grid();
    let p = pe(3.0);
    let ray = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &p, 1e-10).unwrap();
    let s = fit_exponent(&witness_small_support(&ray, 1).unwrap(), &grid).unwrap().slope;
    assert!((2.95..=3.05).contains(&s));
    let p = pe(2.0);
    for zbar in [vec![-1.0, 0.0, 0.0], vec![0.3, -0.4, 0.0], vec![0.6, 0.0, -0.8], vec![0.5, 0.5, -0.5]] {
        let ray = face_from_exposing(&boundary(&p, zbar.clone()), &p, 1e-10).unwrap();
        // a single nonzero leaves only the small-support curve, of order 1/p = 1/2
        let curve = match ray.support.len() {
            1 => witness_small_support(&ray, 1).unwrap(),
            _ => witness_large_support(&ray, None).unwrap(),
        };
        let s = fit_exponent(&curve, &grid).unwrap().slope;
        assert!((1.95..=2.05).contains(&s), "{zbar:?}: {s}");
    }
    // the exponential-cone F_β family has the square-root order
    let s = fit_exponent(&witness_exp_beta(0.5).unwrap(), &grid).unwrap().slope;
    assert!((1.95..=2.05).contains(&s), "{s}");
}

#[test]
fn gamma_trend_is_running_minimum_and_stabilizes() {
    let p = pe(2.0);
    let ray = face_from_exposing(&boundary(&p, vec![-0.6, 0.8]), &p, 1e-10).unwrap();
    let est = estimate_gamma(&ray, 1.0, 100_000, 5).unwrap();
    assert!(est.value > 0.0);
    assert!(est.trend.windows(2).all(|w| w[1].value <= w[0].value));
    let at = |n: usize| est.trend.iter().find(|t| t.samples == n).unwrap().value;
    let (a, b) = (at(10_000), at(100_000));
    assert!(a / b <= 2.0, "{a} vs {b}");
    assert_eq!(est.kappa, error_bound_constant(&ray, 1.0, est.value));

    let par = estimate_gamma_with(&ray, &GammaConfig::new(1.0, 100_000, 5).with_workers(4)).unwrap();
    assert_eq!(par, est);
}

#[test]
fn gamma_input_checks() {
    let p = pe(3.0);
    let ray = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &p, 1e-10).unwrap();
    assert!(estimate_gamma(&ray, 0.0, 10, 1).is_err());
    assert!(estimate_gamma(&ray, 1.0, 0, 1).is_err());
    assert!(log_grid(1e-2, 1e-6, 12).is_err());
    assert!(witness_small_support(&ray, 0).is_err());
}

proptest! {
    #[test]
    fn witnesses_stay_in_the_hyperplane(p in 1.2f64..9.0, zbar in prop::collection::vec(-1.0f64..1.0, 2..6), k in 0usize..5) {
        prop_assume!(zbar.iter().all(|v| v.abs() > 1e-3));
        let p = pe(p);
        let ray = face_from_exposing(&boundary(&p, zbar), &p, 1e-10).unwrap();
        let curve = witness_large_support(&ray, Some(k % ray.n())).unwrap();
        for eps in [1e-1, 1e-3, 1e-6] {
            let s = curve.sample(eps).unwrap();
            prop_assert!(s.hyperplane_residual <= 1e-10);
            prop_assert!(s.dist_f > 0.0 && s.dist_k >= 0.0);
        }
    }

    #[test]
    fn small_support_slope_is_p(p in 1.3f64..6.0, n in 2usize..5) {
        let p = pe(p);
        let mut zbar = vec![0.0; n];
        zbar[0] = -1.0;
        let ray = face_from_exposing(&boundary(&p, zbar), &p, 1e-10).unwrap();
        let fit = fit_exponent(&witness_small_support(&ray, n - 1).unwrap(), &default_grid()).unwrap();
        prop_assert!((fit.slope - p.p()).abs() <= 0.05);
    }
}
