use conegauge::kl::{
    check_strict_complementarity, kl_exponent, lipschitz_constant, prox_optimality_residual, prox_pnorm,
    solve_prox_grad, RegLsInstance, SolveOptions, StepRule,
};
use conegauge::pcone::{pnorm, PExponent};
use conegauge::reduction::{Block, ConeSpec};
use conegauge::{Exponent, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn pe(p: f64) -> PExponent {
    PExponent::new(p).unwrap()
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn random_instance(seed: u64, m: usize, dims: Vec<usize>, lambda: f64, p: f64) -> RegLsInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().sum();
    let a = (0..m).map(|_| gaussian(&mut rng, n)).collect();
    let b = gaussian(&mut rng, m);
    let lambdas = vec![lambda; dims.len()];
    RegLsInstance::new(a, b, lambdas, dims, pe(p)).unwrap()
}

/// First-order condition `−∇_i f ∈ λ_i ∂‖x_i‖_p`, checked with dual norms.
fn stationarity_gap(inst: &RegLsInstance, x: &[f64]) -> f64 {
    let g = inst.gradient(x);
    let (p, q) = (inst.p().p(), inst.p().q());
    let mut worst = 0.0f64;
    for (blk, &l) in inst.blocks().into_iter().zip(inst.lambdas()) {
        let gq = pnorm(&g[blk.clone()], q);
        let xp = pnorm(&x[blk.clone()], p);
        if xp == 0.0 {
            worst = worst.max(gq - l);
        } else {
            let ip: f64 = -g[blk.clone()].iter().zip(&x[blk]).map(|(a, b)| a * b).sum::<f64>();
            worst = worst.max((gq - l).abs()).max((ip - l * xp).abs() / xp);
        }
    }
    worst
}

#[test]
fn reformulation_counts() {
    let inst = RegLsInstance::new(vec![vec![1.0, 2.0]], vec![0.5], vec![0.3], vec![2], pe(3.0)).unwrap();
    let r = inst.reformulate().unwrap();
    assert_eq!(r.num_vars(), 6);
    assert_eq!(r.num_equalities(), 2);
    let inst = random_instance(1, 10, vec![10, 10], 0.5, 3.0);
    let r = inst.reformulate().unwrap();
    assert_eq!(r.num_vars(), 12 + 22);
    assert_eq!(r.num_equalities(), 11);
}

#[test]
fn lift_identity_on_random_points() {
    let inst = random_instance(2, 6, vec![3, 4, 2], 0.7, 1.5);
    let r = inst.reformulate().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let x = gaussian(&mut rng, inst.n());
        let v = r.lift(&x);
        let g = inst.objective(&x);
        assert!((r.objective_value(&v) - g).abs() <= 1e-12 * g.max(1.0));
        assert!(r.problem.affine_residual(&v) <= 1e-12 * g.max(1.0));
        assert_eq!(r.extract(&v), x);
        // the leading rotated second-order block is feasible
        let rsoc = &v[..inst.m() + 2];
        let xx: f64 = rsoc[2..].iter().map(|a| a * a).sum();
        assert!(rsoc[0] * rsoc[1] >= xx * (1.0 - 1e-15));
    }
}

#[test]
fn kl_exponent_values() {
    assert_eq!(kl_exponent(&pe(3.0), 1), Exponent::Exact(Rational::new(2, 3)));
    assert_eq!(kl_exponent(&pe(2.0), 1), Exponent::Exact(Rational::new(1, 2)));
    assert_eq!(kl_exponent(&pe(4.0), 2), Exponent::Exact(Rational::new(15, 16)));
    // the exponent only grows with d and with p beyond 2
    for d in 0..5 {
        assert!(kl_exponent(&pe(3.0), d).value() <= kl_exponent(&pe(3.0), d + 1).value());
        assert!(kl_exponent(&pe(3.0), d).value() <= kl_exponent(&pe(5.0), d).value());
    }
}

#[test]
fn prox_limits() {
    let p = pe(3.0);
    assert_eq!(prox_pnorm(&[0.2, -0.3], &p, 1.0, 1e-15).unwrap(), vec![0.0, 0.0]);
    let x = [1.5, -2.5, 0.5];
    let y = prox_pnorm(&x, &p, 1e-13, 1e-15).unwrap();
    assert!(x.iter().zip(&y).all(|(a, b)| (a - b).abs() < 1e-12));
}

#[test]
fn seeded_least_squares_run() {
    let inst = random_instance(2024, 10, vec![10, 10], 0.5, 3.0);
    let res = solve_prox_grad(&inst, &SolveOptions::default()).unwrap();
    assert!(res.trace.windows(2).all(|w| w[1].objective <= w[0].objective));
    // strict decrease until the iterates stop moving
    let moving: Vec<_> = res.trace.iter().skip(1).take_while(|r| r.step_norm > 1e-6).collect();
    assert!(moving.len() > 10);
    assert!(moving.windows(2).all(|w| w[1].objective < w[0].objective));
    assert!(res.optimality < 1e-6);
    assert!(stationarity_gap(&inst, &res.x) < 1e-6);
    assert!((res.step - 0.99 / res.lipschitz).abs() < 1e-15);
    assert!(res.lipschitz <= lipschitz_constant(&inst) * (1.0 + 1e-12));
}

#[test]
fn fixed_step_sizes() {
    let inst = random_instance(5, 4, vec![3, 3], 0.2, 2.0);
    let l = lipschitz_constant(&inst);
    let opts = SolveOptions {
        step: StepRule::Fixed(0.5 / l),
        ..Default::default()
    };
    let res = solve_prox_grad(&inst, &opts).unwrap();
    assert!(stationarity_gap(&inst, &res.x) < 1e-6);
    let bad = SolveOptions {
        step: StepRule::Fixed(-1.0),
        ..Default::default()
    };
    assert!(solve_prox_grad(&inst, &bad).is_err());
}

#[test]
fn large_weights_force_the_origin() {
    let inst = random_instance(7, 8, vec![4, 4], 1.0, 3.0);
    let atb = inst.apply_t(inst.rhs());
    let q = inst.p().q();
    let need = inst.blocks().into_iter().map(|b| pnorm(&atb[b], q)).fold(0.0, f64::max);
    let heavy = RegLsInstance::new(
        inst.matrix().to_vec(),
        inst.rhs().to_vec(),
        vec![need * 1.01; 2],
        vec![4, 4],
        inst.p(),
    )
    .unwrap();
    let res = solve_prox_grad(&heavy, &SolveOptions::default()).unwrap();
    assert!(res.x.iter().all(|&v| v == 0.0));
    assert!(stationarity_gap(&heavy, &vec![0.0; 8]) <= 0.0);
    // just below the threshold the origin is no longer optimal
    let light = RegLsInstance::new(
        inst.matrix().to_vec(),
        inst.rhs().to_vec(),
        vec![need * 0.9; 2],
        vec![4, 4],
        inst.p(),
    )
    .unwrap();
    let res = solve_prox_grad(&light, &SolveOptions::default()).unwrap();
    assert!(res.x.iter().any(|&v| v != 0.0));
}

#[test]
fn strict_complementarity_examples() {
    let p = pe(3.0);
    let cone = ConeSpec::new(vec![Block::Pcone { p, dim: 3 }]).unwrap();
    assert!(check_strict_complementarity(&[2.0, 0.5, -0.5], &[0.0; 3], &cone, 1e-9).unwrap());
    // s* = (1, (−1, 0)) exposes the ray through f = (1, (1, 0))
    let s = [1.0, -1.0, 0.0];
    assert!(check_strict_complementarity(&[1.0, 1.0, 0.0], &s, &cone, 1e-9).unwrap());
    assert!(!check_strict_complementarity(&[0.0; 3], &s, &cone, 1e-9).unwrap());
    assert!(check_strict_complementarity(&[2.0, 0.0, 0.0], &s, &cone, 1e-9).is_err());

    let rs = ConeSpec::new(vec![Block::Rsoc { dim: 3 }, Block::Expcone]).unwrap();
    let v = [0.0, 1.0, 0.0, 1.0, 1.0, 3.0];
    let s = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    assert!(check_strict_complementarity(&v, &s, &rs, 1e-9).unwrap());
}

proptest! {
    #[test]
    fn p2_prox_is_block_soft_threshold(x in prop::collection::vec(-5.0f64..5.0, 1..9), w in 0.01f64..6.0) {
        let y = prox_pnorm(&x, &pe(2.0), w, 1e-15).unwrap();
        let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let shrink = if r > w { 1.0 - w / r } else { 0.0 };
        for (a, b) in y.iter().zip(&x) {
            prop_assert!((a - shrink * b).abs() <= 1e-10);
        }
    }

    #[test]
    fn prox_satisfies_subdifferential_inclusion(
        p in prop_oneof![Just(1.5), Just(3.0), 1.1f64..8.0],
        x in prop::collection::vec(-5.0f64..5.0, 1..9),
        w in 0.01f64..4.0,
    ) {
        let p = pe(p);
        let y = prox_pnorm(&x, &p, w, 1e-15).unwrap();
        prop_assert!(prox_optimality_residual(&x, &y, &p, w) < 1e-8);
    }

    #[test]
    fn prox_is_nonexpansive(x1 in prop::collection::vec(-5.0f64..5.0, 4), x2 in prop::collection::vec(-5.0f64..5.0, 4),
                            p in 1.2f64..6.0, w in 0.01f64..3.0) {
        let p = pe(p);
        let y1 = prox_pnorm(&x1, &p, w, 1e-15).unwrap();
        let y2 = prox_pnorm(&x2, &p, w, 1e-15).unwrap();
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
        prop_assert!(d(&y1, &y2) <= d(&x1, &x2) * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn descent_on_random_instances(seed in any::<u64>(), p in prop_oneof![Just(1.5), Just(2.0), Just(3.0)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.random_range(2..6);
        let inst = random_instance(seed, m, vec![2, 3], rng.random_range(0.05..1.0), p);
        let opts = SolveOptions { max_iter: 5000, ..Default::default() };
        let res = solve_prox_grad(&inst, &opts).unwrap();
        prop_assert!(res.trace.windows(2).all(|w| w[1].objective <= w[0].objective));
        prop_assert!(res.objective <= inst.objective(&vec![0.0; inst.n()]));
    }
}
