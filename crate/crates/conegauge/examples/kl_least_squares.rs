//! Proximal gradient on a seeded 10×20 problem with two 3-norm groups, plus
//! the KL exponents the conic reformulation predicts.

use conegauge::kl::{kl_exponent, solve_prox_grad, RegLsInstance, SolveOptions};
use conegauge::PExponent;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> conegauge::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (m, n) = (10, 20);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let a: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| draw()).collect()).collect();
    let b: Vec<f64> = (0..m).map(|_| draw()).collect();
    let p = PExponent::new(3.0)?;
    let inst = RegLsInstance::new(a, b, vec![0.5, 0.5], vec![10, 10], p)?;

    let res = solve_prox_grad(&inst, &SolveOptions::default())?;
    let mono = res.trace.windows(2).all(|w| w[1].objective <= w[0].objective);
    println!("L = {:.6}, step = {:.6}", res.lipschitz, res.step);
    println!(
        "iterations = {}, stop = {:?}, objective = {:.12}",
        res.trace.len() - 1,
        res.stop,
        res.objective
    );
    println!("monotone trace: {mono}, optimality = {:.3e}", res.optimality);

    let r = inst.reformulate()?;
    let v = r.lift(&res.x);
    println!(
        "conic objective of the lifted iterate: {:.12} ({} variables, {} equalities)",
        r.objective_value(&v),
        r.num_vars(),
        r.num_equalities()
    );
    for d in 0..=inst.s() as u32 + 1 {
        println!("KL exponent with d = {d}: {}", kl_exponent(&p, d));
    }
    Ok(())
}
