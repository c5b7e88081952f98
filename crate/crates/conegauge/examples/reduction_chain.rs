//! Verifies facial-reduction chains and assembles the error-bound exponent.

use conegauge::pcone::{pnorm, PExponent};
use conegauge::reduction::{
    assemble_chain, dpps_upper_bound, AssembleOptions, Block, ConeSpec, FeasProblem, GammaChoice, MatrixInput,
    ReductionChain,
};

fn pcone(p: f64, dim: usize) -> conegauge::Result<Block> {
    Ok(Block::Pcone { p: PExponent::new(p)?, dim })
}

fn report(name: &str, problem: &FeasProblem, certs: Vec<Vec<f64>>) -> conegauge::Result<()> {
    let opts = AssembleOptions {
        gamma: GammaChoice::Estimate { samples: 20_000, seed: 1 },
        ..Default::default()
    };
    let (v, a) = assemble_chain(problem, &ReductionChain::new(certs), 1e-9, &opts)?;
    let faces: Vec<&str> = v.faces.last().unwrap().iter().map(|f| f.label()).collect();
    println!(
        "{name:<36} ℓ = {}  d_PPS ≤ {}  final faces {faces:?}  exponent {}",
        v.faces_count,
        dpps_upper_bound(problem),
        a.exponent
    );
    Ok(())
}

fn main() -> conegauge::Result<()> {
    // One 3-cone, L = {z}^⊥ with z of full support.
    let zb = [0.4, -0.9];
    let z = vec![pnorm(&zb, 1.5), zb[0], zb[1]];
    let fp = FeasProblem::new(ConeSpec::new(vec![pcone(3.0, 3)?])?, MatrixInput::Rows(vec![z.clone()]), vec![0.0])?;
    report("p = 3, |J_z| = n", &fp, vec![z])?;

    let z = vec![1.0, -1.0, 0.0];
    let fp = FeasProblem::new(ConeSpec::new(vec![pcone(1.5, 3)?])?, MatrixInput::Rows(vec![z.clone()]), vec![0.0])?;
    report("p = 1.5, |J_z| = 1", &fp, vec![z])?;

    // Two 4-cones reduced one after the other along worst-case rays.
    let zb = [-1.0, -1.0, 0.0];
    let z0 = pnorm(&zb, 4.0 / 3.0);
    let z1 = vec![z0, zb[0], zb[1], zb[2], 0.0, 0.0, 0.0, 0.0];
    let z2 = vec![0.0, 0.0, 0.0, 0.0, z0, zb[0], zb[1], zb[2]];
    let cone = ConeSpec::new(vec![pcone(4.0, 4)?, pcone(4.0, 4)?])?;
    let fp = FeasProblem::new(cone, MatrixInput::Rows(vec![z1.clone(), z2.clone()]), vec![0.0, 0.0])?;
    report("K_4 × K_4, two worst-case rays", &fp, vec![z1, z2])?;
    report("K_4 × K_4, no reduction", &fp, vec![])?;

    let text = r#"{"cone":{"blocks":[{"type":"pcone","p":3,"dim":3}]},"A":[[1,0,0]],"b":[1]}"#;
    let fp = FeasProblem::from_json(text)?;
    let err = assemble_chain(&fp, &ReductionChain::new(vec![vec![1.0, 0.0, 0.0]]), 1e-9, &AssembleOptions::default());
    println!("certificate with ⟨z, a⟩ ≠ 0: {}", err.unwrap_err());
    Ok(())
}
