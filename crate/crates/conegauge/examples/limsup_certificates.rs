//! (G1) limsup estimates for the small-support curves and the exponential-cone faces.

use conegauge::frf::{expcone_g, ExpFaceTag, GFunction};
use conegauge::pcone::{face_from_exposing, ConePoint, PExponent};
use conegauge::tightness::{
    default_grid, g1_limsup, witness_exp_beta, witness_exp_minus_infinity,
    witness_exp_plus_infinity, witness_small_support,
};

fn main() -> conegauge::Result<()> {
    let grid = default_grid();
    for p in [1.5, 3.0, 5.0] {
        let pe = PExponent::new(p)?;
        let ray = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &pe, 1e-10)?;
        let est = g1_limsup(&witness_small_support(&ray, 1)?, &GFunction::power(pe.inv_p()), &grid)?;
        println!(
            "p = {p:<4} L_g ≈ {:.6}   (1/p)^(1/p) = {:.6}",
            est.estimate,
            (1.0 / p).powf(1.0 / p)
        );
    }
    let cases = [
        ("F_inf ", witness_exp_plus_infinity(), ExpFaceTag::PlusInfinity),
        ("F_-inf", witness_exp_minus_infinity(), ExpFaceTag::MinusInfinity),
        ("F_beta", witness_exp_beta(0.5)?, ExpFaceTag::Beta),
    ];
    for (name, curve, tag) in cases {
        let est = g1_limsup(&curve, &expcone_g(tag), &grid)?;
        println!("{name}  L_g ≈ {:.6}", est.estimate);
        for row in &est.table {
            println!("    ε = {:.3e}  dist_K = {:.3e}  dist_F = {:.3e}  ratio = {:.6}", row.eps, row.dist_k, row.dist_f, row.ratio);
        }
        for w in &est.warnings {
            println!("    warning: {w}");
        }
    }
    Ok(())
}
