//! Log-log slopes of the witness curves: `p` for small support, `2` for large support.

use conegauge::pcone::{face_from_exposing, pnorm, ConePoint, PExponent};
use conegauge::tightness::{
    default_grid, default_small_index, fit_exponent, witness_large_support, witness_small_support,
};

fn boundary_z(p: &PExponent, zbar: Vec<f64>) -> ConePoint {
    ConePoint::new(pnorm(&zbar, p.q()), zbar)
}

fn main() -> conegauge::Result<()> {
    let grid = default_grid();
    for p in [1.5, 3.0, 5.0] {
        let pe = PExponent::new(p)?;
        let ray = face_from_exposing(&boundary_z(&pe, vec![-1.0, 0.0, 0.0]), &pe, 1e-10)?;
        let j = default_small_index(&ray).expect("|J_z| < n");
        let fit = fit_exponent(&witness_small_support(&ray, j)?, &grid)?;
        println!("small support  p = {p:<4} slope = {:.5}  r² = {:.8}", fit.slope, fit.r2);
    }
    for p in [1.5, 2.0, 3.0] {
        let pe = PExponent::new(p)?;
        let ray = face_from_exposing(&boundary_z(&pe, vec![-0.7, 0.4, -1.1]), &pe, 1e-10)?;
        let fit = fit_exponent(&witness_large_support(&ray, None)?, &grid)?;
        println!("large support  p = {p:<4} slope = {:.5}  r² = {:.8}", fit.slope, fit.r2);
    }
    Ok(())
}
