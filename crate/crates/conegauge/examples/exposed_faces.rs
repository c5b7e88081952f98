//! Exposed rays of K_p and their exponents α_z for every support size.

use conegauge::pcone::{classify_exposing, pnorm, ConePoint, ExposingClass, PExponent, BOUNDARY_TOL, DEFAULT_ZERO_TOL};

fn main() -> conegauge::Result<()> {
    for p in [1.5, 2.0, 3.0, 5.0] {
        let pe = PExponent::new(p)?;
        let n = 4;
        for k in 1..=n {
            let zbar: Vec<f64> = (0..n).map(|i| if i < k { -1.0 - 0.1 * i as f64 } else { 0.0 }).collect();
            let z = ConePoint::new(pnorm(&zbar, pe.q()), zbar);
            match classify_exposing(&z, &pe, BOUNDARY_TOL, DEFAULT_ZERO_TOL) {
                ExposingClass::Ray(r) => println!(
                    "p = {p:<4} n = {n} |J_z| = {k}  α_z = {:<4}  f = {:?}",
                    r.alpha.to_string(),
                    r.f.to_vec().iter().map(|x| (x * 1e4).round() / 1e4).collect::<Vec<_>>()
                ),
                other => println!("unexpected {other:?}"),
            }
        }
    }
    let pe = PExponent::new(3.0)?;
    for z in [ConePoint::new(2.0, vec![1.0, 0.0]), ConePoint::zeros(2), ConePoint::new(0.5, vec![1.0, 0.0])] {
        let c = classify_exposing(&z, &pe, BOUNDARY_TOL, DEFAULT_ZERO_TOL);
        println!("z = {:?}: {c:?}", z.to_vec());
    }
    Ok(())
}
