//! Projects random points onto K_p and checks the Moreau decomposition
//! v = P_K(v) + P_{K°}(v) with orthogonal parts.

use conegauge::pcone::{in_cone, in_dual_cone, polar_projection, project_cone, ConePoint, PExponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> conegauge::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [1.5, 2.0, 3.0, 7.0] {
        let pe = PExponent::new(p)?;
        let (mut worst_split, mut worst_orth) = (0.0f64, 0.0f64);
        for _ in 0..1000 {
            let v: Vec<f64> = (0..5).map(|_| rng.random_range(-2.0..2.0)).collect();
            let v = ConePoint::from_slice(&v)?;
            let pk = project_cone(&v, &pe, 1e-12)?.point;
            let pp = polar_projection(&v, &pe, 1e-12)?;
            assert!(in_cone(&pk, &pe, 1e-9));
            assert!(in_dual_cone(&pp.scale(-1.0), &pe, 1e-9));
            worst_split = worst_split.max(v.sub(&pk).sub(&pp).norm());
            worst_orth = worst_orth.max(pk.dot(&pp).abs());
        }
        println!("p = {p:<4} max ‖v − P_K v − P_K° v‖ = {worst_split:.2e}   max |⟨P_K v, P_K° v⟩| = {worst_orth:.2e}");
    }
    let v = ConePoint::new(0.0, vec![2.0, 0.0]);
    let pr = project_cone(&v, &PExponent::new(3.0)?, 1e-12)?;
    println!("P_K3(0, 2, 0) = {:?}, distance {:.6}", pr.point.to_vec(), pr.distance);
    Ok(())
}
