//! Projection onto the exponential cone and the faces its dual vectors expose.

use conegauge::expcone::{beta_exposing, classify_exposing, in_cone, project};

fn main() -> conegauge::Result<()> {
    for v in [[1.0, 1.0, 1.0], [2.0, -1.0, 0.5], [-3.0, 2.0, 0.01], [-1.0, 1e-4, 0.0]] {
        let pr = project(&v)?;
        println!(
            "P({v:?}) = [{:.6}, {:.6}, {:.6}]  distance {:.3e}  ln distance {:.4}  in cone: {}",
            pr.point[0],
            pr.point[1],
            pr.point[2],
            pr.distance,
            pr.ln_distance,
            in_cone(&pr.point, 1e-9)
        );
    }
    for s in [beta_exposing(0.3), [0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 1.0, 3.0], [0.0; 3]] {
        let face = classify_exposing(&s, 1e-9)?;
        println!("s = {s:?} exposes {face:?} with generators {:?}", face.generators());
    }
    Ok(())
}
