//! Building, composing and summing facial residual functions.

use conegauge::frf::{diamond, frf_from_g, pcone_frf, rescaled_shift, sum_product_frf, FrfExpr, GFunction, Term};
use conegauge::pcone::{face_from_exposing, ConePoint, PExponent};
use conegauge::Rational;

fn show(name: &str, f: &FrfExpr) {
    let terms: Vec<String> = f
        .terms()
        .iter()
        .map(|t| format!("{:.4}·ε^{}", t.coeff, t.exponent))
        .collect();
    println!("{name:<28} {}   (dominant exponent {})", terms.join(" + "), f.dominant_exponent());
}

fn main() -> conegauge::Result<()> {
    let half = FrfExpr::new(vec![Term::new(1.0, Rational::new(1, 2))], 1.0)?;
    let third = FrfExpr::new(vec![Term::new(1.0, Rational::new(1, 3))], 1.0)?;
    show("ε^(1/2)", &half);
    show("ε^(1/2) ♦ ε^(1/3)", &diamond(&half, &third)?);
    show("sum of {1/2, 1/3, 1}", &sum_product_frf(&[half.clone(), third, FrfExpr::linear(1.0, 1.0)?], 1.0)?);
    show("2·ψ(4ε), ψ = ε^(1/2)", &rescaled_shift(&half, 4.0, 1.0, 2.0, 0.0)?);

    let p = PExponent::new(1.5)?;
    let ray = face_from_exposing(&ConePoint::new(1.0, vec![-1.0, 0.0]), &p, 1e-10)?;
    show("p-cone ray, p = 1.5, γ̂ = 1", &pcone_frf(&ray, 1.0, 1.0)?);
    show("same ray at t = 0", &pcone_frf(&ray, 0.0, f64::INFINITY)?);

    let g = frf_from_g(GFunction::power(conegauge::Exponent::Exact(Rational::new(1, 2))), 1.0, 3.0)?;
    if let Some(e) = g.to_expr(1.0) {
        show("s + 3·(2s)^(1/2)", &e);
    }
    let tlog = frf_from_g(GFunction::NegTLogT, 1.0, 1.0)?;
    println!("ψ with g = −t·ln t at s = 0.01: {:.6}", tlog.eval(0.01)?);
    Ok(())
}
