//! Curvature of the pulled-back intersection connection on twistor space,
//! split by λ-degree, and its residue at λ = 0.

use delpair::surface::EllipticSurface;
use delpair::twistor::{
    connection_residue, fiber_decomposition_check, hklr_forms, pullback_curvature, residue_limit, twistor_to_de_rham,
    SectionTemplate, TwistorPoint,
};
use delpair::{c64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = c64(0.0, 1.0);
    let omega = PeriodMatrix::from_tau(tau)?;
    let tp = TwistorPoint::new(vec![c64(0.2, -0.1)], vec![c64(0.3, 0.4)], c64(0.5, 0.5))?;
    println!("image in M_dR: {:?}", twistor_to_de_rham(&tp)?);

    let f = pullback_curvature(&omega, &tp)?;
    println!("F = {f}");
    let (phi1, phi23) = hklr_forms(&omega);
    println!("Φ₁ = {phi1}\nΦ₂+iΦ₃ = {phi23}");

    let d = fiber_decomposition_check(&omega, &tp)?;
    println!("constants by λ-degree (−1, 0, 1): {:?}", d.constants);
    println!("off-proportionality {:.1e}, spread {:.1e}", d.residual, d.spread);

    let x = EllipticSurface::new(tau)?;
    let l = SectionTemplate {
        q: vec![x.from_coords(0.15, 0.2), x.from_coords(0.6, 0.55)],
        p_rest: vec![x.from_coords(0.35, 0.8)],
    };
    let m = SectionTemplate { q: vec![x.from_coords(0.8, 0.1)], p_rest: vec![] };
    let t = c64(0.02, 0.01);
    let lim = residue_limit(&x, &l, &m, t, c64(0.1, 0.15), &[0.1, 0.05, 0.025])?;
    println!("residue {}", connection_residue(&omega, &[t])?);
    println!("λ·trace samples {:.8?}", lim.samples);
    println!("extrapolated {:.10} vs {:.10} (rel. {:.1e})", lim.extrapolated, lim.expected, lim.relative_error);
    Ok(())
}
