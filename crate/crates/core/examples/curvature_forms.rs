//! Curvature of the intersection and trace connections on the universal
//! bundle, as explicit 2-forms.

use delpair::forms::{intersection_curvature, trace_curvature};
use delpair::moduli::{gm_invariant, gm_invariant_unitary};
use delpair::{c64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for omega in [
        PeriodMatrix::from_tau(c64(0.0, 1.0))?,
        PeriodMatrix::from_rows(&[vec![c64(0.1, 1.2), c64(0.3, 0.2)], vec![c64(0.3, 0.2), c64(-0.2, 0.9)]])?,
    ] {
        let g = omega.genus();
        let nu = gm_invariant(g);
        println!("genus {g}");
        println!("  Gauss-Manin invariant: {:?}", nu.components().iter().map(|f| f.to_string()).collect::<Vec<_>>());

        let f = intersection_curvature(&omega, &nu, &nu)?;
        println!("  intersection curvature: {f}");

        let unitary = gm_invariant_unitary(g);
        let a = intersection_curvature(&omega, &nu, &unitary)?;
        let b = trace_curvature(&omega, &nu, &unitary)?;
        println!("  trace vs intersection with unitary M: {:.1e}", a.distance(&b));

        let frozen = nu.freeze_s();
        println!("  flat case: {}", trace_curvature(&omega, &frozen, &frozen)?);
        println!("  as JSON: {}", serde_json::to_string(&f)?);
    }
    Ok(())
}
