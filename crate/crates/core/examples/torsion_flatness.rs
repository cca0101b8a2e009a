//! Holomorphic torsion in moduli coordinates and the flatness of the
//! Deligne isomorphism on the unitary locus.

use delpair::moduli::{betti_of_de_rham, DeRhamPoint};
use delpair::torsion::{
    dlog_torsion, flatness_defect, flatness_residual, log_holo_torsion_ab, log_t_kappa, log_t_unitary_x,
    log_t_unitary_xbar, Method, Torsion, TorsionPoint,
};
use delpair::{c64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega = PeriodMatrix::from_tau(c64(1.0, 2.0))?;
    let s = c64(0.3, 0.2);
    let on = TorsionPoint::new(omega.clone(), DeRhamPoint::unitary(vec![s]))?;

    println!("log T(χ⊗κ)        = {:.12}", log_t_kappa(&on)?);
    println!("log T_X(χ_u⊗κ)    = {:.12}", log_t_unitary_x(&on)?);
    println!("log T_X̄(χ_u⁻¹⊗κ̄) = {:.12}", log_t_unitary_xbar(&on)?);

    let a = dlog_torsion(&on, Torsion::Kappa, Method::Analytic)?;
    let f = dlog_torsion(&on, Torsion::Kappa, Method::Fd)?;
    println!("∂log T: analytic {:.10?} vs fd {:.10?}", a.ds, f.ds);

    println!("flatness residual on t = −s̄: {:.1e}", flatness_residual(&on)?);
    let off = TorsionPoint::new(omega.clone(), DeRhamPoint::new(vec![c64(0.5, 0.1)], vec![s])?)?;
    println!("defect off the locus:        {:.3e}", flatness_defect(&off, Method::Analytic)?.max_abs());

    // the same torsion written through the holonomy character
    let chi = betti_of_de_rham(&off.point, &omega)?;
    println!("via (a, b): {:.12}", log_holo_torsion_ab(&chi.a, &chi.b, &omega)?);
    println!("direct:     {:.12}", log_t_kappa(&off)?);
    Ok(())
}
