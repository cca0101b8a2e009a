//! Move a flat connection between its de Rham, Betti and Jacobian
//! descriptions.

use delpair::moduli::{
    betti_of_de_rham, jacobian_of_character, jacobian_of_de_rham, unitary_betti, unitary_section, DeRhamPoint,
};
use delpair::{c64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega = PeriodMatrix::from_rows(&[
        vec![c64(0.2, 1.1), c64(0.1, 0.3)],
        vec![c64(0.1, 0.3), c64(-0.3, 1.4)],
    ])?;

    let p = DeRhamPoint::new(vec![c64(0.3, -0.2), c64(0.1, 0.4)], vec![c64(-0.5, 0.2), c64(0.25, 0.1)])?;
    let chi = betti_of_de_rham(&p, &omega)?;
    println!("holonomy exponents a = {:.6?}", chi.a);
    println!("                   b = {:.6?}", chi.b);

    let u = jacobian_of_de_rham(&p, &omega)?;
    println!("Jacobian point u = {:.6?} (lattice shift m={:?}, n={:?})", u.value(&omega), u.m, u.n);

    // the unitary connection with the same holomorphic structure
    let q = unitary_section(&u, &omega);
    println!("unitary section: t = {:.6?}", q.t);
    println!("                 s = {:.6?}", q.s);
    println!("unitary defect |t + s̄| = {:.1e}", q.unitary_defect());

    let chi_u = unitary_betti(&q, &omega)?;
    println!("character of the unitary section is real: max |Im| = {:.1e}", chi_u.max_imag());
    let back = jacobian_of_character(&chi_u, &omega);
    let residual = delpair::moduli::lattice_residual(
        &back.iter().zip(u.value(&omega)).map(|(a, b)| a - b).collect::<Vec<_>>(),
        &omega,
    );
    println!("b − aΩ recovers u up to the lattice: {residual:.1e}");
    Ok(())
}
