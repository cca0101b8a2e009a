//! Evaluate the genus-two torsion formula from supplied Prym data.

use delpair::torsion::{general_torsion_from_prym, unitary_torsion_from_prym, PrymData};
use delpair::{c64, Complex64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega = PeriodMatrix::from_rows(&[vec![c64(0.1, 1.1), c64(0.2, 0.3)], vec![c64(0.2, 0.3), c64(-0.3, 0.9)]])?;
    let eta = c64(0.7, -0.4);
    let data = PrymData {
        omega_at_points: vec![vec![c64(1.0, 0.2), c64(0.3, -0.5)], vec![c64(-0.4, 0.1), c64(0.8, 0.6)]],
        prym_at_points: vec![vec![eta]],
        prym_conj_at_points: vec![vec![eta.conj()]],
        pairing: vec![vec![c64(1.3, 0.0)]],
        u0: vec![c64(0.21, 0.13), c64(-0.17, 0.08)],
    };
    let (a, b) = ([0.15, -0.3], [0.4, 0.05]);
    let real = |v: &[f64]| v.iter().map(|x| c64(*x, 0.0)).collect::<Vec<Complex64>>();
    println!("holomorphic formula: {:.12}", general_torsion_from_prym(&data, &real(&a), &real(&b), &omega)?);
    println!("unitary formula:     {:.12}", unitary_torsion_from_prym(&data, &a, &b, &omega)?);

    let complex = general_torsion_from_prym(&data, &[c64(0.1, 0.2), c64(-0.3, 0.0)], &[c64(0.4, -0.1), c64(0.05, 0.3)], &omega)?;
    println!("non-unitary χ:       {complex:.12}");
    Ok(())
}
