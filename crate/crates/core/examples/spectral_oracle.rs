//! Zeta-regularized determinant of the twisted flat Laplacian on an
//! elliptic curve, compared with the theta-function formula.

use delpair::theta::{log_theta_norm, Characteristic};
use delpair::torsion::{spectral_det_genus1, SpectralConfig};
use delpair::{c64, PeriodMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tau = c64(0.3, 1.2);
    let omega = PeriodMatrix::from_tau(tau)?;
    let kappa = Characteristic::half(1);
    println!("{:>24} {:>18} {:>18}", "u", "log det Δ", "difference");
    for u in [c64(0.2, 0.1), c64(0.45, 0.7), c64(-0.3, 0.35), c64(0.1, -0.5)] {
        let det = spectral_det_genus1(u, tau, SpectralConfig::default())?;
        let norm = log_theta_norm(&[u], &omega, &kappa)?;
        println!("{:>24} {det:>18.12} {:>18.12}", format!("{u:.3}"), det - norm);
    }
    Ok(())
}
