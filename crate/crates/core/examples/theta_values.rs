//! Evaluate theta functions with characteristics and inspect the
//! log-scaled representation.

use delpair::theta::{theta, theta_with_gradient, Characteristic};
use delpair::{c64, PeriodMatrix};
use num_rational::Ratio;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let omega = PeriodMatrix::from_rows(&[
        vec![c64(0.1, 1.2), c64(0.3, 0.2)],
        vec![c64(0.3, 0.2), c64(-0.2, 0.9)],
    ])?;
    let z = [c64(0.25, -0.1), c64(0.4, 0.3)];

    let v = theta(&z, &omega, &Characteristic::zero(2), 1e-14)?;
    println!("θ(z, Ω)        = {:.15}", v.value());
    println!("  mantissa     = {:.15}", v.mantissa);
    println!("  exponent     = {:.15}", v.exponent);
    println!("  tail bound   = {:.2e}", v.tail_bound);

    // odd characteristics vanish at the origin
    let half = Ratio::new(1, 2);
    let zero = Ratio::from_integer(0);
    let odd = Characteristic::new(vec![half, zero], vec![half, zero])?;
    let at_origin = theta(&[c64(0.0, 0.0); 2], &omega, &odd, 1e-14)?;
    println!("θ[odd](0, Ω)   = {:.2e}  (parity {:?})", at_origin.value().norm(), odd.parity());

    // shifting by a column of Ω multiplies by exp(−πiΩ_jj − 2πi z_j)
    let shifted: Vec<_> = (0..2).map(|k| z[k] + omega.get(k, 0)).collect();
    let lhs = theta(&shifted, &omega, &Characteristic::zero(2), 1e-14)?.value();
    let factor = (-std::f64::consts::PI * c64(0.0, 1.0) * (omega.get(0, 0) + 2.0 * z[0])).exp();
    println!("quasi-period   = {:.2e}", (lhs - factor * v.value()).norm() / lhs.norm());

    let g = theta_with_gradient(&z, &omega, &Characteristic::zero(2), 1e-14)?;
    println!("∇θ/θ           = {:?}", g.log_gradient().unwrap());

    // far from the origin the value would overflow; the mantissa does not
    let far = theta(&[c64(0.0, 40.0), c64(0.0, -35.0)], &omega, &Characteristic::zero(2), 1e-14)?;
    println!("far point      = {:.6} · e^{:.3}", far.mantissa, far.exponent);
    Ok(())
}
