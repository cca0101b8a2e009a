//! Riemann theta functions with characteristics.
//!
//! ```text
//! θ[α,β](Z, Ω) = Σ_{n ∈ Zᵍ} exp(πi (n+α)ᵀ Ω (n+α) + 2πi (n+α)ᵀ (Z+β))
//! ```
//!
//! Writing `Y = Im Ω`, `y = Im Z` and `m = n + α`, the modulus of a summand is
//! `exp(π yᵀY⁻¹y) · exp(−π ‖Lᵀ(m + Y⁻¹y)‖²)` with `L` the Cholesky factor of
//! `Y`. The first factor is returned separately as the exponent of a
//! [`ThetaValue`]; the sum runs over the lattice points inside the ellipsoid
//! `‖Lᵀ(n − c)‖ ≤ R`, `c = −α − Y⁻¹y`, and the radius is the smallest one whose
//! tail bound drops below the requested tolerance.
//!
//! The tail bound packs disjoint balls of radius `ρ/2` (`ρ` the shortest
//! lattice vector) around the dropped points and integrates the Gaussian
//! over the complement of the ball of radius `R − ρ/2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;
use thiserror::Error;

use crate::period::PeriodMatrix;

/// Default cap on the truncation radius.
pub const DEFAULT_MAX_RADIUS: f64 = 200.0;

/// Tolerance used by [`theta_norm`] and other callers without an explicit one.
pub const DEFAULT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThetaError {
    #[error("argument has {got} components, period matrix has genus {genus}")]
    GenusMismatch { genus: usize, got: usize },
    #[error("non-finite argument")]
    NonFinite,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("required truncation radius exceeds the cap {cap}")]
    TruncationRadiusOverflow { cap: f64 },
    #[error("characteristic entries must lie in [0, 1)")]
    CharacteristicOutOfRange,
}

/// Theta characteristic `[α, β]` with rational entries in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characteristic {
    alpha: Vec<Ratio<i64>>,
    beta: Vec<Ratio<i64>>,
}

impl Characteristic {
    pub fn new(alpha: Vec<Ratio<i64>>, beta: Vec<Ratio<i64>>) -> Result<Self, ThetaError> {
        if alpha.len() != beta.len() {
            return Err(ThetaError::GenusMismatch {
                genus: alpha.len(),
                got: beta.len(),
            });
        }
        let zero = Ratio::from_integer(0);
        let one = Ratio::from_integer(1);
        if alpha.iter().chain(beta.iter()).any(|r| *r < zero || *r >= one) {
            return Err(ThetaError::CharacteristicOutOfRange);
        }
        Ok(Characteristic { alpha, beta })
    }

    /// The zero characteristic of genus `g`.
    pub fn zero(g: usize) -> Self {
        Characteristic {
            alpha: vec![Ratio::from_integer(0); g],
            beta: vec![Ratio::from_integer(0); g],
        }
    }

    /// `[½…½, ½…½]`; odd in genus one.
    pub fn half(g: usize) -> Self {
        Characteristic {
            alpha: vec![Ratio::new(1, 2); g],
            beta: vec![Ratio::new(1, 2); g],
        }
    }

    pub fn genus(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Ratio<i64>] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Ratio<i64>] {
        &self.beta
    }

    fn alpha_f64(&self) -> Vec<f64> {
        self.alpha.iter().map(ratio_to_f64).collect()
    }

    fn beta_f64(&self) -> Vec<f64> {
        self.beta.iter().map(ratio_to_f64).collect()
    }

    /// Parity `(−1)^{4αᵀβ}` for half-integer characteristics, `None` otherwise.
    pub fn parity(&self) -> Option<i32> {
        let two = Ratio::from_integer(2);
        let mut acc = 0i64;
        for (a, b) in self.alpha.iter().zip(&self.beta) {
            let (a2, b2) = (a * two, b * two);
            if !a2.is_integer() || !b2.is_integer() {
                return None;
            }
            acc += a2.to_integer() * b2.to_integer();
        }
        Some(if acc % 2 == 0 { 1 } else { -1 })
    }
}

fn ratio_to_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Log-scaled theta value: `θ = mantissa · e^{exponent}`.
///
/// The mantissa is the Gaussian-normalized lattice sum; it is rescaled only
/// downwards (to modulus 1) when it exceeds 10, so `tail_bound` stays an
/// absolute bound in the same units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaValue {
    pub mantissa: Complex64,
    pub exponent: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gradient: Option<Vec<Complex64>>,
    pub tail_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient_tail_bound: Option<f64>,
}

impl ThetaValue {
    /// Unscaled value; may overflow for very large `Im Z`.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.exponent.exp()
    }

    /// Principal log of the mantissa plus the exponent.
    pub fn ln(&self) -> Complex64 {
        self.mantissa.ln() + self.exponent
    }

    /// Unscaled gradient.
    pub fn gradient_value(&self) -> Option<Vec<Complex64>> {
        let scale = self.exponent.exp();
        self.gradient
            .as_ref()
            .map(|g| g.iter().map(|d| d * scale).collect())
    }

    /// `∇θ / θ`, independent of the scaling.
    pub fn log_gradient(&self) -> Option<Vec<Complex64>> {
        let m = self.mantissa;
        self.gradient
            .as_ref()
            .map(|g| g.iter().map(|d| d / m).collect())
    }
}

/// Evaluation options.
#[derive(Debug, Clone, Copy)]
pub struct ThetaConfig {
    pub max_radius: f64,
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig {
            max_radius: DEFAULT_MAX_RADIUS,
        }
    }
}

/// `θ[α,β](Z, Ω)` with a certified tail bound `≤ tol`.
pub fn theta(
    z: &[Complex64],
    omega: &PeriodMatrix,
    ch: &Characteristic,
    tol: f64,
) -> Result<ThetaValue, ThetaError> {
    evaluate(z, omega, ch, tol, false, ThetaConfig::default())
}

/// `θ` together with `∂θ/∂Z_i`; both tails bounded by `tol`.
pub fn theta_with_gradient(
    z: &[Complex64],
    omega: &PeriodMatrix,
    ch: &Characteristic,
    tol: f64,
) -> Result<ThetaValue, ThetaError> {
    evaluate(z, omega, ch, tol, true, ThetaConfig::default())
}

/// Gradient `∂θ/∂Z_i`, scaled by `e^{exponent}` of the matching [`ThetaValue`].
pub fn theta_grad(
    z: &[Complex64],
    omega: &PeriodMatrix,
    ch: &Characteristic,
    tol: f64,
) -> Result<Vec<Complex64>, ThetaError> {
    let v = theta_with_gradient(z, omega, ch, tol)?;
    Ok(v.gradient.expect("gradient requested"))
}

/// `‖θ‖²(u, Ω) = exp(−2π Im uᵀ (Im Ω)⁻¹ Im u) |θ(u, Ω)|²` for the zero characteristic.
pub fn theta_norm(u: &[Complex64], omega: &PeriodMatrix) -> Result<f64, ThetaError> {
    Ok(log_theta_norm(u, omega, &Characteristic::zero(omega.genus()))?.exp())
}

/// `log ‖θ[α,β]‖²(u, Ω)`.
///
/// The Gaussian prefactor of the log-scaled value cancels the exponential
/// weight exactly, so this is `2 log |mantissa|` up to the downward rescaling.
pub fn log_theta_norm(
    u: &[Complex64],
    omega: &PeriodMatrix,
    ch: &Characteristic,
) -> Result<f64, ThetaError> {
    let v = theta(u, omega, ch, DEFAULT_TOL)?;
    let y: Vec<f64> = u.iter().map(|z| z.im).collect();
    let quad = quadratic_form(omega.imag_inverse(), &y);
    Ok(2.0 * (v.mantissa.norm().ln() + v.exponent) - 2.0 * PI * quad)
}

/// Full evaluator with explicit configuration.
pub fn evaluate(
    z: &[Complex64],
    omega: &PeriodMatrix,
    ch: &Characteristic,
    tol: f64,
    with_gradient: bool,
    config: ThetaConfig,
) -> Result<ThetaValue, ThetaError> {
    let g = omega.genus();
    if z.len() != g {
        return Err(ThetaError::GenusMismatch { genus: g, got: z.len() });
    }
    if ch.genus() != g {
        return Err(ThetaError::GenusMismatch {
            genus: g,
            got: ch.genus(),
        });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ThetaError::BadTolerance(tol));
    }
    if z.iter().any(|w| !(w.re.is_finite() && w.im.is_finite())) {
        return Err(ThetaError::NonFinite);
    }

    let alpha = ch.alpha_f64();
    let beta = ch.beta_f64();
    let x: Vec<f64> = z.iter().map(|w| w.re).collect();
    let y: Vec<f64> = z.iter().map(|w| w.im).collect();
    let yinv = omega.imag_inverse();
    let shift: Vec<f64> = (0..g)
        .map(|i| (0..g).map(|j| yinv[(i, j)] * y[j]).sum())
        .collect();
    let exponent = PI * y.iter().zip(&shift).map(|(a, b)| a * b).sum::<f64>();
    let center: Vec<f64> = (0..g).map(|i| -alpha[i] - shift[i]).collect();

    let upper = omega.imag_cholesky().transpose();
    let rho = omega.shortest_lattice_length();

    let grad_weights = if with_gradient {
        let uinv = upper
            .clone()
            .try_inverse()
            .expect("Cholesky factor is invertible");
        let row_norm = (0..g)
            .map(|i| uinv.row(i).norm())
            .fold(0.0_f64, f64::max);
        let offset = shift.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        Some((row_norm, offset))
    } else {
        None
    };

    let bound_at = |r: f64| -> (f64, Option<f64>) {
        let value = tail_bound(g, rho, r, &value_polynomial(g, rho));
        let grad = grad_weights.map(|(row_norm, offset)| {
            let b1 = tail_bound(g, rho, r, &gradient_polynomial(g, rho));
            2.0 * PI * (row_norm * b1 + offset * value)
        });
        (value, grad)
    };

    let mut radius = rho;
    let (tail, grad_tail) = loop {
        let (b, gb) = bound_at(radius);
        if b < tol && gb.map_or(true, |v| v < tol) {
            break (b, gb);
        }
        radius += 0.125;
        if radius > config.max_radius {
            return Err(ThetaError::TruncationRadiusOverflow {
                cap: config.max_radius,
            });
        }
    };

    let real = omega.real();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut grad = vec![Complex64::new(0.0, 0.0); if with_gradient { g } else { 0 }];
    let mut m = vec![0.0; g];
    enumerate_ellipsoid(&upper, &center, radius, |n, norm2| {
        for i in 0..g {
            m[i] = n[i] as f64 + alpha[i];
        }
        let mut phase = PI * quadratic_form(&real, &m);
        for i in 0..g {
            phase += 2.0 * PI * m[i] * (x[i] + beta[i]);
        }
        let term = Complex64::from_polar((-PI * norm2).exp(), phase);
        sum += term;
        if with_gradient {
            for i in 0..g {
                grad[i] += term * Complex64::new(0.0, 2.0 * PI * m[i]);
            }
        }
    });

    let mut value = ThetaValue {
        mantissa: sum,
        exponent,
        gradient: with_gradient.then_some(grad),
        tail_bound: tail,
        gradient_tail_bound: grad_tail,
    };
    let modulus = sum.norm();
    if modulus > 10.0 {
        value.mantissa /= modulus;
        value.exponent += modulus.ln();
        value.tail_bound /= modulus;
        if let Some(gr) = value.gradient.as_mut() {
            for d in gr.iter_mut() {
                *d /= modulus;
            }
        }
        if let Some(gt) = value.gradient_tail_bound.as_mut() {
            *gt /= modulus;
        }
    }
    Ok(value)
}

/// `vᵀ M v` for real `M`.
pub(crate) fn quadratic_form(m: &DMatrix<f64>, v: &[f64]) -> f64 {
    let g = v.len();
    let mut acc = 0.0;
    for i in 0..g {
        for j in 0..g {
            acc += v[i] * m[(i, j)] * v[j];
        }
    }
    acc
}

/// Visits every `n ∈ Zᵍ` with `‖U(n − c)‖ ≤ radius`, passing `‖U(n − c)‖²`.
///
/// `U` must be upper triangular with positive diagonal.
pub fn enumerate_ellipsoid<F>(upper: &DMatrix<f64>, center: &[f64], radius: f64, mut visit: F)
where
    F: FnMut(&[i64], f64),
{
    let g = center.len();
    let mut n = vec![0i64; g];
    recurse(upper, center, radius * radius, g, 0.0, &mut n, &mut visit);
}

fn recurse<F>(
    upper: &DMatrix<f64>,
    center: &[f64],
    r2: f64,
    level: usize,
    acc: f64,
    n: &mut [i64],
    visit: &mut F,
) where
    F: FnMut(&[i64], f64),
{
    if level == 0 {
        visit(n, acc);
        return;
    }
    let k = level - 1;
    let g = center.len();
    let diag = upper[(k, k)];
    let mut offset = 0.0;
    for j in (k + 1)..g {
        offset += upper[(k, j)] * (n[j] as f64 - center[j]);
    }
    let remaining = r2 - acc;
    if remaining < 0.0 {
        return;
    }
    let half_width = remaining.sqrt() / diag;
    let mid = center[k] - offset / diag;
    let lo = (mid - half_width).ceil() as i64;
    let hi = (mid + half_width).floor() as i64;
    for nk in lo..=hi {
        n[k] = nk;
        let t = diag * (nk as f64 - center[k]) + offset;
        let next = acc + t * t;
        if next <= r2 {
            recurse(upper, center, r2, k, next, n, visit);
        }
    }
    n[k] = 0;
}

/// Coefficients (ascending) of `(x + ρ/2)^{g−1}`.
fn value_polynomial(g: usize, rho: f64) -> Vec<f64> {
    let mut p = vec![1.0];
    for _ in 1..g {
        p = poly_mul_linear(&p, rho / 2.0);
    }
    p
}

/// Coefficients of `(x + ρ/2)^{g−1} (x + ρ)`.
fn gradient_polynomial(g: usize, rho: f64) -> Vec<f64> {
    poly_mul_linear(&value_polynomial(g, rho), rho)
}

fn poly_mul_linear(p: &[f64], a: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k] += a * c;
        out[k + 1] += c;
    }
    out
}

/// Bound on `Σ_{‖v‖>R} w(‖v‖) e^{−π‖v‖²}` over a lattice with minimal distance `ρ`,
/// where the weight is majorized by `poly(r − ρ/2)/(r − ρ/2 + ρ/2)^{g−1}` after
/// the ball packing; requires `R ≥ ρ`.
fn tail_bound(g: usize, rho: f64, radius: f64, poly: &[f64]) -> f64 {
    let a = (radius - rho).max(0.0);
    let prefactor = g as f64 / (rho / 2.0).powi(g as i32);
    let integral: f64 = poly
        .iter()
        .enumerate()
        .map(|(k, c)| c * gaussian_moment_tail(k, a))
        .sum();
    prefactor * integral
}

/// `∫_a^∞ x^k e^{−πx²} dx = ½ π^{−(k+1)/2} Γ((k+1)/2, πa²)`.
fn gaussian_moment_tail(k: usize, a: f64) -> f64 {
    let s = (k as f64 + 1.0) / 2.0;
    0.5 * PI.powf(-s) * upper_gamma_half_integer(k + 1, PI * a * a)
}

/// `Γ(j/2, x)` for positive integer `j`.
fn upper_gamma_half_integer(j: usize, x: f64) -> f64 {
    // Γ(a+1, x) = a Γ(a, x) + x^a e^{−x}
    let (mut a, mut value) = if j % 2 == 1 {
        (0.5, PI.sqrt() * erfc(x.sqrt()))
    } else {
        (1.0, (-x).exp())
    };
    let target = j as f64 / 2.0;
    while a < target - 1e-12 {
        value = a * value + x.powf(a) * (-x).exp();
        a += 1.0;
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tau_i() -> PeriodMatrix {
        PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap()
    }

    /// Direct sum over |n| ≤ 20, independent of the ellipsoid machinery.
    fn brute_theta1(z: Complex64, tau: Complex64, a: f64, b: f64) -> Complex64 {
        (-20..=20)
            .map(|n| {
                let m = n as f64 + a;
                (Complex64::i() * PI * m * m * tau + Complex64::i() * 2.0 * PI * m * (z + b)).exp()
            })
            .sum()
    }

    #[test]
    fn theta_at_origin_matches_direct_sum() {
        let v = theta(&[c(0.0, 0.0)], &tau_i(), &Characteristic::zero(1), 1e-12).unwrap();
        let oracle = brute_theta1(c(0.0, 0.0), c(0.0, 1.0), 0.0, 0.0);
        assert!((oracle.re - 1.0864348112133080).abs() < 1e-12);
        assert!((v.value() - oracle).norm() < 1e-10);
        assert!(v.tail_bound <= 1e-12);
    }

    #[test]
    fn odd_characteristic_vanishes_at_origin() {
        let v = theta(&[c(0.0, 0.0)], &tau_i(), &Characteristic::half(1), 1e-12).unwrap();
        assert!(v.value().norm() < 1e-14);
    }

    #[test]
    fn integer_shift_periodicity() {
        let z = c(0.3, 0.1);
        let a = theta(&[z], &tau_i(), &Characteristic::zero(1), 1e-14).unwrap();
        let b = theta(&[z + 1.0], &tau_i(), &Characteristic::zero(1), 1e-14).unwrap();
        assert!(((a.value() - b.value()) / a.value()).norm() < 1e-12);
    }

    #[test]
    fn gradient_zero_for_even_at_origin() {
        let om = PeriodMatrix::from_rows(&[
            vec![c(0.1, 1.2), c(0.3, 0.4)],
            vec![c(0.3, 0.4), c(-0.2, 1.5)],
        ])
        .unwrap();
        let g = theta_grad(&[c(0.0, 0.0); 2], &om, &Characteristic::zero(2), 1e-12).unwrap();
        assert!(g.iter().all(|d| d.norm() < 1e-12));
    }

    #[test]
    fn odd_gradient_at_origin_matches_differentiated_sum() {
        let v = theta_with_gradient(&[c(0.0, 0.0)], &tau_i(), &Characteristic::half(1), 1e-12)
            .unwrap();
        let oracle: Complex64 = (-20..=20)
            .map(|n| {
                let m = n as f64 + 0.5;
                Complex64::i()
                    * 2.0
                    * PI
                    * m
                    * (Complex64::i() * PI * m * m * c(0.0, 1.0) + Complex64::i() * PI * m).exp()
            })
            .sum();
        let got = v.gradient_value().unwrap()[0];
        assert!(oracle.norm() > 1.0);
        assert!((got - oracle).norm() < 1e-10);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let z = c(0.2, 0.0);
        let ch = Characteristic::zero(1);
        let g = theta_with_gradient(&[z], &tau_i(), &ch, 1e-14).unwrap();
        let h = 1e-5;
        let fp = theta(&[z + h], &tau_i(), &ch, 1e-14).unwrap().value();
        let fm = theta(&[z - h], &tau_i(), &ch, 1e-14).unwrap().value();
        let fd = (fp - fm) / (2.0 * h);
        let an = g.gradient_value().unwrap()[0];
        assert!(((an - fd) / an).norm() < 1e-6);
    }

    #[test]
    fn large_imaginary_part_does_not_overflow() {
        let v = theta(&[c(0.1, 30.0)], &tau_i(), &Characteristic::zero(1), 1e-12).unwrap();
        assert!(v.mantissa.norm().is_finite() && v.exponent > 1000.0);
        assert!(v.mantissa.norm() <= 10.0);
        // Quasi-periodicity relates it to a moderate argument.
        let w = c(0.1, 30.0) - c(0.0, 30.0);
        let base = theta(&[w], &tau_i(), &Characteristic::zero(1), 1e-14).unwrap();
        // θ(w + 30τ) = exp(−πi·900τ − 2πi·30w) θ(w)
        let factor_ln = -Complex64::i() * PI * 900.0 * c(0.0, 1.0) - Complex64::i() * 2.0 * PI * 30.0 * w;
        let lhs = v.ln();
        let rhs = base.ln() + factor_ln;
        let d = lhs - rhs;
        assert!(d.re.abs() < 1e-10);
        let k = (d.im / (2.0 * PI)).round();
        assert!((d.im - 2.0 * PI * k).abs() < 1e-9);
    }

    #[test]
    fn radius_cap_reported() {
        let cfg = ThetaConfig { max_radius: 1.5 };
        let err = evaluate(&[c(0.0, 0.0)], &tau_i(), &Characteristic::zero(1), 1e-14, false, cfg)
            .unwrap_err();
        assert!(matches!(err, ThetaError::TruncationRadiusOverflow { .. }));
    }

    #[test]
    fn errors_on_bad_input() {
        let om = tau_i();
        let ch = Characteristic::zero(1);
        assert!(matches!(
            theta(&[c(0.0, 0.0); 2], &om, &ch, 1e-10),
            Err(ThetaError::GenusMismatch { .. })
        ));
        assert!(matches!(
            theta(&[c(0.0, 0.0)], &om, &ch, 0.0),
            Err(ThetaError::BadTolerance(_))
        ));
        assert!(matches!(
            theta(&[c(f64::INFINITY, 0.0)], &om, &ch, 1e-10),
            Err(ThetaError::NonFinite)
        ));
        assert!(Characteristic::new(vec![Ratio::new(3, 2)], vec![Ratio::new(0, 1)]).is_err());
    }

    #[test]
    fn parity_of_half_characteristics() {
        assert_eq!(Characteristic::half(1).parity(), Some(-1));
        assert_eq!(Characteristic::zero(3).parity(), Some(1));
        assert_eq!(Characteristic::half(2).parity(), Some(1));
        let third = Characteristic::new(vec![Ratio::new(1, 3)], vec![Ratio::new(0, 1)]).unwrap();
        assert_eq!(third.parity(), None);
    }

    #[test]
    fn theta_norm_examples() {
        let om = tau_i();
        let u = c(0.37, 0.0);
        let v = theta(&[u], &om, &Characteristic::zero(1), 1e-15).unwrap().value();
        assert!((theta_norm(&[u], &om).unwrap() - v.norm_sqr()).abs() < 1e-13);
        let u = c(0.3, 0.4);
        let base = theta_norm(&[u], &om).unwrap();
        let shifted = theta_norm(&[u + 1.0], &om).unwrap();
        let by_tau = theta_norm(&[u + c(0.0, 1.0)], &om).unwrap();
        assert!(((base - shifted) / base).abs() < 1e-10);
        assert!(((base - by_tau) / base).abs() < 1e-10);
    }

    #[test]
    fn tail_bound_dominates_actual_tail() {
        // Compare the bound at a small radius with the true dropped mass.
        let om = PeriodMatrix::from_tau(c(0.2, 0.7)).unwrap();
        let upper = om.imag_cholesky().transpose();
        let rho = om.shortest_lattice_length();
        let center = [0.37];
        for r in [rho, rho + 0.5, rho + 1.0, rho + 2.0] {
            let mut inside = 0.0;
            enumerate_ellipsoid(&upper, &center, r, |_, n2| inside += (-PI * n2).exp());
            let mut total = 0.0;
            enumerate_ellipsoid(&upper, &center, 30.0, |_, n2| total += (-PI * n2).exp());
            let bound = tail_bound(1, rho, r, &value_polynomial(1, rho));
            assert!(total - inside <= bound * (1.0 + 1e-12), "r={r}");
        }
    }
}
