//! Holomorphic analytic torsion in moduli coordinates.
//!
//! Every torsion value is returned as a logarithm relative to the unknown
//! metric constant `C(X)`; checks only ever use derivatives or differences,
//! so that constant never enters.
//!
//! With `Y = Im Ω`, `θ₁ = θ(Ys/π, Ω)` and `θ₂ = θ(Yt/π, −Ω̄)`:
//!
//! ```text
//! log T(χ⊗κ)          = (1/2π)(t+s)ᵀY(t+s) + log θ₁ + log θ₂
//! log T_X(χ_u⊗κ)      = (1/2π)(s−s̄)ᵀY(s−s̄) + log|θ₁|²
//! log T_X̄(χ_u⁻¹⊗κ̄)    = (1/2π)(t−t̄)ᵀY(t−t̄) + log|θ₂|²
//! ```

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::fd::{wirtinger_fd, FdError, Scheme};
use crate::moduli::DeRhamPoint;
use crate::period::{real_mat_vec, PeriodError, PeriodMatrix};
use crate::surface::mod_two_pi_i;
use crate::theta::{theta, theta_with_gradient, Characteristic, ThetaError, ThetaValue};

/// `|mantissa|` below which a theta factor counts as a zero.
pub const THETA_ZERO: f64 = 1e-10;

/// Step of the finite-difference derivative method.
pub const FD_STEP: f64 = 1e-5;

const THETA_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TorsionError {
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error("theta vanishes at {argument:?}: the torsion is zero here")]
    ThetaZeroOnDivisor { argument: Vec<Complex64> },
    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error("point is off the unitary locus (|t + s̄| = {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("Prym data needs genus at least 2")]
    GenusTooSmall,
    #[error("singular Prym matrix: {which}")]
    SingularPrymMatrix { which: &'static str },
    #[error("trivial character: the Laplacian has a zero mode")]
    TrivialCharacter,
    #[error(transparent)]
    FiniteDifference(#[from] FdError),
}

/// Moduli point with its period matrix.
#[derive(Debug, Clone)]
pub struct TorsionPoint {
    pub omega: PeriodMatrix,
    pub point: DeRhamPoint,
}

impl TorsionPoint {
    pub fn new(omega: PeriodMatrix, point: DeRhamPoint) -> Result<Self, TorsionError> {
        if omega.genus() != point.genus() {
            return Err(TorsionError::GenusMismatch {
                expected: omega.genus(),
                got: point.genus(),
            });
        }
        Ok(TorsionPoint { omega, point })
    }

    fn with(&self, t: Vec<Complex64>, s: Vec<Complex64>) -> TorsionPoint {
        TorsionPoint {
            omega: self.omega.clone(),
            point: DeRhamPoint { t, s },
        }
    }
}

/// Which torsion function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Torsion {
    /// `T(χ⊗κ)`, holomorphic in `(t, s)`.
    Kappa,
    /// `T_X(χ_u⊗κ)`, a function of `s`.
    UnitaryX,
    /// `T_X̄(χ_u⁻¹⊗κ̄)`, a function of `t`.
    UnitaryXbar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Fd,
}

/// `Σ_j dt_j·dt[j] + ds_j·ds[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub dt: Vec<Complex64>,
    pub ds: Vec<Complex64>,
}

impl Covector {
    pub fn zero(g: usize) -> Self {
        Covector {
            dt: vec![Complex64::new(0.0, 0.0); g],
            ds: vec![Complex64::new(0.0, 0.0); g],
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.dt
            .iter()
            .chain(&self.ds)
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Covector) -> Covector {
        let d = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x - y).collect();
        Covector {
            dt: d(&self.dt, &other.dt),
            ds: d(&self.ds, &other.ds),
        }
    }

    pub fn add(&self, other: &Covector) -> Covector {
        let d = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Covector {
            dt: d(&self.dt, &other.dt),
            ds: d(&self.ds, &other.ds),
        }
    }
}

fn scaled_argument(omega: &PeriodMatrix, v: &[Complex64]) -> Vec<Complex64> {
    real_mat_vec(omega.imag(), v).into_iter().map(|z| z / PI).collect()
}

fn theta_checked(z: &[Complex64], omega: &PeriodMatrix, gradient: bool) -> Result<ThetaValue, TorsionError> {
    let ch = Characteristic::zero(omega.genus());
    let v = if gradient {
        theta_with_gradient(z, omega, &ch, THETA_TOL)?
    } else {
        theta(z, omega, &ch, THETA_TOL)?
    };
    if v.mantissa.norm() < THETA_ZERO {
        return Err(TorsionError::ThetaZeroOnDivisor { argument: z.to_vec() });
    }
    Ok(v)
}

fn quad(omega: &PeriodMatrix, v: &[Complex64]) -> Complex64 {
    let yv = real_mat_vec(omega.imag(), v);
    v.iter().zip(&yv).map(|(a, b)| a * b).sum()
}

/// `log T(χ⊗κ) − log C(X)`, principal branch per theta factor.
pub fn log_t_kappa(pt: &TorsionPoint) -> Result<Complex64, TorsionError> {
    let (t, s) = (&pt.point.t, &pt.point.s);
    let sum: Vec<Complex64> = t.iter().zip(s).map(|(a, b)| a + b).collect();
    let th1 = theta_checked(&scaled_argument(&pt.omega, s), &pt.omega, false)?;
    let th2 = theta_checked(&scaled_argument(&pt.omega, t), &pt.omega.conjugate_surface(), false)?;
    Ok(quad(&pt.omega, &sum) / (2.0 * PI) + th1.ln() + th2.ln())
}

fn log_abs2(v: &ThetaValue) -> f64 {
    2.0 * (v.mantissa.norm().ln() + v.exponent)
}

/// `log T_X(χ_u⊗κ) − log C(X)`.
pub fn log_t_unitary_x(pt: &TorsionPoint) -> Result<f64, TorsionError> {
    let s = &pt.point.s;
    let diff: Vec<Complex64> = s.iter().map(|z| z - z.conj()).collect();
    let th = theta_checked(&scaled_argument(&pt.omega, s), &pt.omega, false)?;
    Ok(quad(&pt.omega, &diff).re / (2.0 * PI) + log_abs2(&th))
}

/// `log T_X̄(χ_u⁻¹⊗κ̄) − log C(X)`.
pub fn log_t_unitary_xbar(pt: &TorsionPoint) -> Result<f64, TorsionError> {
    let t = &pt.point.t;
    let diff: Vec<Complex64> = t.iter().map(|z| z - z.conj()).collect();
    let th = theta_checked(&scaled_argument(&pt.omega, t), &pt.omega.conjugate_surface(), false)?;
    Ok(quad(&pt.omega, &diff).re / (2.0 * PI) + log_abs2(&th))
}

/// Log of the selected torsion as a complex number.
pub fn log_torsion(pt: &TorsionPoint, which: Torsion) -> Result<Complex64, TorsionError> {
    Ok(match which {
        Torsion::Kappa => log_t_kappa(pt)?,
        Torsion::UnitaryX => Complex64::new(log_t_unitary_x(pt)?, 0.0),
        Torsion::UnitaryXbar => Complex64::new(log_t_unitary_xbar(pt)?, 0.0),
    })
}

/// `(1/π) Σ_i Y_ij ∂_iθ/θ`.
fn theta_term(omega: &PeriodMatrix, v: &ThetaValue) -> Vec<Complex64> {
    let lg = v.log_gradient().expect("gradient requested");
    let g = omega.genus();
    (0..g)
        .map(|j| (0..g).map(|i| omega.imag()[(i, j)] * lg[i]).sum::<Complex64>() / PI)
        .collect()
}

fn analytic_dlog(pt: &TorsionPoint, which: Torsion) -> Result<Covector, TorsionError> {
    let om = &pt.omega;
    let (t, s) = (&pt.point.t, &pt.point.s);
    let g = om.genus();
    let lin = |v: Vec<Complex64>| -> Vec<Complex64> { real_mat_vec(om.imag(), &v).into_iter().map(|z| z / PI).collect() };
    let th_s = || theta_checked(&scaled_argument(om, s), om, true);
    let th_t = || theta_checked(&scaled_argument(om, t), &om.conjugate_surface(), true);
    let add = |a: Vec<Complex64>, b: Vec<Complex64>| -> Vec<Complex64> { a.iter().zip(&b).map(|(x, y)| x + y).collect() };
    let mut out = Covector::zero(g);
    match which {
        Torsion::Kappa => {
            let q = lin(t.iter().zip(s).map(|(a, b)| a + b).collect());
            out.dt = add(q.clone(), theta_term(om, &th_t()?));
            out.ds = add(q, theta_term(om, &th_s()?));
        }
        Torsion::UnitaryX => {
            let q = lin(s.iter().map(|z| z - z.conj()).collect());
            out.ds = add(q, theta_term(om, &th_s()?));
        }
        Torsion::UnitaryXbar => {
            let q = lin(t.iter().map(|z| z - z.conj()).collect());
            out.dt = add(q, theta_term(om, &th_t()?));
        }
    }
    Ok(out)
}

fn fd_dlog(pt: &TorsionPoint, which: Torsion) -> Result<Covector, TorsionError> {
    let g = pt.omega.genus();
    let reference = log_torsion(pt, which)?;
    let eval = |p: &TorsionPoint| match log_torsion(p, which) {
        Ok(v) => mod_two_pi_i(v - reference),
        Err(_) => Complex64::new(f64::NAN, 0.0),
    };
    let mut out = Covector::zero(g);
    for j in 0..g {
        out.dt[j] = wirtinger_fd(
            |w| {
                let mut t = pt.point.t.clone();
                t[j] = w;
                eval(&pt.with(t, pt.point.s.clone()))
            },
            pt.point.t[j],
            FD_STEP,
            Scheme::Central,
        )?;
        out.ds[j] = wirtinger_fd(
            |w| {
                let mut s = pt.point.s.clone();
                s[j] = w;
                eval(&pt.with(pt.point.t.clone(), s))
            },
            pt.point.s[j],
            FD_STEP,
            Scheme::Central,
        )?;
    }
    Ok(out)
}

/// `(1,0)`-part of `d log T` in `(t, s)`.
///
/// The analytic method uses `∂θ/θ`, i.e. true logarithmic derivatives of the
/// theta factors.
pub fn dlog_torsion(pt: &TorsionPoint, which: Torsion, method: Method) -> Result<Covector, TorsionError> {
    match method {
        Method::Analytic => analytic_dlog(pt, which),
        Method::Fd => fd_dlog(pt, which),
    }
}

/// `∂log T(χ⊗κ) − ∂log T_X(χ_u⊗κ) − ∂log T_X̄(χ_u⁻¹⊗κ̄)` at any point.
pub fn flatness_defect(pt: &TorsionPoint, method: Method) -> Result<Covector, TorsionError> {
    let k = dlog_torsion(pt, Torsion::Kappa, method)?;
    let x = dlog_torsion(pt, Torsion::UnitaryX, method)?;
    let xb = dlog_torsion(pt, Torsion::UnitaryXbar, method)?;
    Ok(k.sub(&x.add(&xb)))
}

/// Largest component of [`flatness_defect`]; requires `t = −s̄`.
pub fn flatness_residual(pt: &TorsionPoint) -> Result<f64, TorsionError> {
    let defect = pt.point.unitary_defect();
    if defect > 1e-12 {
        return Err(TorsionError::NotUnitary { defect });
    }
    Ok(flatness_defect(pt, Method::Analytic)?.max_abs())
}

fn check_len(omega: &PeriodMatrix, v: &[Complex64]) -> Result<(), TorsionError> {
    if v.len() != omega.genus() {
        return Err(TorsionError::GenusMismatch {
            expected: omega.genus(),
            got: v.len(),
        });
    }
    Ok(())
}

/// `log` of `exp(−2π aᵀYa) θ(b − aᵀΩ, Ω) θ(b − aᵀΩ̄, −Ω̄)`, relative to `C(X)`.
pub fn log_holo_torsion_ab(a: &[Complex64], b: &[Complex64], omega: &PeriodMatrix) -> Result<Complex64, TorsionError> {
    check_len(omega, a)?;
    check_len(omega, b)?;
    let g = omega.genus();
    let z1: Vec<Complex64> = (0..g)
        .map(|j| b[j] - (0..g).map(|k| a[k] * omega.get(k, j)).sum::<Complex64>())
        .collect();
    let z2: Vec<Complex64> = (0..g)
        .map(|j| b[j] - (0..g).map(|k| a[k] * omega.get(k, j).conj()).sum::<Complex64>())
        .collect();
    let ch = Characteristic::zero(g);
    let th1 = theta(&z1, omega, &ch, THETA_TOL)?;
    let th2 = theta(&z2, &omega.conjugate_surface(), &ch, THETA_TOL)?;
    Ok(-2.0 * PI * quad(omega, a) + th1.ln() + th2.ln())
}

/// `exp(−2π aᵀYa) θ(b − aᵀΩ, Ω) θ(b − aᵀΩ̄, −Ω̄)`, relative to `C(X)`.
pub fn holo_torsion_ab(a: &[Complex64], b: &[Complex64], omega: &PeriodMatrix) -> Result<Complex64, TorsionError> {
    Ok(log_holo_torsion_ab(a, b, omega)?.exp())
}

/// Prym-differential data entering the general torsion formula.
///
/// Matrices are row-major with `η_i` along rows and points along columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrymData {
    /// `ω_i(p_j)`, `g × g`.
    pub omega_at_points: Vec<Vec<Complex64>>,
    /// `η_i(p_j, χ)`, `(g−1) × (g−1)`.
    pub prym_at_points: Vec<Vec<Complex64>>,
    /// `η_i(p̄_j, χ⁻¹)`, `(g−1) × (g−1)`.
    pub prym_conj_at_points: Vec<Vec<Complex64>>,
    /// `(η_i(χ), η_j(χ⁻¹))`, `(g−1) × (g−1)`.
    pub pairing: Vec<Vec<Complex64>>,
    /// `u₀ = κ − Σ_{i<g} p_i`.
    pub u0: Vec<Complex64>,
}

fn det(rows: &[Vec<Complex64>], size: usize, which: &'static str) -> Result<Complex64, TorsionError> {
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(TorsionError::SingularPrymMatrix { which });
    }
    if size == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let m = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
    let d = m.clone().lu().determinant();
    let scale: f64 = rows
        .iter()
        .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .product();
    if !(d.norm() > 1e-13 * scale) {
        return Err(TorsionError::SingularPrymMatrix { which });
    }
    Ok(d)
}

struct PrymParts {
    det_omega: Complex64,
    det_pairing: Complex64,
    det_prym: Complex64,
    det_prym_conj: Complex64,
    grad_term: Complex64,
    y_u0: Vec<Complex64>,
}

fn prym_parts(pd: &PrymData, omega: &PeriodMatrix) -> Result<PrymParts, TorsionError> {
    let g = omega.genus();
    if g < 2 {
        return Err(TorsionError::GenusTooSmall);
    }
    check_len(omega, &pd.u0)?;
    let det_omega = det(&pd.omega_at_points, g, "ω_i(p_j)")?;
    let det_pairing = det(&pd.pairing, g - 1, "pairing")?;
    let det_prym = det(&pd.prym_at_points, g - 1, "η_i(p_j)")?;
    let det_prym_conj = det(&pd.prym_conj_at_points, g - 1, "η_i(p̄_j)")?;
    let tv = theta_with_gradient(&pd.u0, omega, &Characteristic::zero(g), THETA_TOL)?;
    let grad = tv.gradient_value().expect("gradient requested");
    let grad_term: Complex64 = (0..g).map(|i| grad[i] * pd.omega_at_points[i][g - 1]).sum();
    let column: f64 = (0..g).map(|i| pd.omega_at_points[i][g - 1].norm_sqr()).sum::<f64>().sqrt();
    // ∇θ vanishes identically at the even half-periods
    if !(grad_term.norm() > 1e-12 * column * tv.value().norm().max(1.0)) {
        return Err(TorsionError::SingularPrymMatrix { which: "Σ ∂θ(u₀) ω_i(p_g)" });
    }
    Ok(PrymParts {
        det_omega,
        det_pairing,
        det_prym,
        det_prym_conj,
        grad_term,
        y_u0: pd.u0.clone(),
    })
}

/// The general holomorphic torsion formula evaluated on supplied Prym data,
/// exactly as displayed, including the `−ū₀` shift in the second theta factor.
pub fn general_torsion_from_prym(
    pd: &PrymData,
    a: &[Complex64],
    b: &[Complex64],
    omega: &PeriodMatrix,
) -> Result<Complex64, TorsionError> {
    check_len(omega, a)?;
    check_len(omega, b)?;
    let parts = prym_parts(pd, omega)?;
    let g = omega.genus();
    let im_u0_dot_a: Complex64 = parts.y_u0.iter().zip(a).map(|(u, x)| u.im * x).sum();
    let prefactor = 4.0 * PI * PI * parts.det_omega.norm_sqr() * (4.0 * PI * im_u0_dot_a - 2.0 * PI * quad(omega, a)).exp();
    let z1: Vec<Complex64> = (0..g)
        .map(|j| b[j] - (0..g).map(|k| a[k] * omega.get(k, j)).sum::<Complex64>() + pd.u0[j])
        .collect();
    let z2: Vec<Complex64> = (0..g)
        .map(|j| b[j] - (0..g).map(|k| a[k] * omega.get(k, j).conj()).sum::<Complex64>() - pd.u0[j].conj())
        .collect();
    let ch = Characteristic::zero(g);
    let th1 = theta(&z1, omega, &ch, THETA_TOL)?.value();
    let th2 = theta(&z2, &omega.conjugate_surface(), &ch, THETA_TOL)?.value();
    Ok(prefactor * parts.det_pairing / (parts.det_prym * parts.det_prym_conj) * th1 * th2 / parts.grad_term.norm_sqr())
}

/// The torsion formula for unitary characters on the same data:
/// `|θ(u + u₀)|²` in place of the two holomorphic factors, `u = b − aᵀΩ`.
pub fn unitary_torsion_from_prym(
    pd: &PrymData,
    a: &[f64],
    b: &[f64],
    omega: &PeriodMatrix,
) -> Result<Complex64, TorsionError> {
    let g = omega.genus();
    if a.len() != g || b.len() != g {
        return Err(TorsionError::GenusMismatch {
            expected: g,
            got: a.len().min(b.len()),
        });
    }
    let parts = prym_parts(pd, omega)?;
    let ac: Vec<Complex64> = a.iter().map(|x| Complex64::new(*x, 0.0)).collect();
    let im_u0_dot_a: f64 = parts.y_u0.iter().zip(a).map(|(u, x)| u.im * x).sum();
    let prefactor = 4.0 * PI * PI * parts.det_omega.norm_sqr() * (4.0 * PI * im_u0_dot_a - 2.0 * PI * quad(omega, &ac).re).exp();
    let z: Vec<Complex64> = (0..g)
        .map(|j| b[j] - (0..g).map(|k| a[k] * omega.get(k, j)).sum::<Complex64>() + pd.u0[j])
        .collect();
    let th = theta(&z, omega, &Characteristic::zero(g), THETA_TOL)?.value();
    Ok(prefactor * parts.det_pairing / parts.det_prym.norm_sqr() * th.norm_sqr() / parts.grad_term.norm_sqr())
}

/// Truncation of the genus-one spectral oracle.
#[derive(Debug, Clone, Copy)]
pub struct SpectralConfig {
    /// Heat time separating the eigenvalue sum from the Poisson-dual sum.
    pub split_time: f64,
    /// Terms with exponent beyond this are dropped.
    pub cutoff: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            split_time: 1.0,
            cutoff: 46.0,
        }
    }
}

/// Exponential integral `E₁(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // modified Lentz on the continued fraction e^{-x}/(x+1-1/(x+3-4/(x+5-…)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..300 {
            let a = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// `log det Δ` of the flat-torus Laplacian on `C/(Z + τZ)` twisted by the
/// unitary character of the bundle point `u`, zeta-regularized.
///
/// The eigenvalues are `4π²|u + j − kτ|²/(Im τ)²`. `ζ′(0)` is split at heat
/// time `t₀`: large times give `Σ E₁(λ t₀)`, small times go through
/// Poisson summation over the dual lattice.
pub fn spectral_det_genus1(u: Complex64, tau: Complex64, config: SpectralConfig) -> Result<f64, TorsionError> {
    let q = tau.im;
    let area = q;
    let a = -u.im / q;
    let b = u.re + a * tau.re;
    if ((a - a.round()).abs() < 1e-12) && ((b - b.round()).abs() < 1e-12) {
        return Err(TorsionError::TrivialCharacter);
    }
    let t0 = config.split_time;
    // smallest |j + kτ| over a unit step in k bounds the needed range
    let reach = |min_sq: f64| -> i64 {
        let r = (min_sq / q.min(1.0).powi(2)).sqrt();
        r.ceil() as i64 + 2
    };
    let eig_range = reach(config.cutoff * q * q / (4.0 * PI * PI * t0));
    let dual_range = reach(4.0 * t0 * config.cutoff);
    let range = eig_range.max(dual_range);

    let mut zeta_prime = -area / (4.0 * PI * t0);
    for j in -range..=range {
        for k in -range..=range {
            let lambda = 4.0 * PI * PI * (u + j as f64 - k as f64 * tau).norm_sqr() / (q * q);
            if lambda * t0 < config.cutoff {
                zeta_prime += exp_integral_e1(lambda * t0);
            }
            if j == 0 && k == 0 {
                continue;
            }
            let g2 = (j as f64 + k as f64 * tau).norm_sqr();
            let e = g2 / (4.0 * t0);
            if e < config.cutoff {
                let phase = 2.0 * PI * (j as f64 * a + k as f64 * b);
                zeta_prime += area / (4.0 * PI) * phase.cos() * (-e).exp() / (g2 / 4.0);
            }
        }
    }
    Ok(-zeta_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::betti_of_de_rham;
    use crate::theta::log_theta_norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point(tau: Complex64, t: Complex64, s: Complex64) -> TorsionPoint {
        TorsionPoint::new(PeriodMatrix::from_tau(tau).unwrap(), DeRhamPoint::new(vec![t], vec![s]).unwrap()).unwrap()
    }

    #[test]
    fn origin_is_twice_log_theta() {
        let pt = point(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        let th = theta(&[c(0.0, 0.0)], &pt.omega, &Characteristic::zero(1), 1e-15).unwrap();
        assert!((log_t_kappa(&pt).unwrap() - 2.0 * th.ln()).norm() < 1e-14);
    }

    #[test]
    fn theta_divisor_reported() {
        let tau = c(0.3, 1.4);
        // θ vanishes at (1 + τ)/2; pick s with Y s/π there.
        let s = PI * (1.0 + tau) / 2.0 / tau.im;
        let pt = point(tau, c(0.1, 0.0), s);
        assert!(matches!(log_t_kappa(&pt), Err(TorsionError::ThetaZeroOnDivisor { .. })));
    }

    #[test]
    fn unitary_x_is_log_theta_norm_of_jacobian_point() {
        let tau = c(1.0, 2.0);
        let pt = point(tau, c(0.0, 0.0), c(0.35, -0.6));
        let u = crate::moduli::jacobian_lift(&pt.point, &pt.omega);
        let via_norm = log_theta_norm(&u, &pt.omega, &Characteristic::zero(1)).unwrap();
        assert!((log_t_unitary_x(&pt).unwrap() - via_norm).abs() < 1e-10);
        let real_s = point(tau, c(0.0, 0.0), c(0.35, 0.0));
        let th = theta(&scaled_argument(&real_s.omega, &real_s.point.s), &real_s.omega, &Characteristic::zero(1), 1e-15).unwrap();
        assert!((log_t_unitary_x(&real_s).unwrap() - th.value().norm_sqr().ln()).abs() < 1e-13);
    }

    #[test]
    fn kappa_agrees_with_character_formula() {
        let tau = c(0.3, 1.7);
        let pt = point(tau, c(0.2, -0.4), c(-0.3, 0.5));
        let chi = betti_of_de_rham(&pt.point, &pt.omega).unwrap();
        let via_ab = log_holo_torsion_ab(&chi.a, &chi.b, &pt.omega).unwrap();
        assert!(mod_two_pi_i(via_ab - log_t_kappa(&pt).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn analytic_derivatives_match_fd() {
        let pt = point(c(0.3, 1.7), c(0.2, -0.4), c(-0.3, 0.5));
        for which in [Torsion::Kappa, Torsion::UnitaryX, Torsion::UnitaryXbar] {
            let a = dlog_torsion(&pt, which, Method::Analytic).unwrap();
            let f = dlog_torsion(&pt, which, Method::Fd).unwrap();
            assert!(a.sub(&f).max_abs() < 1e-6 * a.max_abs().max(1.0), "{which:?}: {a:?} vs {f:?}");
        }
    }

    #[test]
    fn flatness_on_and_off_the_locus() {
        let om = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        let on = TorsionPoint::new(om.clone(), DeRhamPoint::unitary(vec![c(0.3, 0.2)])).unwrap();
        assert!(flatness_residual(&on).unwrap() <= 1e-9);
        let off = TorsionPoint::new(om, DeRhamPoint::new(vec![c(0.5, 0.1)], vec![c(0.3, 0.2)]).unwrap()).unwrap();
        assert!(flatness_defect(&off, Method::Analytic).unwrap().max_abs() > 1e-3);
        assert!(matches!(flatness_residual(&off), Err(TorsionError::NotUnitary { .. })));
    }

    #[test]
    fn holo_torsion_integer_shifts() {
        let om = PeriodMatrix::from_tau(c(0.3, 1.2)).unwrap();
        let (a, b) = ([c(0.2, 0.1)], [c(-0.4, 0.3)]);
        let base = holo_torsion_ab(&a, &b, &om).unwrap();
        for (da, db) in [(1.0, 0.0), (0.0, 1.0), (-2.0, 3.0)] {
            let v = holo_torsion_ab(&[a[0] + da], &[b[0] + db], &om).unwrap();
            assert!(((v - base) / base).norm() < 1e-9);
        }
    }

    fn genus2() -> PeriodMatrix {
        PeriodMatrix::from_rows(&[vec![c(0.1, 1.1), c(0.2, 0.3)], vec![c(0.2, 0.3), c(-0.3, 0.9)]]).unwrap()
    }

    fn prym_sample(u0: Vec<Complex64>) -> PrymData {
        let eta = c(0.7, -0.4);
        PrymData {
            omega_at_points: vec![vec![c(1.0, 0.2), c(0.3, -0.5)], vec![c(-0.4, 0.1), c(0.8, 0.6)]],
            prym_at_points: vec![vec![eta]],
            prym_conj_at_points: vec![vec![eta.conj()]],
            pairing: vec![vec![c(1.3, 0.0)]],
            u0,
        }
    }

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|x| c(*x, 0.0)).collect()
    }

    #[test]
    fn prym_unitary_formula_is_real_positive() {
        let om = genus2();
        let pd = prym_sample(vec![c(0.21, 0.13), c(-0.17, 0.08)]);
        let w = unitary_torsion_from_prym(&pd, &[0.15, -0.3], &[0.4, 0.05], &om).unwrap();
        assert!(w.re > 0.0 && w.im == 0.0);
    }

    #[test]
    fn prym_holomorphic_formula_on_unitary_data() {
        // with real (a, b) the displayed formula carries θ(u + u₀)·conj θ(u − u₀),
        // so it agrees with the unitary one only up to that ratio
        let om = genus2();
        let pd = prym_sample(vec![c(0.21, 0.13), c(-0.17, 0.08)]);
        let (a, b) = ([0.15, -0.3], [0.4, 0.05]);
        let v = general_torsion_from_prym(&pd, &real(&a), &real(&b), &om).unwrap();
        let w = unitary_torsion_from_prym(&pd, &a, &b, &om).unwrap();
        let u: Vec<Complex64> = (0..2).map(|j| b[j] - (0..2).map(|k| a[k] * om.get(k, j)).sum::<Complex64>()).collect();
        let th = |shift: f64| {
            let z: Vec<Complex64> = u.iter().zip(&pd.u0).map(|(x, y)| x + shift * y).collect();
            theta(&z, &om, &Characteristic::zero(2), 1e-15).unwrap().value()
        };
        let ratio = th(-1.0).conj() / th(1.0).conj();
        assert!(((v - w * ratio) / v).norm() < 1e-10);
        assert!(v.im.abs() > 1e-3 * v.norm());
    }

    #[test]
    fn prym_even_half_period_is_singular() {
        let om = genus2();
        let pd = prym_sample(vec![c(0.5, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            unitary_torsion_from_prym(&pd, &[0.1, 0.2], &[0.3, 0.4], &om),
            Err(TorsionError::SingularPrymMatrix { .. })
        ));
    }

    #[test]
    fn prym_generic_u0_is_finite() {
        let om = genus2();
        let pd = prym_sample(vec![c(0.21, 0.13), c(-0.17, 0.08)]);
        let (a, b) = ([c(0.1, 0.2), c(-0.3, 0.0)], [c(0.4, -0.1), c(0.05, 0.3)]);
        let v = general_torsion_from_prym(&pd, &a, &b, &om).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
        let mut doubled = pd.clone();
        for m in [&mut doubled.prym_at_points, &mut doubled.prym_conj_at_points] {
            m[0][0] *= 2.0;
        }
        doubled.pairing[0][0] *= 4.0;
        let w = general_torsion_from_prym(&doubled, &a, &b, &om).unwrap();
        assert!(((v - w) / v).norm() < 1e-12);
    }

    #[test]
    fn prym_errors() {
        let om = genus2();
        let mut pd = prym_sample(vec![c(0.21, 0.13), c(-0.17, 0.08)]);
        pd.omega_at_points = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]];
        let z = [c(0.0, 0.0); 2];
        assert!(matches!(general_torsion_from_prym(&pd, &z, &z, &om), Err(TorsionError::SingularPrymMatrix { .. })));
        let one = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        assert!(matches!(general_torsion_from_prym(&pd, &z[..1], &z[..1], &one), Err(TorsionError::GenusTooSmall)));
    }

    #[test]
    fn e1_values() {
        // reference values of E₁
        for (x, e) in [(0.1, 1.822_923_958_419_390_7), (1.0, 0.219_383_934_395_520_27), (5.0, 0.001_148_295_591_275_325_7)] {
            assert!((exp_integral_e1(x) - e).abs() < 1e-14 * e.max(1.0), "{x}");
        }
    }

    #[test]
    fn spectral_oracle_basics() {
        let tau = c(0.0, 1.0);
        let cfg = SpectralConfig::default();
        let u = c(0.3, 0.2);
        let v = spectral_det_genus1(u, tau, cfg).unwrap();
        assert!((v - spectral_det_genus1(u + 1.0, tau, cfg).unwrap()).abs() < 1e-9);
        assert!((v - spectral_det_genus1(-u, tau, cfg).unwrap()).abs() < 1e-9);
        let other = SpectralConfig { split_time: 0.5, ..cfg };
        assert!((v - spectral_det_genus1(u, tau, other).unwrap()).abs() < 1e-9);
        assert!(matches!(spectral_det_genus1(c(1.0, 0.0), tau, cfg), Err(TorsionError::TrivialCharacter)));
    }
}
