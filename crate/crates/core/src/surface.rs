//! Genus-one model of the universal family `X × M_dR(X)`.
//!
//! `X = C / (Z + τZ)` with `ω = dz`, `α = [0, 1]`, `β = [0, τ]` and base point
//! `σ`. Integrals `∫_σ^z` are taken along the straight segment between the
//! stored lifts, so `∫_σ^z ω = z − σ` and `∫_σ^z ω̄ = z̄ − σ̄`; moving a lift by a
//! lattice vector is compensated through the recorded integers `(m, n)`.
//!
//! A section is always parametrized with `p[0]` as its moving point: for
//! fixed `q`, `p[1..]` and `(m, n)`, the divisor equation
//! `Σ(p_i − q_i) = u(s) + m + nτ` determines `p[0]` as a function of `s`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::moduli::lattice_coordinates;
use crate::period::{PeriodError, PeriodMatrix};
use crate::theta::{theta_with_gradient, Characteristic, ThetaError, ThetaValue};

/// Minimal separation between distinct divisor points and from `σ`.
pub const COLLISION_DISTANCE: f64 = 1e-6;

/// Tolerance on the lattice equations of section and function data.
pub const LATTICE_TOL: f64 = 1e-10;

const THETA_TOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error("evaluation point {z} is a pole")]
    PoleAtEvaluationPoint { z: Complex64 },
    #[error("divisor points {a} and {b} collide modulo the lattice (distance {distance:.3e})")]
    DivisorCollision {
        a: Complex64,
        b: Complex64,
        distance: f64,
    },
    #[error("lattice equation violated: residual {residual:.3e}")]
    LatticeEquation { residual: f64 },
    #[error("divisor has {p} zeros and {q} poles")]
    UnbalancedDivisor { p: usize, q: usize },
    #[error("a section needs a moving point")]
    NoMovingPoint,
}

/// `C / (Z + τZ)` with a base point.
#[derive(Debug, Clone)]
pub struct EllipticSurface {
    tau: Complex64,
    omega: PeriodMatrix,
    sigma: Complex64,
    theta_prime: Complex64,
}

impl EllipticSurface {
    /// Surface with the default base point `σ = 0.1 + 0.1τ`.
    pub fn new(tau: Complex64) -> Result<Self, SurfaceError> {
        Self::with_sigma(tau, 0.1 + 0.1 * tau)
    }

    pub fn with_sigma(tau: Complex64, sigma: Complex64) -> Result<Self, SurfaceError> {
        let omega = PeriodMatrix::from_tau(tau)?;
        let v = theta_with_gradient(&[Complex64::new(0.0, 0.0)], &omega, &Characteristic::half(1), THETA_TOL)?;
        let theta_prime = v.gradient_value().expect("gradient requested")[0];
        Ok(EllipticSurface {
            tau,
            omega,
            sigma,
            theta_prime,
        })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn sigma(&self) -> Complex64 {
        self.sigma
    }

    pub fn period_matrix(&self) -> &PeriodMatrix {
        &self.omega
    }

    /// `θ′[½,½](0)`.
    pub fn theta_prime_at_zero(&self) -> Complex64 {
        self.theta_prime
    }

    /// `−Im τ / π`: derivative of the Jacobian coordinate in `s`.
    pub fn du_ds(&self) -> f64 {
        -self.tau.im / PI
    }

    /// Jacobian coordinate `u = −s Im τ / π`.
    pub fn u_of_s(&self, s: Complex64) -> Complex64 {
        s * self.du_ds()
    }

    /// `(x, y)` with `z = x + yτ`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let (x, y) = lattice_coordinates(&[z], &self.omega);
        (x[0], y[0])
    }

    pub fn from_coords(&self, x: f64, y: f64) -> Complex64 {
        x + y * self.tau
    }

    /// Distance from `z` to the lattice, on the representative with
    /// coordinates in `[−½, ½)`.
    pub fn lattice_distance(&self, z: Complex64) -> f64 {
        let (x, y) = self.coords(z);
        self.from_coords(x - x.round(), y - y.round()).norm()
    }

    /// Splits `z = r + a + bτ` with `r` in the fundamental parallelogram.
    pub fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let (x, y) = self.coords(z);
        let (a, b) = (x.floor(), y.floor());
        (z - self.from_coords(a, b), a as i64, b as i64)
    }

    fn odd_theta(&self, z: Complex64) -> Result<ThetaValue, SurfaceError> {
        Ok(theta_with_gradient(&[z], &self.omega, &Characteristic::half(1), THETA_TOL)?)
    }

    /// `log E(z, w)` on the principal branch of the theta mantissa.
    pub fn log_prime_form(&self, z: Complex64, w: Complex64) -> Result<Complex64, SurfaceError> {
        let v = self.odd_theta(w - z)?;
        if v.mantissa.norm() == 0.0 {
            return Err(SurfaceError::PoleAtEvaluationPoint { z });
        }
        Ok(v.ln() - self.theta_prime.ln())
    }

    /// `θ′/θ[½,½](x)`.
    pub fn theta_log_derivative(&self, x: Complex64) -> Result<Complex64, SurfaceError> {
        let v = self.odd_theta(x)?;
        if v.mantissa.norm() == 0.0 {
            return Err(SurfaceError::PoleAtEvaluationPoint { z: x });
        }
        Ok(v.log_gradient().expect("gradient requested")[0])
    }

    fn check_distinct(&self, points: &[Complex64]) -> Result<(), SurfaceError> {
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                let d = self.lattice_distance(a - b);
                if d < COLLISION_DISTANCE {
                    return Err(SurfaceError::DivisorCollision {
                        a: *a,
                        b: *b,
                        distance: d,
                    });
                }
            }
            let d = self.lattice_distance(a - self.sigma);
            if d < COLLISION_DISTANCE {
                return Err(SurfaceError::DivisorCollision {
                    a: *a,
                    b: self.sigma,
                    distance: d,
                });
            }
        }
        Ok(())
    }

    /// Integers `(m, n)` with `d = m + nτ`, or an error if `d` is off the lattice.
    fn lattice_integers(&self, d: Complex64) -> Result<(i64, i64), SurfaceError> {
        let (x, y) = self.coords(d);
        let (m, n) = (x.round(), y.round());
        let residual = self.from_coords(x - m, y - n).norm();
        if residual > LATTICE_TOL {
            return Err(SurfaceError::LatticeEquation { residual });
        }
        Ok((m as i64, n as i64))
    }
}

/// `E(z, w) = θ[½,½](w − z) / θ′[½,½](0)`.
pub fn prime_form(surface: &EllipticSurface, z: Complex64, w: Complex64) -> Result<Complex64, SurfaceError> {
    let v = surface.odd_theta(w - z)?;
    Ok(v.value() / surface.theta_prime)
}

mod scalar_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &i64, s: S) -> Result<S::Ok, S::Error> {
        [*v].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            One(i64),
            List(Vec<i64>),
        }
        match Either::deserialize(d)? {
            Either::One(v) => Ok(v),
            Either::List(v) if v.len() == 1 => Ok(v[0]),
            Either::List(v) => Err(serde::de::Error::custom(format!(
                "expected one integer at genus one, got {}",
                v.len()
            ))),
        }
    }
}

/// Meromorphic section of `L_ν` with divisor `Σ p_i − q_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionData {
    pub p: Vec<Complex64>,
    pub q: Vec<Complex64>,
    #[serde(with = "scalar_list")]
    pub m: i64,
    #[serde(with = "scalar_list")]
    pub n: i64,
    pub t: Complex64,
    pub s: Complex64,
}

impl SectionData {
    /// Validates the divisor equation and reads off `(m, n)`.
    pub fn new(
        surface: &EllipticSurface,
        p: Vec<Complex64>,
        q: Vec<Complex64>,
        t: Complex64,
        s: Complex64,
    ) -> Result<Self, SurfaceError> {
        if p.len() != q.len() {
            return Err(SurfaceError::UnbalancedDivisor {
                p: p.len(),
                q: q.len(),
            });
        }
        let d: Complex64 = p.iter().sum::<Complex64>() - q.iter().sum::<Complex64>() - surface.u_of_s(s);
        let (m, n) = surface.lattice_integers(d)?;
        let data = SectionData { p, q, m, n, t, s };
        surface.check_distinct(&data.divisor_points())?;
        Ok(data)
    }

    /// Solves the divisor equation for the moving point `p[0]`, then reduces
    /// every lift into the fundamental parallelogram.
    pub fn with_moving_point(
        surface: &EllipticSurface,
        q: Vec<Complex64>,
        p_rest: Vec<Complex64>,
        t: Complex64,
        s: Complex64,
    ) -> Result<Self, SurfaceError> {
        if q.is_empty() {
            return Err(SurfaceError::NoMovingPoint);
        }
        if p_rest.len() + 1 != q.len() {
            return Err(SurfaceError::UnbalancedDivisor {
                p: p_rest.len() + 1,
                q: q.len(),
            });
        }
        let rest: Complex64 = p_rest.iter().zip(&q[1..]).map(|(p, q)| p - q).sum();
        let p0 = q[0] + surface.u_of_s(s) - rest;
        let mut p = vec![p0];
        p.extend(p_rest);
        let data = SectionData { p, q, m: 0, n: 0, t, s }.canonicalize(surface);
        surface.check_distinct(&data.divisor_points())?;
        Ok(data)
    }

    /// The same section family at another moduli point: `p[0]` moves with
    /// `u(s)` and `(m, n)` stay fixed, so the lift varies continuously.
    pub fn moved_to(&self, surface: &EllipticSurface, t: Complex64, s: Complex64) -> SectionData {
        let mut out = self.clone();
        if let Some(p0) = out.p.first_mut() {
            *p0 += surface.u_of_s(s) - surface.u_of_s(self.s);
        }
        out.t = t;
        out.s = s;
        out
    }

    /// Reduces all lifts into `[0, 1)²`, adjusting `(m, n)`.
    pub fn canonicalize(mut self, surface: &EllipticSurface) -> SectionData {
        for z in self.p.iter_mut() {
            let (r, a, b) = surface.reduce(*z);
            *z = r;
            self.m -= a;
            self.n -= b;
        }
        for z in self.q.iter_mut() {
            let (r, a, b) = surface.reduce(*z);
            *z = r;
            self.m += a;
            self.n += b;
        }
        self
    }

    /// Residual of `Σ(p_i − q_i) = u + m + nτ`.
    pub fn divisor_residual(&self, surface: &EllipticSurface) -> f64 {
        let lhs: Complex64 = self.p.iter().sum::<Complex64>() - self.q.iter().sum::<Complex64>();
        let rhs = surface.u_of_s(self.s) + self.m as f64 + self.n as f64 * surface.tau;
        (lhs - rhs).norm()
    }

    /// `(point, order)` pairs.
    pub fn divisor(&self) -> Vec<(Complex64, i32)> {
        self.p
            .iter()
            .map(|z| (*z, 1))
            .chain(self.q.iter().map(|z| (*z, -1)))
            .collect()
    }

    fn divisor_points(&self) -> Vec<Complex64> {
        self.p.iter().chain(&self.q).copied().collect()
    }

    /// `g·ℓ`: divisors concatenated, integers added. The moving point stays `p[0]`.
    pub fn times_function(&self, f: &FunctionData) -> SectionData {
        let mut out = self.clone();
        out.p.extend(&f.x);
        out.q.extend(&f.y);
        out.m += f.mt;
        out.n += f.nt;
        out
    }
}

/// Meromorphic function with divisor `Σ x_i − y_i`, `Σ(x_i − y_i) = m̃ + ñτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionData {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    #[serde(with = "scalar_list")]
    pub mt: i64,
    #[serde(with = "scalar_list")]
    pub nt: i64,
}

impl FunctionData {
    pub fn new(surface: &EllipticSurface, x: Vec<Complex64>, y: Vec<Complex64>) -> Result<Self, SurfaceError> {
        if x.len() != y.len() {
            return Err(SurfaceError::UnbalancedDivisor {
                p: x.len(),
                q: y.len(),
            });
        }
        let d: Complex64 = x.iter().sum::<Complex64>() - y.iter().sum::<Complex64>();
        let (mt, nt) = surface.lattice_integers(d)?;
        let f = FunctionData { x, y, mt, nt };
        surface.check_distinct(&f.divisor_points())?;
        Ok(f)
    }

    /// The constant function 1.
    pub fn one() -> Self {
        FunctionData {
            x: Vec::new(),
            y: Vec::new(),
            mt: 0,
            nt: 0,
        }
    }

    /// Closes `x` and `y_head` into an admissible divisor by choosing the last
    /// pole, then reduces every lift into the fundamental parallelogram.
    pub fn closing(surface: &EllipticSurface, x: Vec<Complex64>, y_head: Vec<Complex64>) -> Result<Self, SurfaceError> {
        if y_head.len() + 1 != x.len() {
            return Err(SurfaceError::UnbalancedDivisor {
                p: x.len(),
                q: y_head.len() + 1,
            });
        }
        let last = x.iter().sum::<Complex64>() - y_head.iter().sum::<Complex64>();
        let mut y = y_head;
        y.push(last);
        let f = FunctionData { x, y, mt: 0, nt: 0 }.canonicalize(surface);
        surface.check_distinct(&f.divisor_points())?;
        Ok(f)
    }

    pub fn canonicalize(mut self, surface: &EllipticSurface) -> FunctionData {
        for z in self.x.iter_mut() {
            let (r, a, b) = surface.reduce(*z);
            *z = r;
            self.mt -= a;
            self.nt -= b;
        }
        for z in self.y.iter_mut() {
            let (r, a, b) = surface.reduce(*z);
            *z = r;
            self.mt += a;
            self.nt += b;
        }
        self
    }

    pub fn lattice_residual(&self, surface: &EllipticSurface) -> f64 {
        let lhs: Complex64 = self.x.iter().sum::<Complex64>() - self.y.iter().sum::<Complex64>();
        (lhs - (self.mt as f64 + self.nt as f64 * surface.tau)).norm()
    }

    pub fn divisor(&self) -> Vec<(Complex64, i32)> {
        self.x
            .iter()
            .map(|z| (*z, 1))
            .chain(self.y.iter().map(|z| (*z, -1)))
            .collect()
    }

    fn divisor_points(&self) -> Vec<Complex64> {
        self.x.iter().chain(&self.y).copied().collect()
    }

    /// `f · g`.
    pub fn times(&self, other: &FunctionData) -> FunctionData {
        let mut out = self.clone();
        out.x.extend(&other.x);
        out.y.extend(&other.y);
        out.mt += other.mt;
        out.nt += other.nt;
        out
    }
}

fn ensure_off(surface: &EllipticSurface, z: Complex64, poles: &[Complex64]) -> Result<(), SurfaceError> {
    if poles
        .iter()
        .any(|q| surface.lattice_distance(z - q) < COLLISION_DISTANCE)
    {
        return Err(SurfaceError::PoleAtEvaluationPoint { z });
    }
    Ok(())
}

fn log_prime_ratio(
    surface: &EllipticSurface,
    z: Complex64,
    zeros: &[Complex64],
    poles: &[Complex64],
) -> Result<Complex64, SurfaceError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in zeros {
        if surface.lattice_distance(z - p) == 0.0 {
            return Ok(Complex64::new(f64::NEG_INFINITY, 0.0));
        }
        acc += surface.log_prime_form(z, *p)?;
    }
    for q in poles {
        acc -= surface.log_prime_form(z, *q)?;
    }
    Ok(acc)
}

/// `log l̃(z)`, defined modulo `2πi`.
pub fn log_section(surface: &EllipticSurface, d: &SectionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    ensure_off(surface, z, &d.q)?;
    let two_pi_i_n = Complex64::new(0.0, 2.0 * PI * d.n as f64);
    Ok(log_prime_ratio(surface, z, &d.p, &d.q)? + (d.t + d.s - two_pi_i_n) * (z - surface.sigma))
}

/// `l̃(z) = Π E(z, p_i) / Π E(z, q_i) · exp{(t + s)(z − σ) − 2πi n (z − σ)}`.
pub fn section_value(surface: &EllipticSurface, d: &SectionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    Ok(log_section(surface, d, z)?.exp())
}

/// `log f(z)`, defined modulo `2πi`.
pub fn log_function(surface: &EllipticSurface, f: &FunctionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    ensure_off(surface, z, &f.y)?;
    let two_pi_i_n = Complex64::new(0.0, 2.0 * PI * f.nt as f64);
    Ok(log_prime_ratio(surface, z, &f.x, &f.y)? - two_pi_i_n * (z - surface.sigma))
}

/// `f(z) = Π E(z, x_i) / Π E(z, y_i) · exp{−2πi ñ (z − σ)}`.
pub fn function_value(surface: &EllipticSurface, f: &FunctionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    Ok(log_function(surface, f, z)?.exp())
}

/// `f′/f(z) = Σ −θ′/θ(x_j − z) + Σ θ′/θ(y_j − z) − 2πi ñ`.
pub fn dlogf(surface: &EllipticSurface, f: &FunctionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    ensure_off(surface, z, &f.x)?;
    ensure_off(surface, z, &f.y)?;
    let mut acc = Complex64::new(0.0, -2.0 * PI * f.nt as f64);
    for x in &f.x {
        acc -= surface.theta_log_derivative(x - z)?;
    }
    for y in &f.y {
        acc += surface.theta_log_derivative(y - z)?;
    }
    Ok(acc)
}

/// `∂_z log l̃`.
pub fn dlog_section_dz(surface: &EllipticSurface, d: &SectionData, z: Complex64) -> Result<Complex64, SurfaceError> {
    ensure_off(surface, z, &d.p)?;
    ensure_off(surface, z, &d.q)?;
    let mut acc = d.t + d.s - Complex64::new(0.0, 2.0 * PI * d.n as f64);
    for p in &d.p {
        acc -= surface.theta_log_derivative(p - z)?;
    }
    for q in &d.q {
        acc += surface.theta_log_derivative(q - z)?;
    }
    Ok(acc)
}

/// `(∂_t log l̃, ∂_s log l̃)` along the family that moves `p[0]`.
pub fn dlog_section_moduli(
    surface: &EllipticSurface,
    d: &SectionData,
    z: Complex64,
) -> Result<[Complex64; 2], SurfaceError> {
    ensure_off(surface, z, &d.q)?;
    let zs = z - surface.sigma;
    let mut ds = zs;
    if let Some(p0) = d.p.first() {
        ensure_off(surface, z, &[*p0])?;
        // ∂_s log E(z, p₀(s)) = θ′/θ(p₀ − z) · dp₀/ds
        ds += surface.theta_log_derivative(p0 - z)? * surface.du_ds();
    }
    Ok([zs, ds])
}

/// Base components `(dt, ds)` of `∇ℓ/ℓ = dl̃/l̃ − ∫_σ^z ∇_GM ν` at `z`.
pub fn connection_form(surface: &EllipticSurface, d: &SectionData, z: Complex64) -> Result<[Complex64; 2], SurfaceError> {
    let [dt, ds] = dlog_section_moduli(surface, d, z)?;
    let zs = z - surface.sigma;
    Ok([dt - zs, ds - zs.conj()])
}

/// `Σ ord_j · φ(z_j)` over a divisor.
pub fn divisor_trace<F>(divisor: &[(Complex64, i32)], mut phi: F) -> Result<[Complex64; 2], SurfaceError>
where
    F: FnMut(Complex64) -> Result<[Complex64; 2], SurfaceError>,
{
    let mut acc = [Complex64::new(0.0, 0.0); 2];
    for (z, ord) in divisor {
        let v = phi(*z)?;
        acc[0] += v[0] * *ord as f64;
        acc[1] += v[1] * *ord as f64;
    }
    Ok(acc)
}

/// Both traces of the reciprocity law for a connection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeilTraces {
    /// `tr_{Div f}(∇ℓ/ℓ)`.
    pub left: [Complex64; 2],
    /// `tr_{Div ℓ}(df/f)`.
    pub right: [Complex64; 2],
}

impl WeilTraces {
    pub fn residual(&self) -> [Complex64; 2] {
        [self.left[0] - self.right[0], self.left[1] - self.right[1]]
    }

    pub fn max_residual(&self) -> f64 {
        let r = self.residual();
        r[0].norm().max(r[1].norm())
    }
}

fn check_disjoint(surface: &EllipticSurface, a: &[(Complex64, i32)], b: &[(Complex64, i32)]) -> Result<(), SurfaceError> {
    for (x, _) in a {
        for (y, _) in b {
            let distance = surface.lattice_distance(x - y);
            if distance < COLLISION_DISTANCE {
                return Err(SurfaceError::DivisorCollision { a: *x, b: *y, distance });
            }
        }
    }
    Ok(())
}

/// `tr_{Div f}(∇ℓ/ℓ)` and `tr_{Div ℓ}(df/f)` over the `(t, s)` base.
pub fn weil_traces(surface: &EllipticSurface, l: &SectionData, f: &FunctionData) -> Result<WeilTraces, SurfaceError> {
    let div_f = f.divisor();
    let div_l = l.divisor();
    check_disjoint(surface, &div_f, &div_l)?;
    let left = divisor_trace(&div_f, |z| connection_form(surface, l, z))?;
    let mut right = [Complex64::new(0.0, 0.0); 2];
    if let Some(p0) = l.p.first() {
        // only the moving point contributes, through dp₀ = (du/ds) ds
        right[1] = dlogf(surface, f, *p0)? * surface.du_ds();
    }
    Ok(WeilTraces { left, right })
}

/// `tr_{Div f}(∇ℓ/ℓ) − tr_{Div ℓ}(df/f)` as a `(dt, ds)` covector.
pub fn weil_residual(surface: &EllipticSurface, l: &SectionData, f: &FunctionData) -> Result<[Complex64; 2], SurfaceError> {
    Ok(weil_traces(surface, l, f)?.residual())
}

/// Which class enters the first reciprocity law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormClass {
    Omega,
    OmegaBar,
}

/// Residual of a classical reciprocity law, with the contour-integral
/// cross-check of the `df/f` periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReciprocityResidual {
    pub residual: Complex64,
    /// Largest deviation between contour-integrated and exact periods.
    pub contour_residual: f64,
}

/// Exact `(∫_α df/f, ∫_β df/f) = (−2πi ñ, 2πi m̃)`.
pub fn dlogf_periods(f: &FunctionData) -> (Complex64, Complex64) {
    (
        Complex64::new(0.0, -2.0 * PI * f.nt as f64),
        Complex64::new(0.0, 2.0 * PI * f.mt as f64),
    )
}

/// Corner `c` of a period parallelogram `c + [0,1)·1 + [0,1)·τ` whose
/// interior holds all given lifts, which must have coordinates in a window
/// of width less than one.
fn contour_corner(surface: &EllipticSurface, points: &[Complex64]) -> Complex64 {
    if points.is_empty() {
        return surface.from_coords(-0.5, -0.5);
    }
    let coords: Vec<(f64, f64)> = points.iter().map(|z| surface.coords(*z)).collect();
    let gap = |sel: fn(&(f64, f64)) -> f64| {
        let lo = coords.iter().map(sel).fold(f64::INFINITY, f64::min);
        let hi = coords.iter().map(sel).fold(f64::NEG_INFINITY, f64::max);
        0.5 * ((hi - 1.0) + lo)
    };
    surface.from_coords(gap(|c| c.0), gap(|c| c.1))
}

/// Periods of `df/f` along the edges of the parallelogram around the
/// divisor, by the periodic trapezoid rule.
pub fn dlogf_periods_by_contour(
    surface: &EllipticSurface,
    f: &FunctionData,
    nodes: usize,
) -> Result<(Complex64, Complex64), SurfaceError> {
    let c = contour_corner(surface, &f.divisor_points());
    let integrate = |dir: Complex64| -> Result<Complex64, SurfaceError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let z = c + dir * (k as f64 / nodes as f64);
            acc += dlogf(surface, f, z)?;
        }
        Ok(acc * dir / nodes as f64)
    };
    Ok((integrate(Complex64::new(1.0, 0.0))?, integrate(surface.tau)?))
}

const CONTOUR_NODES: usize = 512;

/// `2πi Σ ord_p ∫_σ^p ω − Σ(∫_α ω ∫_β df/f − ∫_α df/f ∫_β ω)`.
pub fn reciprocity_i(
    surface: &EllipticSurface,
    class: FormClass,
    f: &FunctionData,
) -> Result<ReciprocityResidual, SurfaceError> {
    surface.check_distinct(&f.divisor_points())?;
    let sigma = surface.sigma;
    let integral = |p: Complex64| match class {
        FormClass::Omega => p - sigma,
        FormClass::OmegaBar => (p - sigma).conj(),
    };
    let (a_omega, b_omega) = match class {
        FormClass::Omega => (Complex64::new(1.0, 0.0), surface.tau),
        FormClass::OmegaBar => (Complex64::new(1.0, 0.0), surface.tau.conj()),
    };
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let lhs: Complex64 = f
        .divisor()
        .iter()
        .map(|(p, ord)| two_pi_i * integral(*p) * *ord as f64)
        .sum();
    let (a_df, b_df) = dlogf_periods(f);
    let rhs = a_omega * b_df - a_df * b_omega;
    let (ca, cb) = dlogf_periods_by_contour(surface, f, CONTOUR_NODES)?;
    Ok(ReciprocityResidual {
        residual: lhs - rhs,
        contour_residual: (ca - a_df).norm().max((cb - b_df).norm()),
    })
}

/// Reduces the imaginary part of `z` into `(−π, π]`.
pub fn mod_two_pi_i(z: Complex64) -> Complex64 {
    let k = (z.im / (2.0 * PI)).round();
    Complex64::new(z.re, z.im - 2.0 * PI * k)
}

/// Second reciprocity law, divided through by `2πi`:
/// `Σ ord_q(g) log f(q) − Σ ord_p(f) log g(p) − (1/2πi)Σ(∫_α df/f ∫_β dg/g − ∫_α dg/g ∫_β df/f)`,
/// reduced modulo `2πiZ`.
pub fn reciprocity_ii(
    surface: &EllipticSurface,
    f: &FunctionData,
    g: &FunctionData,
) -> Result<ReciprocityResidual, SurfaceError> {
    let (div_f, div_g) = (f.divisor(), g.divisor());
    check_disjoint(surface, &div_f, &div_g)?;
    let mut lhs = Complex64::new(0.0, 0.0);
    for (q, ord) in &div_g {
        lhs += log_function(surface, f, *q)? * *ord as f64;
    }
    for (p, ord) in &div_f {
        lhs -= log_function(surface, g, *p)? * *ord as f64;
    }
    let (af, bf) = dlogf_periods(f);
    let (ag, bg) = dlogf_periods(g);
    let rhs = (af * bg - ag * bf) / Complex64::new(0.0, 2.0 * PI);
    let mut contour_residual = 0.0_f64;
    for (h, (a, b)) in [(f, (af, bf)), (g, (ag, bg))] {
        let (ca, cb) = dlogf_periods_by_contour(surface, h, CONTOUR_NODES)?;
        contour_residual = contour_residual.max((ca - a).norm()).max((cb - b).norm());
    }
    Ok(ReciprocityResidual {
        residual: mod_two_pi_i(lhs - rhs),
        contour_residual,
    })
}

/// Periods of the fiber restrictions of `ι_{∂t}F` and `ι_{∂s}F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmPeriods {
    pub t_alpha: Complex64,
    pub t_beta: Complex64,
    pub s_alpha: Complex64,
    pub s_beta: Complex64,
}

impl GmPeriods {
    /// Deviation from the periods `(1, τ)` of `ω` and `(1, τ̄)` of `ω̄`.
    pub fn residual(&self, tau: Complex64) -> f64 {
        [
            (self.t_alpha - 1.0).norm(),
            (self.t_beta - tau).norm(),
            (self.s_alpha - 1.0).norm(),
            (self.s_beta - tau.conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Curvature of the universal connection by nested finite differences of
/// `log l̃`, contracted with `∂_t` and `∂_s` and integrated over `α` and `β`
/// from `base`.
///
/// The connection 1-form on `X × M_dR` is
/// `A = d log l̃ − (z − σ) dt − (z̄ − σ̄) ds`; `F = dA` is formed from
/// numerical derivatives only.
pub fn gm_periods_from_curvature(
    surface: &EllipticSurface,
    d: &SectionData,
    base: Complex64,
    nodes: usize,
    h: f64,
) -> Result<GmPeriods, SurfaceError> {
    use crate::harness::fd::{wirtinger_pair, FdError, Scheme};

    let sigma = surface.sigma;
    let wrap = |e: FdError| SurfaceError::PoleAtEvaluationPoint {
        z: match e {
            FdError::StencilHitsSingularity { at } => at,
        },
    };
    let fd_err = |r: Result<Complex64, SurfaceError>| r.unwrap_or(Complex64::new(f64::NAN, 0.0));

    // log l̃ at (z, t, s) relative to a fixed reference value, so the
    // principal branch is continuous across each stencil.
    let log_rel = |z: Complex64, t: Complex64, s: Complex64, reference: Complex64| {
        let moved = d.moved_to(surface, t, s);
        log_section(surface, &moved, z).map(|v| mod_two_pi_i(v - reference))
    };

    // Connection components A_z, A_z̄, A_t, A_s at (z, t, s).
    let a_z = |z: Complex64, t: Complex64, s: Complex64| -> Result<(Complex64, Complex64), SurfaceError> {
        let r = log_section(surface, &d.moved_to(surface, t, s), z)?;
        let (dz, dzb) = wirtinger_pair(|w| fd_err(log_rel(w, t, s, r)), z, h, Scheme::Richardson).map_err(wrap)?;
        Ok((dz, dzb))
    };
    let a_t = |z: Complex64, t: Complex64, s: Complex64| -> Result<Complex64, SurfaceError> {
        let r = log_section(surface, &d.moved_to(surface, t, s), z)?;
        let (dt, _) = wirtinger_pair(|w| fd_err(log_rel(z, w, s, r)), t, h, Scheme::Richardson).map_err(wrap)?;
        Ok(dt - (z - sigma))
    };
    let a_s = |z: Complex64, t: Complex64, s: Complex64| -> Result<Complex64, SurfaceError> {
        let r = log_section(surface, &d.moved_to(surface, t, s), z)?;
        let (ds, _) = wirtinger_pair(|w| fd_err(log_rel(z, t, w, r)), s, h, Scheme::Richardson).map_err(wrap)?;
        Ok(ds - (z - sigma).conj())
    };

    let (t0, s0) = (d.t, d.s);
    // ι_{∂t}F = (∂_t A_z − ∂_z A_t) dz + (∂_t A_z̄ − ∂_z̄ A_t) dz̄, likewise for s.
    let contraction = |z: Complex64| -> Result<[Complex64; 4], SurfaceError> {
        let (dt_az, _) = wirtinger_pair(|w| a_z(z, w, s0).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0)), t0, h, Scheme::Richardson).map_err(wrap)?;
        let (dt_azb, _) = wirtinger_pair(|w| a_z(z, w, s0).map(|v| v.1).unwrap_or(Complex64::new(f64::NAN, 0.0)), t0, h, Scheme::Richardson).map_err(wrap)?;
        let (dz_at, dzb_at) = wirtinger_pair(|w| a_t(w, t0, s0).unwrap_or(Complex64::new(f64::NAN, 0.0)), z, h, Scheme::Richardson).map_err(wrap)?;
        let (ds_az, _) = wirtinger_pair(|w| a_z(z, t0, w).map(|v| v.0).unwrap_or(Complex64::new(f64::NAN, 0.0)), s0, h, Scheme::Richardson).map_err(wrap)?;
        let (ds_azb, _) = wirtinger_pair(|w| a_z(z, t0, w).map(|v| v.1).unwrap_or(Complex64::new(f64::NAN, 0.0)), s0, h, Scheme::Richardson).map_err(wrap)?;
        let (dz_as, dzb_as) = wirtinger_pair(|w| a_s(w, t0, s0).unwrap_or(Complex64::new(f64::NAN, 0.0)), z, h, Scheme::Richardson).map_err(wrap)?;
        Ok([dt_az - dz_at, dt_azb - dzb_at, ds_az - dz_as, ds_azb - dzb_as])
    };

    let mut periods = GmPeriods {
        t_alpha: Complex64::new(0.0, 0.0),
        t_beta: Complex64::new(0.0, 0.0),
        s_alpha: Complex64::new(0.0, 0.0),
        s_beta: Complex64::new(0.0, 0.0),
    };
    for (dir, is_alpha) in [(Complex64::new(1.0, 0.0), true), (surface.tau, false)] {
        let mut t_acc = Complex64::new(0.0, 0.0);
        let mut s_acc = Complex64::new(0.0, 0.0);
        for k in 0..nodes {
            let z = base + dir * (k as f64 / nodes as f64);
            let [tz, tzb, sz, szb] = contraction(z)?;
            t_acc += tz * dir + tzb * dir.conj();
            s_acc += sz * dir + szb * dir.conj();
        }
        let (t_acc, s_acc) = (t_acc / nodes as f64, s_acc / nodes as f64);
        if is_alpha {
            periods.t_alpha = t_acc;
            periods.s_alpha = s_acc;
        } else {
            periods.t_beta = t_acc;
            periods.s_beta = s_acc;
        }
    }
    Ok(periods)
}
