//! λ-connections and the twistor family over the de Rham moduli space.
//!
//! Near `λ = 0` a twistor point is `(t, s, λ)` and maps to the de Rham point
//! `τ = −s̄ + λ⁻¹t`, `σ = s + λt̄`. Near `λ = ∞` the same formulas are used
//! with `λ = 1/μ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::{FormExpr, Gen, Laurent, RelClass};
use crate::moduli::DeRhamPoint;
use crate::period::PeriodMatrix;
use crate::surface::{connection_form, divisor_trace, dlog_section_dz, EllipticSurface, SectionData, SurfaceError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistorError {
    #[error("λ lies on the divisor λ ∈ {{0, ∞}}")]
    LambdaOnDivisor,
    #[error("genus mismatch: expected {expected}, got {got}")]
    GenusMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Which affine chart of `P¹` the parameter refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    /// Parameter is `λ`.
    Zero,
    /// Parameter is `μ = 1/λ`.
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistorPoint {
    pub t: Vec<Complex64>,
    pub s: Vec<Complex64>,
    /// `λ` in the zero chart, `μ = 1/λ` in the infinity chart.
    pub param: Complex64,
    pub chart: Chart,
}

impl TwistorPoint {
    pub fn new(t: Vec<Complex64>, s: Vec<Complex64>, lambda: Complex64) -> Result<Self, TwistorError> {
        if t.len() != s.len() {
            return Err(TwistorError::GenusMismatch {
                expected: t.len(),
                got: s.len(),
            });
        }
        if !lambda.is_finite() {
            return Err(TwistorError::LambdaOnDivisor);
        }
        Ok(TwistorPoint {
            t,
            s,
            param: lambda,
            chart: Chart::Zero,
        })
    }

    pub fn in_infinity_chart(t: Vec<Complex64>, s: Vec<Complex64>, mu: Complex64) -> Result<Self, TwistorError> {
        let mut p = TwistorPoint::new(t, s, mu)?;
        p.chart = Chart::Infinity;
        Ok(p)
    }

    pub fn genus(&self) -> usize {
        self.t.len()
    }

    /// `λ`, or `LambdaOnDivisor` at `λ ∈ {0, ∞}`.
    pub fn lambda(&self) -> Result<Complex64, TwistorError> {
        if self.param.norm() == 0.0 {
            return Err(TwistorError::LambdaOnDivisor);
        }
        Ok(match self.chart {
            Chart::Zero => self.param,
            Chart::Infinity => 1.0 / self.param,
        })
    }

    /// The same point expressed in the other chart.
    pub fn switch_chart(&self) -> Result<TwistorPoint, TwistorError> {
        if self.param.norm() == 0.0 {
            return Err(TwistorError::LambdaOnDivisor);
        }
        Ok(TwistorPoint {
            t: self.t.clone(),
            s: self.s.clone(),
            param: 1.0 / self.param,
            chart: match self.chart {
                Chart::Zero => Chart::Infinity,
                Chart::Infinity => Chart::Zero,
            },
        })
    }

    /// Parameter moved by `λ ↦ −1/λ̄`, landing in the opposite chart so
    /// that `D₀` and `D∞` are exchanged.
    pub fn antipodal_parameter(&self) -> TwistorPoint {
        TwistorPoint {
            t: self.t.clone(),
            s: self.s.clone(),
            param: -self.param.conj(),
            chart: match self.chart {
                Chart::Zero => Chart::Infinity,
                Chart::Infinity => Chart::Zero,
            },
        }
    }
}

/// `λ`-connection coefficients: `(0,1)`-part over `ω̄_i`, `(1,0)`-part over `ω_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaConnection {
    pub antiholo: Vec<Complex64>,
    pub holo: Vec<Complex64>,
}

impl LambdaConnection {
    pub fn as_class(&self) -> RelClass {
        RelClass {
            holo: self.holo.clone(),
            anti: self.antiholo.clone(),
        }
    }
}

/// `½((λ+1)ν″ + (λ−1)conj ν′)` and `½((1+λ)ν′ + (1−λ)conj ν″)` for
/// `ν = Σ t_i ω_i + s_i ω̄_i`.
pub fn lambda_connection(p: &DeRhamPoint, lambda: Complex64) -> LambdaConnection {
    let antiholo = p
        .s
        .iter()
        .zip(&p.t)
        .map(|(s, t)| 0.5 * ((lambda + 1.0) * s + (lambda - 1.0) * t.conj()))
        .collect();
    let holo = p
        .t
        .iter()
        .zip(&p.s)
        .map(|(t, s)| 0.5 * ((1.0 + lambda) * t + (1.0 - lambda) * s.conj()))
        .collect();
    LambdaConnection { antiholo, holo }
}

/// `τ_i = −s̄_i + λ⁻¹t_i`, `σ_i = s_i + λt̄_i`, returned as a de Rham point `(t, s) = (τ, σ)`.
pub fn twistor_to_de_rham(tp: &TwistorPoint) -> Result<DeRhamPoint, TwistorError> {
    let lambda = tp.lambda()?;
    let tau = tp.t.iter().zip(&tp.s).map(|(t, s)| -s.conj() + t / lambda).collect();
    let sigma = tp.s.iter().zip(&tp.t).map(|(s, t)| s + lambda * t.conj()).collect();
    Ok(DeRhamPoint { t: tau, s: sigma })
}

/// `max |ν(λ=1 connection of the image) − image|`; zero by construction.
pub fn twistor_consistency_residual(tp: &TwistorPoint) -> Result<f64, TwistorError> {
    let image = twistor_to_de_rham(tp)?;
    let lc = lambda_connection(&image, Complex64::new(1.0, 0.0));
    Ok(lc
        .holo
        .iter()
        .zip(&image.t)
        .chain(lc.antiholo.iter().zip(&image.s))
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

fn check_genus(omega: &PeriodMatrix, g: usize) -> Result<(), TwistorError> {
    if omega.genus() != g {
        return Err(TwistorError::GenusMismatch {
            expected: omega.genus(),
            got: g,
        });
    }
    Ok(())
}

fn one_form(pairs: Vec<(Gen, Laurent)>) -> FormExpr {
    pairs
        .into_iter()
        .fold(FormExpr::zero(), |acc, (g, c)| acc + FormExpr::term(vec![g], c))
}

/// `F = −(2/π) Σ (Im Ω)_ij dτ_i ∧ dσ_j` pulled back to `(t, s, λ)`, with
/// `λ` kept formal in the coefficients.
pub fn pullback_curvature(omega: &PeriodMatrix, tp: &TwistorPoint) -> Result<FormExpr, TwistorError> {
    let g = tp.genus();
    check_genus(omega, g)?;
    tp.lambda()?;
    let one = Complex64::new(1.0, 0.0);
    let dtau: Vec<FormExpr> = (0..g)
        .map(|i| {
            one_form(vec![
                (Gen::SBar(i), Laurent::constant(-one)),
                (Gen::T(i), Laurent::monomial(-1, one)),
                (Gen::Lambda, Laurent::monomial(-2, -tp.t[i])),
            ])
        })
        .collect();
    let dsigma: Vec<FormExpr> = (0..g)
        .map(|j| {
            one_form(vec![
                (Gen::S(j), Laurent::constant(one)),
                (Gen::TBar(j), Laurent::monomial(1, one)),
                (Gen::Lambda, Laurent::constant(tp.t[j].conj())),
            ])
        })
        .collect();
    let mut f = FormExpr::zero();
    for i in 0..g {
        for j in 0..g {
            let y = omega.imag()[(i, j)];
            f = f + dtau[i].wedge(&dsigma[j]).scale(Complex64::new(-2.0 * y / PI, 0.0));
        }
    }
    Ok(f)
}

/// `Φ₁ = (i/2π) Σ Y_ij (dt_i∧dt̄_j + ds_i∧ds̄_j)` and `Φ₂ + iΦ₃ = (1/π) Σ Y_ij ds_i∧dt_j`.
pub fn hklr_forms(omega: &PeriodMatrix) -> (FormExpr, FormExpr) {
    let g = omega.genus();
    let mut phi1 = FormExpr::zero();
    let mut phi23 = FormExpr::zero();
    for i in 0..g {
        for j in 0..g {
            let y = omega.imag()[(i, j)];
            let c1 = Laurent::constant(Complex64::new(0.0, y / (2.0 * PI)));
            phi1 = phi1
                + FormExpr::term(vec![Gen::T(i), Gen::TBar(j)], c1)
                + FormExpr::term(vec![Gen::S(i), Gen::SBar(j)], c1);
            phi23 = phi23 + FormExpr::term(vec![Gen::S(i), Gen::T(j)], Laurent::constant(Complex64::new(y / PI, 0.0)));
        }
    }
    (phi1, phi23)
}

/// Measured proportionality of each λ-degree of the fiber curvature to its
/// HKLR counterpart `2iΦ₁`, `Φ₂+iΦ₃`, `Φ₂−iΦ₃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberDecomposition {
    /// Constants for λ-degrees −1, 0, 1.
    pub constants: [Complex64; 3],
    /// Largest `|F_d − c_d H_d|` coefficient.
    pub residual: f64,
    /// Largest pairwise difference of the constants.
    pub spread: f64,
    /// Largest coefficient of `F|fiber` outside degrees −1..1.
    pub stray_degrees: f64,
}

impl FiberDecomposition {
    pub fn common_constant(&self) -> Complex64 {
        self.constants.iter().sum::<Complex64>() / 3.0
    }
}

/// Least-squares `c` with `a ≈ c·b`, and the remaining max residual.
fn proportionality(a: &FormExpr, b: &FormExpr) -> (Complex64, f64) {
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (m, cb) in b.terms() {
        let x = cb.coeff(0);
        num += a.coeff(m).coeff(0) * x.conj();
        den += x.norm_sqr();
    }
    let c = if den > 0.0 { num / den } else { Complex64::new(0.0, 0.0) };
    (c, a.distance(&b.scale(c)))
}

pub fn fiber_decomposition_check(omega: &PeriodMatrix, tp: &TwistorPoint) -> Result<FiberDecomposition, TwistorError> {
    let fiber = pullback_curvature(omega, tp)?.without_dlambda();
    let (phi1, phi23) = hklr_forms(omega);
    let targets = [phi23.clone(), phi1.scale(Complex64::new(0.0, 2.0)), phi23.conj()];
    let mut constants = [Complex64::new(0.0, 0.0); 3];
    let mut residual: f64 = 0.0;
    for (k, deg) in (-1..=1).enumerate() {
        let (c, r) = proportionality(&fiber.lambda_part(deg), &targets[k]);
        constants[k] = c;
        residual = residual.max(r);
    }
    let mut spread: f64 = 0.0;
    for a in &constants {
        for b in &constants {
            spread = spread.max((a - b).norm());
        }
    }
    let stray_degrees = fiber
        .lambda_support()
        .into_iter()
        .filter(|d| !(-1..=1).contains(d))
        .map(|d| fiber.lambda_part(d).max_abs())
        .fold(0.0, f64::max);
    Ok(FiberDecomposition {
        constants,
        residual,
        spread,
        stray_degrees,
    })
}

/// Reality structure of the fiber curvature at `|λ| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberReality {
    /// `|conj F₀ + F₀|`: the degree-0 part is imaginary.
    pub degree_zero: f64,
    /// `|conj(λ⁻¹F₋₁) − λF₁|`: the outer degrees are exchanged.
    pub exchange: f64,
    /// `|conj F + F|` for the whole fiber part; not expected to vanish.
    pub whole: f64,
}

pub fn fiber_reality(omega: &PeriodMatrix, tp: &TwistorPoint) -> Result<FiberReality, TwistorError> {
    let lambda = tp.lambda()?;
    let fiber = pullback_curvature(omega, tp)?.without_dlambda();
    let at = |deg: i32| {
        let p = fiber.lambda_part(deg);
        p.scale(lambda.powi(deg))
    };
    let (fm, f0, fp) = (at(-1), at(0), at(1));
    let whole = fiber.eval_lambda(lambda);
    Ok(FiberReality {
        degree_zero: (f0.conj() + f0).max_abs(),
        exchange: fm.conj().distance(&fp),
        whole: (whole.conj() + whole).max_abs(),
    })
}

/// `−(1/π) Σ (Im Ω)_ij t_i ds_j`, the residue at `λ = 0`.
pub fn connection_residue(omega: &PeriodMatrix, t: &[Complex64]) -> Result<FormExpr, TwistorError> {
    let g = omega.genus();
    check_genus(omega, t.len())?;
    let mut out = FormExpr::zero();
    for j in 0..g {
        let c: Complex64 = (0..g).map(|i| omega.imag()[(i, j)] * t[i]).sum::<Complex64>() * (-1.0 / PI);
        out = out + FormExpr::term(vec![Gen::S(j)], Laurent::constant(c));
    }
    Ok(out)
}

/// `tr_{Div m/S}(∇ℓ/ℓ)` as a `(dτ, dσ)` covector, where the moving point
/// of `m` travels with `σ`.
pub fn trace_over_moving_divisor(
    surface: &EllipticSurface,
    l: &SectionData,
    m: &SectionData,
) -> Result<[Complex64; 2], TwistorError> {
    let mut acc = divisor_trace(&m.divisor(), |z| connection_form(surface, l, z))?;
    if let Some(p0) = m.p.first() {
        acc[1] += dlog_section_dz(surface, l, *p0)? * surface.du_ds();
    }
    Ok(acc)
}

/// Divisor layout of a section family: fixed poles, fixed extra zeros; the
/// first zero is solved from the divisor equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionTemplate {
    pub q: Vec<Complex64>,
    pub p_rest: Vec<Complex64>,
}

impl SectionTemplate {
    pub fn at(&self, surface: &EllipticSurface, t: Complex64, s: Complex64) -> Result<SectionData, TwistorError> {
        Ok(SectionData::with_moving_point(surface, self.q.clone(), self.p_rest.clone(), t, s)?)
    }
}

/// Numerical residue at `λ = 0` of the trace connection pulled back to
/// the twistor chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueLimit {
    pub lambdas: Vec<f64>,
    /// `λ · (ds-coefficient)` at each `λ`.
    pub samples: Vec<Complex64>,
    /// `λ · (dt-coefficient)` at each `λ`.
    pub dt_samples: Vec<Complex64>,
    pub extrapolated: Complex64,
    pub expected: Complex64,
    pub relative_error: f64,
}

/// Richardson extrapolation to `h → 0` from samples at `h, h/2, h/4, …`
/// with an error series in integer powers of `h`.
pub fn richardson(samples: &[Complex64]) -> Complex64 {
    let mut row = samples.to_vec();
    let mut factor = 2.0;
    while row.len() > 1 {
        row = row.windows(2).map(|w| (factor * w[1] - w[0]) / (factor - 1.0)).collect();
        factor *= 2.0;
    }
    row[0]
}

/// Evaluates `λ·tr_{Div m}(∇ℓ/ℓ)` at `λ ∈ lambdas` (halving sequence) on
/// the image of `(t, s, λ)` and extrapolates to `λ = 0`.
pub fn residue_limit(
    surface: &EllipticSurface,
    l: &SectionTemplate,
    m: &SectionTemplate,
    t: Complex64,
    s: Complex64,
    lambdas: &[f64],
) -> Result<ResidueLimit, TwistorError> {
    let mut samples = Vec::with_capacity(lambdas.len());
    let mut dt_samples = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let tp = TwistorPoint::new(vec![t], vec![s], Complex64::new(lam, 0.0))?;
        let image = twistor_to_de_rham(&tp)?;
        let (tau, sigma) = (image.t[0], image.s[0]);
        let lsec = l.at(surface, tau, sigma)?;
        let msec = m.at(surface, tau, sigma)?;
        let [a_tau, a_sigma] = trace_over_moving_divisor(surface, &lsec, &msec)?;
        // dτ = λ⁻¹dt − ds̄ + …, dσ = ds + λdt̄ + …
        samples.push(lam * a_sigma);
        dt_samples.push(a_tau);
    }
    let extrapolated = richardson(&samples);
    let omega = surface.period_matrix();
    let expected = connection_residue(omega, &[t])?.coeff(&[Gen::S(0)]).coeff(0);
    let relative_error = (extrapolated - expected).norm() / expected.norm().max(f64::MIN_POSITIVE);
    Ok(ResidueLimit {
        lambdas: lambdas.to_vec(),
        samples,
        dt_samples,
        extrapolated,
        expected,
        relative_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lambda_connection_special_values() {
        let p = DeRhamPoint::new(vec![c(0.3, -0.2)], vec![c(0.1, 0.5)]).unwrap();
        let one = lambda_connection(&p, c(1.0, 0.0));
        assert_eq!((one.antiholo[0], one.holo[0]), (p.s[0], p.t[0]));
        let minus = lambda_connection(&p, c(-1.0, 0.0));
        assert!((minus.antiholo[0] + p.t[0].conj()).norm() < 1e-15);
        let zero = lambda_connection(&p, c(0.0, 0.0));
        assert!((zero.antiholo[0] - 0.5 * (p.s[0] - p.t[0].conj())).norm() < 1e-15);
        assert!((zero.holo[0] - 0.5 * (p.t[0] + p.s[0].conj())).norm() < 1e-15);
    }

    #[test]
    fn twistor_map() {
        let t = c(0.4, 0.7);
        let tp = TwistorPoint::new(vec![t], vec![c(0.0, 0.0)], c(1.0, 0.0)).unwrap();
        let p = twistor_to_de_rham(&tp).unwrap();
        assert_eq!((p.t[0], p.s[0]), (t, t.conj()));
        assert_eq!(twistor_consistency_residual(&tp).unwrap(), 0.0);
        let at_zero = TwistorPoint::new(vec![t], vec![t], c(0.0, 0.0)).unwrap();
        assert_eq!(twistor_to_de_rham(&at_zero), Err(TwistorError::LambdaOnDivisor));
    }

    #[test]
    fn charts_agree() {
        let tp = TwistorPoint::new(vec![c(0.2, 0.1)], vec![c(-0.3, 0.4)], c(0.5, 0.5)).unwrap();
        let other = tp.switch_chart().unwrap();
        assert_eq!(other.chart, Chart::Infinity);
        let (a, b) = (twistor_to_de_rham(&tp).unwrap(), twistor_to_de_rham(&other).unwrap());
        assert!((a.t[0] - b.t[0]).norm() < 1e-14 && (a.s[0] - b.s[0]).norm() < 1e-14);
        let anti = tp.antipodal_parameter();
        assert!((anti.lambda().unwrap() + 1.0 / tp.lambda().unwrap().conj()).norm() < 1e-14);
        assert_eq!(anti.antipodal_parameter(), tp);
        let at_infinity = TwistorPoint::in_infinity_chart(vec![c(0.0, 0.0)], vec![c(0.0, 0.0)], c(0.0, 0.0)).unwrap();
        assert_eq!(at_infinity.lambda(), Err(TwistorError::LambdaOnDivisor));
    }

    #[test]
    fn curvature_degrees_and_scaling() {
        let om = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        let tp = TwistorPoint::new(vec![c(0.0, 0.0)], vec![c(0.3, 0.1)], c(1.0, 0.0)).unwrap();
        let f = pullback_curvature(&om, &tp).unwrap();
        assert!(f.dlambda_part().is_zero());
        assert_eq!(f.without_dlambda().lambda_support(), vec![-1, 0, 1]);
        let coeff = f.eval_lambda(c(1.0, 0.0)).coeff(&[Gen::T(0), Gen::S(0)]).coeff(0);
        assert!((coeff - c(-2.0 / PI, 0.0)).norm() < 1e-15);
        let moving = TwistorPoint::new(vec![c(0.2, -0.5)], vec![c(0.3, 0.1)], c(0.7, 0.2)).unwrap();
        let g = pullback_curvature(&om, &moving).unwrap();
        assert!(g.lambda_support().iter().all(|d| (-2..=1).contains(d)));
        assert!(!g.dlambda_part().is_zero());
    }

    #[test]
    fn hklr_shapes() {
        let om = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        let (phi1, phi23) = hklr_forms(&om);
        let i2pi = c(0.0, 1.0 / (2.0 * PI));
        assert!((phi1.coeff(&[Gen::T(0), Gen::TBar(0)]).coeff(0) - i2pi).norm() < 1e-15);
        assert!((phi1.coeff(&[Gen::S(0), Gen::SBar(0)]).coeff(0) - i2pi).norm() < 1e-15);
        assert!(phi1.conj().distance(&phi1) < 1e-15);
        assert_eq!(phi23.lambda_support(), vec![0]);
    }

    #[test]
    fn fiber_decomposition_constant() {
        let om = PeriodMatrix::from_rows(&[vec![c(0.1, 1.2), c(0.3, 0.2)], vec![c(0.3, 0.2), c(-0.2, 0.8)]]).unwrap();
        let tp = TwistorPoint::new(vec![c(0.2, 0.1), c(-0.4, 0.3)], vec![c(0.5, 0.0), c(0.1, -0.2)], c(0.0, 2.0)).unwrap();
        let report = fiber_decomposition_check(&om, &tp).unwrap();
        assert!(report.residual < 1e-12 && report.spread < 1e-12 && report.stray_degrees == 0.0);
        assert!((report.common_constant() - 2.0).norm() < 1e-12);
    }

    #[test]
    fn reality_at_unit_circle() {
        let om = PeriodMatrix::from_tau(c(0.3, 1.1)).unwrap();
        let s = c(0.2, 0.3);
        let tp = TwistorPoint::new(vec![-s.conj()], vec![s], Complex64::from_polar(1.0, 0.7)).unwrap();
        let r = fiber_reality(&om, &tp).unwrap();
        assert!(r.degree_zero < 1e-15 && r.exchange < 1e-15);
        assert!(r.whole > 1e-3);
    }

    #[test]
    fn residue_values() {
        let om = PeriodMatrix::from_tau(c(0.0, 1.0)).unwrap();
        assert!(connection_residue(&om, &[c(0.0, 0.0)]).unwrap().is_zero());
        let r = connection_residue(&om, &[c(PI, 0.0)]).unwrap();
        assert!((r.coeff(&[Gen::S(0)]).coeff(0) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn richardson_removes_linear_and_quadratic_terms() {
        let f = |h: f64| c(3.0 + 2.0 * h - 5.0 * h * h, h);
        let v = richardson(&[f(0.1), f(0.05), f(0.025)]);
        assert!((v - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn residue_matches_numeric_limit() {
        let surface = EllipticSurface::new(c(0.2, 1.1)).unwrap();
        let l = SectionTemplate {
            q: vec![surface.from_coords(0.15, 0.2), surface.from_coords(0.6, 0.55)],
            p_rest: vec![surface.from_coords(0.35, 0.8)],
        };
        let m = SectionTemplate {
            q: vec![surface.from_coords(0.8, 0.1)],
            p_rest: vec![],
        };
        let lim = residue_limit(&surface, &l, &m, c(0.1, 0.05), c(0.1, 0.15), &[0.1, 0.05, 0.025]).unwrap();
        assert!(lim.relative_error < 1e-4, "{lim:?}");
        assert!(lim.dt_samples.iter().all(|z| z.norm() < 1e-12));
    }
}
