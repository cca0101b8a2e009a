//! The verification checks behind `delpair verify`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use super::grid::{grid_points, ComplexBox, Sampler};
use super::report::{
    CheckName, CheckOutcome, DivisorConfig, Residual, TaskError, VerificationReport, VerificationTask, Witness,
};
use crate::forms::{intersection_curvature, trace_curvature, FormError, FormExpr, Gen, Laurent};
use crate::moduli::{gm_invariant, gm_invariant_unitary, DeRhamPoint};
use crate::period::{PeriodError, PeriodMatrix};
use crate::surface::{
    gm_periods_from_curvature, reciprocity_i, reciprocity_ii, weil_residual, EllipticSurface, FormClass,
    FunctionData, SectionData, SurfaceError,
};
use crate::theta::{log_theta_norm, Characteristic, ThetaError};
use crate::torsion::{
    flatness_defect, flatness_residual, spectral_det_genus1, Method, SpectralConfig, TorsionError, TorsionPoint,
};
use crate::twistor::{
    fiber_decomposition_check, fiber_reality, residue_limit, SectionTemplate, TwistorError, TwistorPoint,
};

/// Tolerance of numerical `λ → 0` limits.
pub const LIMIT_TOL: f64 = 1e-4;

/// Smallest lattice distance between randomly drawn divisor points.
const SEPARATION: f64 = 0.08;

const DIVISOR_CONFIGS: usize = 5;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Twistor(#[from] TwistorError),
    #[error("could not draw separated divisors after {0} attempts")]
    Sampling(usize),
}

fn default_tau() -> Complex64 {
    Complex64::new(0.0, 1.0)
}

fn period_matrix(task: &VerificationTask) -> Result<PeriodMatrix, CheckError> {
    match (&task.omega, task.tau) {
        (Some(rows), _) => Ok(PeriodMatrix::from_rows(rows)?),
        (None, Some(tau)) => Ok(PeriodMatrix::from_tau(tau)?),
        (None, None) => Ok(PeriodMatrix::from_tau(default_tau())?),
    }
}

fn genus_one_tau(task: &VerificationTask) -> Result<Complex64, CheckError> {
    let om = period_matrix(task)?;
    if om.genus() != 1 {
        return Err(TaskError::Invalid(format!("{} runs at genus one, got genus {}", task.check, om.genus())).into());
    }
    Ok(om.get(0, 0))
}

fn residual(label: impl Into<String>, point: Vec<Complex64>, value: f64, tol: f64) -> Residual {
    Residual {
        label: label.into(),
        point,
        value,
        tol,
    }
}

fn min_separation(surface: &EllipticSurface, points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(surface.lattice_distance(a - b));
        }
    }
    best
}

fn points_of(divisor: &[(Complex64, i32)]) -> Vec<Complex64> {
    divisor.iter().map(|(z, _)| *z).collect()
}

fn random_point(surface: &EllipticSurface, sampler: &mut Sampler) -> Complex64 {
    surface.from_coords(sampler.uniform(0.0, 1.0), sampler.uniform(0.0, 1.0))
}

/// Draws a function with divisor `x₁ + x₂ − y₁ − y₂` whose points are
/// separated from each other and from `avoid`.
fn random_function(surface: &EllipticSurface, sampler: &mut Sampler, avoid: &[Complex64]) -> Result<FunctionData, CheckError> {
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let x = vec![random_point(surface, sampler), random_point(surface, sampler)];
        let y = vec![random_point(surface, sampler)];
        let Ok(f) = FunctionData::closing(surface, x, y) else { continue };
        let mut pts = points_of(&f.divisor());
        pts.extend_from_slice(avoid);
        if min_separation(surface, &pts) >= SEPARATION {
            return Ok(f);
        }
    }
    Err(CheckError::Sampling(ATTEMPTS))
}

fn random_section(
    surface: &EllipticSurface,
    sampler: &mut Sampler,
    t: Complex64,
    s: Complex64,
    avoid: &[Complex64],
) -> Result<SectionData, CheckError> {
    const ATTEMPTS: usize = 1000;
    for _ in 0..ATTEMPTS {
        let q = vec![random_point(surface, sampler), random_point(surface, sampler)];
        let p_rest = vec![random_point(surface, sampler)];
        let Ok(l) = SectionData::with_moving_point(surface, q, p_rest, t, s) else { continue };
        let mut pts = points_of(&l.divisor());
        pts.extend_from_slice(avoid);
        if min_separation(surface, &pts) >= SEPARATION {
            return Ok(l);
        }
    }
    Err(CheckError::Sampling(ATTEMPTS))
}

fn explicit_pair(
    surface: &EllipticSurface,
    cfg: &DivisorConfig,
    t: Complex64,
    s: Complex64,
) -> Result<(FunctionData, SectionData), CheckError> {
    let f = FunctionData::closing(surface, cfg.function_zeros.clone(), cfg.function_poles.clone())?;
    let l = SectionData::with_moving_point(surface, cfg.section_poles.clone(), cfg.section_zeros.clone(), t, s)?;
    Ok((f, l))
}

fn reciprocity(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let surface = EllipticSurface::new(genus_one_tau(task)?)?;
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let box_ = ComplexBox::square(-0.4, 0.4);
    let s_points = grid_points(task.grid(), &box_, &mut sampler);
    let mut cases = Vec::new();
    for s in s_points {
        let t = sampler.in_box(&box_);
        match &task.divisors {
            Some(cfg) => cases.push((t, s, explicit_pair(&surface, cfg, t, s)?)),
            None => {
                for _ in 0..DIVISOR_CONFIGS {
                    let l = random_section(&surface, &mut sampler, t, s, &[])?;
                    let f = random_function(&surface, &mut sampler, &points_of(&l.divisor()))?;
                    cases.push((t, s, (f, l)));
                }
            }
        }
    }
    let residuals = cases
        .par_iter()
        .enumerate()
        .map(|(k, (t, s, (f, l)))| {
            let r = weil_residual(&surface, l, f)?;
            Ok(residual(
                format!("weil[{k}]"),
                vec![*t, *s],
                r[0].norm().max(r[1].norm()),
                tol,
            ))
        })
        .collect::<Result<Vec<_>, CheckError>>()?;
    Ok(CheckOutcome {
        residuals,
        ..Default::default()
    })
}

fn reciprocity_first(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let surface = EllipticSurface::new(genus_one_tau(task)?)?;
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let mut residuals = Vec::new();
    let mut contour: f64 = 0.0;
    for k in 0..task.grid() {
        let f = match &task.divisors {
            Some(cfg) => FunctionData::closing(&surface, cfg.function_zeros.clone(), cfg.function_poles.clone())?,
            None => random_function(&surface, &mut sampler, &[])?,
        };
        for (class, name) in [(FormClass::Omega, "omega"), (FormClass::OmegaBar, "omega-bar")] {
            let r = reciprocity_i(&surface, class, &f)?;
            contour = contour.max(r.contour_residual);
            residuals.push(residual(format!("{name}[{k}]"), points_of(&f.divisor()), r.residual.norm(), tol));
            residuals.push(residual(
                format!("{name}-contour[{k}]"),
                points_of(&f.divisor()),
                r.contour_residual,
                tol,
            ));
        }
    }
    let mut constants = BTreeMap::new();
    constants.insert("max_contour_residual".into(), Complex64::new(contour, 0.0));
    Ok(CheckOutcome {
        residuals,
        constants,
        ..Default::default()
    })
}

fn reciprocity_second(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let surface = EllipticSurface::new(genus_one_tau(task)?)?;
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let mut residuals = Vec::new();
    for k in 0..task.grid() {
        let f = random_function(&surface, &mut sampler, &[])?;
        let g = random_function(&surface, &mut sampler, &points_of(&f.divisor()))?;
        let r = reciprocity_ii(&surface, &f, &g)?;
        let pts = points_of(&f.divisor());
        residuals.push(residual(format!("law[{k}]"), pts.clone(), r.residual.norm(), tol));
        residuals.push(residual(format!("contour[{k}]"), pts, r.contour_residual, tol));
    }
    Ok(CheckOutcome {
        residuals,
        ..Default::default()
    })
}

fn flatness(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let omega = period_matrix(task)?;
    let g = omega.genus();
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let box_ = ComplexBox::square(0.1, 0.5);
    let points: Vec<Vec<Complex64>> = if g == 1 {
        grid_points(task.grid(), &box_, &mut sampler).into_iter().map(|s| vec![s]).collect()
    } else {
        (0..task.grid()).map(|_| sampler.vector(g, &box_)).collect()
    };
    let residuals = points
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let pt = TorsionPoint::new(omega.clone(), DeRhamPoint::unitary(s.clone()))?;
            Ok(residual(format!("s[{k}]"), s.clone(), flatness_residual(&pt)?, tol))
        })
        .collect::<Result<Vec<_>, CheckError>>()?;
    let shifts = [Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.3), Complex64::new(-0.25, 0.1)];
    let mut witnesses = Vec::new();
    for (k, shift) in shifts.iter().enumerate() {
        let s = &points[k % points.len()];
        let t: Vec<Complex64> = s.iter().map(|z| -z.conj() + shift).collect();
        let pt = TorsionPoint::new(omega.clone(), DeRhamPoint { t: t.clone(), s: s.clone() })?;
        let defect = flatness_defect(&pt, Method::Analytic)?.max_abs();
        let mut point = t;
        point.extend_from_slice(s);
        witnesses.push(Witness {
            label: format!("off-locus[{k}]"),
            point,
            value: defect,
            min: 1e-3,
        });
    }
    Ok(CheckOutcome {
        residuals,
        witnesses,
        ..Default::default()
    })
}

/// `−(2/π) Σ (Im Ω)_ij dt_i ∧ ds_j`, built directly.
fn universal_curvature(omega: &PeriodMatrix) -> FormExpr {
    let g = omega.genus();
    let mut f = FormExpr::zero();
    for i in 0..g {
        for j in 0..g {
            let c = Complex64::new(-2.0 * omega.imag()[(i, j)] / PI, 0.0);
            f = f + FormExpr::term(vec![Gen::T(i), Gen::S(j)], Laurent::constant(c));
        }
    }
    f
}

fn curvature(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let matrices: Vec<PeriodMatrix> = if task.omega.is_some() || task.tau.is_some() {
        vec![period_matrix(task)?]
    } else {
        (1..=3)
            .flat_map(|g| (0..task.grid()).map(move |_| g))
            .map(|g| sampler.period_matrix(g))
            .collect()
    };
    let mut residuals = Vec::new();
    for (k, om) in matrices.iter().enumerate() {
        let g = om.genus();
        let point = om.to_rows().into_iter().flatten().collect::<Vec<_>>();
        let nu = gm_invariant(g);
        let unitary = gm_invariant_unitary(g);
        let inter = intersection_curvature(om, &nu, &nu)?;
        residuals.push(residual(format!("intersection[{k}]"), point.clone(), inter.distance(&universal_curvature(om)), tol));
        let mixed = intersection_curvature(om, &nu, &unitary)?;
        let trace = trace_curvature(om, &nu, &unitary)?;
        residuals.push(residual(format!("trace-unitary[{k}]"), point.clone(), trace.distance(&mixed), tol));
        let frozen = nu.freeze_s();
        let flat = trace_curvature(om, &frozen, &frozen)?.max_abs();
        // the flat case is asserted exactly
        residuals.push(residual(format!("flat[{k}]"), point, flat, 0.0));
    }
    Ok(CheckOutcome {
        residuals,
        ..Default::default()
    })
}

fn twistor(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let omega = period_matrix(task)?;
    let g = omega.genus();
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let lambdas = match task.lambda {
        Some(l) => vec![l],
        None => vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)],
    };
    let box_ = ComplexBox::square(-0.5, 0.5);
    let points: Vec<(Vec<Complex64>, Vec<Complex64>)> =
        (0..task.grid()).map(|_| (sampler.vector(g, &box_), sampler.vector(g, &box_))).collect();
    let mut reference: Option<Complex64> = None;
    let mut residuals = Vec::new();
    let mut constants = BTreeMap::new();
    let mut whole: f64 = 0.0;
    for lambda in &lambdas {
        for (k, (t, s)) in points.iter().enumerate() {
            let tp = TwistorPoint::new(t.clone(), s.clone(), *lambda)?;
            let d = fiber_decomposition_check(&omega, &tp)?;
            let c = d.common_constant();
            let c0 = *reference.get_or_insert(c);
            let mut point = t.clone();
            point.extend_from_slice(s);
            point.push(*lambda);
            residuals.push(residual(
                format!("decomposition[λ={lambda}, {k}]"),
                point,
                d.residual.max(d.spread).max((c - c0).norm()).max(d.stray_degrees),
                tol,
            ));
        }
    }
    for (k, (_, s)) in points.iter().enumerate() {
        let unit = Complex64::from_polar(1.0, 0.37 + 1.1 * k as f64);
        let t: Vec<Complex64> = s.iter().map(|z| -z.conj()).collect();
        let tp = TwistorPoint::new(t, s.clone(), unit)?;
        let r = fiber_reality(&omega, &tp)?;
        whole = whole.max(r.whole);
        residuals.push(residual(format!("reality[{k}]"), vec![unit], r.degree_zero.max(r.exchange), tol));
    }
    if let Some(c) = reference {
        constants.insert("proportionality".into(), c);
    }
    constants.insert("whole_fiber_conj_defect".into(), Complex64::new(whole, 0.0));
    if g == 1 {
        let surface = EllipticSurface::new(omega.get(0, 0))?;
        let l = SectionTemplate {
            q: vec![surface.from_coords(0.15, 0.2), surface.from_coords(0.6, 0.55)],
            p_rest: vec![surface.from_coords(0.35, 0.8)],
        };
        let m = SectionTemplate {
            q: vec![surface.from_coords(0.8, 0.1)],
            p_rest: vec![],
        };
        let (t, s) = (Complex64::new(0.02, 0.01), Complex64::new(0.1, 0.15));
        let lim = residue_limit(&surface, &l, &m, t, s, &[0.1, 0.05, 0.025])?;
        constants.insert("residue_expected".into(), lim.expected);
        constants.insert("residue_extrapolated".into(), lim.extrapolated);
        residuals.push(residual("residue-limit", vec![t, s], lim.relative_error, LIMIT_TOL));
    }
    Ok(CheckOutcome {
        residuals,
        constants,
        ..Default::default()
    })
}

/// Offsets `log det Δ_u − log ‖θ[κ]‖²(u)` with `κ` the odd characteristic,
/// and the same with the zero characteristic.
pub fn spectral_offsets(tau: Complex64, us: &[Complex64]) -> Result<(Vec<f64>, Vec<f64>), CheckError> {
    let omega = PeriodMatrix::from_tau(tau)?;
    let odd = Characteristic::half(1);
    let zero = Characteristic::zero(1);
    let mut with_odd = Vec::new();
    let mut with_zero = Vec::new();
    for u in us {
        let det = spectral_det_genus1(*u, tau, SpectralConfig::default())?;
        with_odd.push(det - log_theta_norm(&[*u], &omega, &odd)?);
        with_zero.push(det - log_theta_norm(&[*u], &omega, &zero)?);
    }
    Ok((with_odd, with_zero))
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn torsion_oracle(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let tau = genus_one_tau(task)?;
    if !task.slow {
        return Ok(CheckOutcome {
            skipped: Some("the spectral oracle runs only with --slow".into()),
            ..Default::default()
        });
    }
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let us: Vec<Complex64> = (0..task.grid())
        .map(|_| sampler.uniform(0.15, 0.85) + sampler.uniform(0.15, 0.85) * tau)
        .collect();
    let (odd, zero) = spectral_offsets(tau, &us)?;
    let mean = odd.iter().sum::<f64>() / odd.len() as f64;
    let mut residuals: Vec<Residual> = us
        .iter()
        .zip(&odd)
        .enumerate()
        .map(|(k, (u, d))| residual(format!("u[{k}]"), vec![*u], (d - mean).abs(), tol))
        .collect();
    residuals.push(residual("spread", us.clone(), spread(&odd), tol));
    let mut constants = BTreeMap::new();
    constants.insert("offset".into(), Complex64::new(mean, 0.0));
    constants.insert("zero_characteristic_spread".into(), Complex64::new(spread(&zero), 0.0));
    Ok(CheckOutcome {
        residuals,
        constants,
        ..Default::default()
    })
}

fn gm_curvature(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    let tau = genus_one_tau(task)?;
    let surface = EllipticSurface::new(tau)?;
    let tol = task.tol();
    let mut sampler = Sampler::new(task.seed);
    let s_points = grid_points(task.grid(), &ComplexBox { re: (0.2, 0.5), im: (0.1, 0.4) }, &mut sampler);
    let cases: Vec<(Complex64, Complex64)> = s_points
        .into_iter()
        .map(|s| (sampler.in_box(&ComplexBox::square(-0.3, 0.3)), s))
        .collect();
    let q = vec![surface.from_coords(0.45, 0.85), surface.from_coords(0.9, 0.5)];
    let p_rest = vec![surface.from_coords(0.2, 0.3)];
    let base = surface.from_coords(0.02, 0.07);
    let residuals = cases
        .par_iter()
        .enumerate()
        .map(|(k, (t, s))| {
            let d = SectionData::with_moving_point(&surface, q.clone(), p_rest.clone(), *t, *s)?;
            let p = gm_periods_from_curvature(&surface, &d, base, 8, 1e-3)?;
            Ok(residual(format!("periods[{k}]"), vec![*t, *s], p.residual(tau), tol))
        })
        .collect::<Result<Vec<_>, CheckError>>()?;
    Ok(CheckOutcome {
        residuals,
        ..Default::default()
    })
}

/// Runs one check; errors are returned, not captured.
pub fn run_check(task: &VerificationTask) -> Result<CheckOutcome, CheckError> {
    task.validate()?;
    match task.check {
        CheckName::Reciprocity => reciprocity(task),
        CheckName::Reciprocity1 => reciprocity_first(task),
        CheckName::Reciprocity2 => reciprocity_second(task),
        CheckName::Flatness => flatness(task),
        CheckName::Curvature => curvature(task),
        CheckName::Twistor => twistor(task),
        CheckName::TorsionOracle => torsion_oracle(task),
        CheckName::GmCurvature => gm_curvature(task),
    }
}

/// Runs one task into a report, capturing any error in it.
pub fn run_task(task: &VerificationTask) -> VerificationReport {
    match run_check(task) {
        Ok(outcome) => VerificationReport::from_outcome(task.clone(), outcome),
        Err(e) => VerificationReport::from_error(task.clone(), format!("{e:?}")),
    }
}

/// Runs tasks concurrently; one failing task never aborts the others.
pub fn run_suite(tasks: &[VerificationTask]) -> Vec<VerificationReport> {
    tasks.par_iter().map(run_task).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::exit_code;

    #[test]
    fn empty_suite_passes() {
        let reports = run_suite(&[]);
        assert!(reports.is_empty());
        assert_eq!(exit_code(&reports), 0);
    }

    #[test]
    fn flatness_task_passes() {
        let task = VerificationTask::new(CheckName::Flatness)
            .with_tau(Complex64::new(0.0, 1.0))
            .with_grid(25)
            .with_tol(1e-8);
        let r = run_task(&task);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.residuals.len(), 25);
        assert!(r.witnesses.iter().all(|w| w.value > 1e-3));
    }

    #[test]
    fn colliding_divisors_are_reported() {
        let p = Complex64::new(0.3, 0.4);
        let mut task = VerificationTask::new(CheckName::Reciprocity).with_grid(1);
        task.divisors = Some(DivisorConfig {
            function_zeros: vec![p, Complex64::new(0.7, 0.2)],
            function_poles: vec![Complex64::new(0.1, 0.8)],
            section_poles: vec![p, Complex64::new(0.5, 0.6)],
            section_zeros: vec![Complex64::new(0.2, 0.1)],
        });
        let bad = run_task(&task);
        let good = run_task(&VerificationTask::new(CheckName::Flatness).with_grid(4));
        assert!(bad.error.as_deref().unwrap().contains("DivisorCollision"), "{bad:?}");
        assert!(good.pass);
        assert_eq!(exit_code(&[good, bad]), 1);
    }

    #[test]
    fn oracle_needs_slow_flag() {
        let r = run_task(&VerificationTask::new(CheckName::TorsionOracle));
        assert!(r.skipped.is_some() && r.pass);
    }

    #[test]
    fn invalid_task_is_captured() {
        let r = run_task(&VerificationTask::new(CheckName::Curvature).with_tol(-1.0));
        assert!(!r.pass && r.error.unwrap().contains("BadTolerance"));
    }
}
