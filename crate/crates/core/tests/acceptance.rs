//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use delpair::harness::grid::{ComplexBox, Sampler};
use delpair::harness::{run_task, CheckName, VerificationReport, VerificationTask};
use delpair::moduli::{
    betti_of_de_rham, jacobian_lift, jacobian_of_character, jacobian_of_de_rham, lattice_residual,
    unitary_betti, unitary_section, unitary_section_of_lift, DeRhamPoint,
};
use delpair::theta::{theta, theta_with_gradient, Characteristic};
use delpair::{c64, Complex64, PeriodMatrix};
use num_rational::Ratio;

const POINTS: usize = 100;
const TOL: f64 = 1e-14;

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn random_char(s: &mut Sampler, g: usize) -> Characteristic {
    let mut half = || Ratio::new((s.uniform(0.0, 2.0) as i64).min(1), 2);
    let a = (0..g).map(|_| half()).collect();
    let b = (0..g).map(|_| half()).collect();
    Characteristic::new(a, b).unwrap()
}

fn ch_f64(ch: &Characteristic) -> (Vec<f64>, Vec<f64>) {
    let f = |r: &Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
    (ch.alpha().iter().map(f).collect(), ch.beta().iter().map(f).collect())
}

fn perturbed(omega: &PeriodMatrix, j: usize, k: usize, h: f64) -> PeriodMatrix {
    let mut rows = omega.to_rows();
    rows[j][k] += h;
    if j != k {
        rows[k][j] += h;
    }
    PeriodMatrix::from_rows(&rows).unwrap()
}

fn theta_suites() -> Outcome {
    let mut s = Sampler::new(2024);
    let zbox = ComplexBox::square(-0.5, 0.5);
    let (mut quasi, mut parity, mut heat, mut grad) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 0..POINTS {
        let g = 1 + n % 3;
        let omega = s.period_matrix(g);
        let ch = random_char(&mut s, g);
        let (alpha, beta) = ch_f64(&ch);
        let z = s.vector(g, &zbox);
        let j = n % g;
        let base = theta(&z, &omega, &ch, TOL).unwrap().value();

        let mut za = z.clone();
        za[j] += 1.0;
        let a = theta(&za, &omega, &ch, TOL).unwrap().value();
        quasi = quasi.max(rel(a, base * Complex64::from_polar(1.0, 2.0 * PI * alpha[j])));

        let zb: Vec<_> = (0..g).map(|i| z[i] + omega.get(i, j)).collect();
        let b = theta(&zb, &omega, &ch, TOL).unwrap().value();
        let factor = (Complex64::i() * (-2.0 * PI * beta[j] - 2.0 * PI * z[j]) - Complex64::i() * PI * omega.get(j, j)).exp();
        quasi = quasi.max(rel(b, base * factor));

        let zm: Vec<_> = z.iter().map(|w| -w).collect();
        let m = theta(&zm, &omega, &ch, TOL).unwrap().value();
        parity = parity.max(rel(m, base * ch.parity().unwrap() as f64));

        // ∂θ/∂Ω_jk = (1 + δ_jk)/(4πi) ∂²θ/∂z_j∂z_k
        let k = (n / 3) % g;
        let h = 1e-4;
        let dom = (theta(&z, &perturbed(&omega, j, k, h), &ch, TOL).unwrap().value()
            - theta(&z, &perturbed(&omega, j, k, -h), &ch, TOL).unwrap().value())
            / (2.0 * h);
        let hz = 1e-5;
        let grad_at = |dz: f64| {
            let mut w = z.clone();
            w[k] += dz;
            let v = theta_with_gradient(&w, &omega, &ch, TOL).unwrap();
            v.gradient_value().unwrap()[j]
        };
        let second = (grad_at(hz) - grad_at(-hz)) / (2.0 * hz);
        let weight = if j == k { 1.0 } else { 2.0 };
        let predicted = second * weight / (Complex64::i() * 4.0 * PI);
        if predicted.norm() > 1e-6 {
            heat = heat.max(rel(dom, predicted));
        }

        let v = theta_with_gradient(&z, &omega, &ch, TOL).unwrap();
        let analytic = v.gradient_value().unwrap();
        for i in 0..g {
            let step = |d: Complex64| {
                let mut w = z.clone();
                w[i] += d;
                theta(&w, &omega, &ch, TOL).unwrap().value()
            };
            let h = 1e-4;
            let fd = (step(c64(h, 0.0)) - step(c64(-h, 0.0))) / (2.0 * h);
            let fdi = (step(c64(0.0, h)) - step(c64(0.0, -h))) / (Complex64::i() * 2.0 * h);
            let d = analytic[i];
            let scale = d.norm().max(base.norm()).max(1.0);
            grad = grad.max((fd - d).norm() / scale).max((fdi - d).norm() / scale);
        }
    }
    Outcome {
        ok: quasi < 1e-10 && parity < 1e-10 && heat < 1e-4 && grad < 1e-6,
        detail: format!("quasi={quasi:.1e} parity={parity:.1e} heat={heat:.1e} grad={grad:.1e}"),
    }
}

fn coordinates() -> Outcome {
    let mut s = Sampler::new(77);
    let b = ComplexBox::square(-1.0, 1.0);
    let (mut trip, mut cross) = (0.0f64, 0.0f64);
    for n in 0..POINTS {
        let g = 1 + n % 3;
        let omega = s.period_matrix(g);
        let p = DeRhamPoint::new(s.vector(g, &b), s.vector(g, &b)).unwrap();

        let u = jacobian_of_de_rham(&p, &omega).unwrap();
        let back = jacobian_lift(&unitary_section(&u, &omega), &omega);
        let d: Vec<_> = back.iter().zip(&u.lift).map(|(x, y)| x - y).collect();
        trip = trip.max(lattice_residual(&d, &omega));

        let q = DeRhamPoint::unitary(p.s.clone());
        let again = unitary_section_of_lift(&jacobian_lift(&q, &omega), &omega);
        let dq = again.s.iter().zip(&q.s).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        trip = trip.max(dq);

        let lift = jacobian_lift(&p, &omega);
        for chi in [betti_of_de_rham(&p, &omega).unwrap(), unitary_betti(&q, &omega).unwrap()] {
            let w = jacobian_of_character(&chi, &omega);
            let d: Vec<_> = w.iter().zip(&lift).map(|(x, y)| x - y).collect();
            cross = cross.max(lattice_residual(&d, &omega));
        }
    }
    Outcome {
        ok: trip < 1e-10 && cross < 1e-10,
        detail: format!("round-trip={trip:.1e} u-cross={cross:.1e}"),
    }
}

fn summarize(reports: &[VerificationReport]) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in reports {
        let status = match (&r.error, &r.skipped) {
            (Some(e), _) => {
                ok = false;
                format!("error {e}")
            }
            (None, Some(why)) => {
                ok = false;
                format!("skipped {why}")
            }
            (None, None) => {
                ok &= r.pass;
                format!("max={:.1e}", r.max)
            }
        };
        let tau = r.task.tau.map(|t| format!("[{t}]")).unwrap_or_default();
        parts.push(format!("{}{tau} {status}", r.task.check));
    }
    Outcome {
        ok,
        detail: parts.join("; "),
    }
}

fn tasks(list: Vec<VerificationTask>) -> Outcome {
    let reports: Vec<_> = list.iter().map(run_task).collect();
    summarize(&reports)
}

fn reciprocity() -> Outcome {
    let tau = c64(0.2, 1.1);
    tasks(vec![
        VerificationTask::new(CheckName::Reciprocity).with_tau(tau).with_grid(25),
        VerificationTask::new(CheckName::Reciprocity1).with_tau(tau),
        VerificationTask::new(CheckName::Reciprocity2).with_tau(tau),
    ])
}

fn flatness() -> Outcome {
    tasks(
        [c64(0.0, 1.0), c64(1.0, 2.0), c64(0.3, 1.7)]
            .into_iter()
            .map(|tau| VerificationTask::new(CheckName::Flatness).with_tau(tau))
            .collect(),
    )
}

fn curvature() -> Outcome {
    tasks(vec![VerificationTask::new(CheckName::Curvature).with_seed(5)])
}

fn twistor() -> Outcome {
    let task = VerificationTask::new(CheckName::Twistor).with_tau(c64(0.3, 1.7)).with_grid(10);
    let r = run_task(&task);
    let mut out = summarize(std::slice::from_ref(&r));
    if let Some(c) = r.constants.get("proportionality") {
        out.detail.push_str(&format!(" constant={c}"));
    }
    out
}

fn torsion_oracle() -> Outcome {
    let mut task = VerificationTask::new(CheckName::TorsionOracle).with_tau(c64(0.0, 1.0)).with_grid(4);
    task.slow = true;
    let r = run_task(&task);
    let mut out = summarize(std::slice::from_ref(&r));
    if let Some(c) = r.constants.get("offset") {
        out.detail.push_str(&format!(" offset={:.12}", c.re));
    }
    out
}

fn gm_curvature() -> Outcome {
    tasks(vec![VerificationTask::new(CheckName::GmCurvature).with_tau(c64(0.2, 1.1)).with_grid(9)])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("theta identities", Duration::from_secs(10), theta_suites),
        ("coordinate atlas", Duration::from_secs(1), coordinates),
        ("Weil reciprocity", Duration::from_secs(30), reciprocity),
        ("torsion flatness", Duration::from_secs(10), flatness),
        ("curvature identities", Duration::from_secs(10), curvature),
        ("twistor lines", Duration::from_secs(60), twistor),
        ("spectral torsion oracle", Duration::from_secs(120), torsion_oracle),
        ("Gauss-Manin curvature", Duration::from_secs(30), gm_curvature),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took <= *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {:<24} {}  {:.2}s/{}s  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
