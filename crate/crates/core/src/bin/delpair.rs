use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use delpair::harness::report::{exit_code, merge, parse_reports};
use delpair::harness::{run_suite, CheckName, SuiteReport, VerificationTask};
use delpair::theta::{evaluate, Characteristic, ThetaConfig};
use delpair::{Complex64, PeriodMatrix};
use num_rational::Ratio;

#[derive(Parser)]
#[command(name = "delpair", version, about = "Theta functions, torsion and curvature identities on moduli of rank-one local systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate θ[α,β](z, Ω) and print mantissa, exponent and tail bound as JSON.
    Theta(ThetaArgs),
    /// Run one verification check.
    Verify(VerifyArgs),
    /// Merge report files.
    Report {
        #[arg(long, num_args = 1.., required = true)]
        merge: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ThetaArgs {
    /// JSON file with the rows of Ω, entries as [re, im].
    #[arg(long, conflicts_with = "tau")]
    omega: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<Complex64>,
    /// Comma-separated complex entries of z, e.g. `0.1+0.2i,0.3`.
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Comma-separated α then β, e.g. `1/2,1/2`.
    #[arg(long = "char")]
    characteristic: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    grad: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of reciprocity, reciprocity1, reciprocity2, flatness, curvature,
    /// twistor, torsion-oracle, gm-curvature.
    check: Option<CheckName>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<Complex64>,
    #[arg(long, conflicts_with = "tau")]
    omega: Option<PathBuf>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<Complex64>,
    #[arg(long)]
    slow: bool,
    /// JSON file holding one task or a list of tasks; replaces the flags.
    #[arg(long, conflicts_with = "check")]
    task: Option<PathBuf>,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

fn invalid(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn read_omega(path: &PathBuf) -> Result<Vec<Vec<Complex64>>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
            let d: i64 = d.trim().parse().map_err(|_| format!("bad rational {s:?}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Ratio::new(n, d))
        }
        None => s.parse::<i64>().map(Ratio::from_integer).map_err(|_| format!("bad rational {s:?}")),
    }
}

fn theta_cmd(args: ThetaArgs) -> ExitCode {
    let omega = match (&args.omega, args.tau) {
        (Some(p), _) => read_omega(p).and_then(|rows| PeriodMatrix::from_rows(&rows).map_err(|e| e.to_string())),
        (None, Some(tau)) => PeriodMatrix::from_tau(tau).map_err(|e| e.to_string()),
        (None, None) => Err("give --omega or --tau".to_string()),
    };
    let omega = match omega {
        Ok(o) => o,
        Err(e) => return invalid(e),
    };
    let z: Result<Vec<Complex64>, _> = args.z.split(',').map(|s| s.trim().parse::<Complex64>()).collect();
    let Ok(z) = z else { return invalid(format!("bad --z {:?}", args.z)) };
    let g = omega.genus();
    let ch = match &args.characteristic {
        None => Ok(Characteristic::zero(g)),
        Some(text) => text
            .split(',')
            .map(parse_ratio)
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| {
                if v.len() != 2 * g {
                    return Err(format!("--char needs {} entries at genus {g}", 2 * g));
                }
                Characteristic::new(v[..g].to_vec(), v[g..].to_vec()).map_err(|e| e.to_string())
            }),
    };
    let ch = match ch {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    match evaluate(&z, &omega, &ch, args.tol, args.grad, ThetaConfig::default()) {
        Ok(v) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => invalid(e),
    }
}

fn verify_cmd(args: VerifyArgs) -> ExitCode {
    let tasks: Vec<VerificationTask> = if let Some(path) = &args.task {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return invalid(format!("{}: {e}", path.display())),
        };
        let parsed = serde_json::from_str::<Vec<VerificationTask>>(&text)
            .or_else(|_| serde_json::from_str::<VerificationTask>(&text).map(|t| vec![t]));
        match parsed {
            Ok(t) => t,
            Err(e) => return invalid(format!("{}: {e}", path.display())),
        }
    } else {
        let Some(check) = args.check else { return invalid("give a check name or --task") };
        let omega = match &args.omega {
            Some(p) => match read_omega(p) {
                Ok(o) => Some(o),
                Err(e) => return invalid(e),
            },
            None => None,
        };
        vec![VerificationTask {
            check,
            tau: args.tau,
            omega,
            grid: args.grid,
            tol: args.tol,
            seed: args.seed,
            lambda: args.lambda,
            slow: args.slow,
            divisors: None,
        }]
    };
    for t in &tasks {
        if let Err(e) = t.validate() {
            return invalid(e);
        }
    }
    let reports = run_suite(&tasks);
    for r in &reports {
        let status = match (&r.error, &r.skipped, r.pass) {
            (Some(e), _, _) => format!("ERROR {e}"),
            (None, Some(why), _) => format!("SKIP {why}"),
            (None, None, true) => "PASS".to_string(),
            (None, None, false) => "FAIL".to_string(),
        };
        println!(
            "{:<15} {status}  max={:.3e} mean={:.3e} points={}",
            r.task.check,
            r.max,
            r.mean,
            r.residuals.len()
        );
        for (name, value) in &r.constants {
            println!("    {name} = {value}");
        }
    }
    let code = exit_code(&reports);
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&SuiteReport::new(reports))
    }
    .expect("serializable");
    if let Some(path) = &args.json_out {
        if let Err(e) = fs::write(path, json) {
            return invalid(format!("{}: {e}", path.display()));
        }
    }
    ExitCode::from(code as u8)
}

fn report_cmd(files: Vec<PathBuf>, out: Option<PathBuf>) -> ExitCode {
    let mut parts = Vec::new();
    for path in &files {
        let parsed = fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| parse_reports(&t).map_err(|e| e.to_string()));
        match parsed {
            Ok(r) => parts.push(r),
            Err(e) => return invalid(format!("{}: {e}", path.display())),
        }
    }
    let suite = merge(parts);
    let code = exit_code(&suite.reports);
    let json = serde_json::to_string_pretty(&suite).expect("serializable");
    match out {
        Some(path) => {
            if let Err(e) = fs::write(&path, json) {
                return invalid(format!("{}: {e}", path.display()));
            }
        }
        None => println!("{json}"),
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Theta(args) => theta_cmd(args),
        Command::Verify(args) => verify_cmd(args),
        Command::Report { merge, out } => report_cmd(merge, out),
    }
}
