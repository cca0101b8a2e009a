//! Verification tasks, reports and their JSON form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Reciprocity,
    Reciprocity1,
    Reciprocity2,
    Flatness,
    Curvature,
    Twistor,
    TorsionOracle,
    GmCurvature,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::Reciprocity,
        CheckName::Reciprocity1,
        CheckName::Reciprocity2,
        CheckName::Flatness,
        CheckName::Curvature,
        CheckName::Twistor,
        CheckName::TorsionOracle,
        CheckName::GmCurvature,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Reciprocity => "reciprocity",
            CheckName::Reciprocity1 => "reciprocity1",
            CheckName::Reciprocity2 => "reciprocity2",
            CheckName::Flatness => "flatness",
            CheckName::Curvature => "curvature",
            CheckName::Twistor => "twistor",
            CheckName::TorsionOracle => "torsion-oracle",
            CheckName::GmCurvature => "gm-curvature",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            CheckName::Curvature | CheckName::Twistor => 1e-12,
            CheckName::TorsionOracle => 1e-4,
            CheckName::GmCurvature => 1e-6,
            _ => 1e-8,
        }
    }

    pub fn default_grid(self) -> usize {
        match self {
            CheckName::Reciprocity | CheckName::Flatness => 25,
            CheckName::Reciprocity1 | CheckName::Reciprocity2 => 5,
            CheckName::Curvature => 3,
            CheckName::Twistor => 10,
            CheckName::TorsionOracle => 4,
            CheckName::GmCurvature => 9,
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = TaskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| TaskError::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TaskError {
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("grid count must be at least 1")]
    EmptyGrid,
    #[error("give either tau or omega, not both")]
    ConflictingSurface,
    #[error("{0}")]
    Invalid(String),
}

/// Explicit divisors for the reciprocity checks, as points of `C`.
/// The last pole of the function and the first zero of the section are
/// solved from the divisor equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisorConfig {
    pub function_zeros: Vec<Complex64>,
    pub function_poles: Vec<Complex64>,
    pub section_poles: Vec<Complex64>,
    pub section_zeros: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationTask {
    pub check: CheckName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<Vec<Complex64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Complex64>,
    #[serde(default)]
    pub slow: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisors: Option<DivisorConfig>,
}

impl VerificationTask {
    pub fn new(check: CheckName) -> Self {
        VerificationTask {
            check,
            tau: None,
            omega: None,
            grid: None,
            tol: None,
            seed: 0,
            lambda: None,
            slow: false,
            divisors: None,
        }
    }

    pub fn with_tau(mut self, tau: Complex64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid = Some(n);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(self.check.default_tol())
    }

    pub fn grid(&self) -> usize {
        self.grid.unwrap_or(self.check.default_grid())
    }

    pub fn validate(&self) -> Result<(), TaskError> {
        let tol = self.tol();
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(TaskError::BadTolerance(tol));
        }
        if self.grid() == 0 {
            return Err(TaskError::EmptyGrid);
        }
        if self.tau.is_some() && self.omega.is_some() {
            return Err(TaskError::ConflictingSurface);
        }
        Ok(())
    }
}

/// One gated residual: passes when `value ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub label: String,
    pub point: Vec<Complex64>,
    pub value: f64,
    pub tol: f64,
}

impl Residual {
    pub fn ok(&self) -> bool {
        self.value <= self.tol
    }
}

/// A quantity that must stay away from zero: passes when `value ≥ min`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub point: Vec<Complex64>,
    pub value: f64,
    pub min: f64,
}

impl Witness {
    pub fn ok(&self) -> bool {
        self.value >= self.min
    }
}

/// What a check returns before aggregation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckOutcome {
    pub residuals: Vec<Residual>,
    pub witnesses: Vec<Witness>,
    pub constants: BTreeMap<String, Complex64>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub task: VerificationTask,
    pub residuals: Vec<Residual>,
    pub witnesses: Vec<Witness>,
    pub max: f64,
    pub mean: f64,
    pub argmax: Option<Residual>,
    pub constants: BTreeMap<String, Complex64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

fn nan_as_inf(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

impl VerificationReport {
    pub fn from_outcome(task: VerificationTask, outcome: CheckOutcome) -> Self {
        let n = outcome.residuals.len();
        let mut max = 0.0_f64;
        let mut sum = 0.0;
        let mut argmax: Option<&Residual> = None;
        for r in &outcome.residuals {
            let v = nan_as_inf(r.value);
            sum += v;
            // ties resolved by label so the result does not depend on order
            let better = match argmax {
                None => true,
                Some(a) => v > nan_as_inf(a.value) || (v == nan_as_inf(a.value) && r.label < a.label),
            };
            if better {
                argmax = Some(r);
                max = v;
            }
        }
        let pass = outcome.residuals.iter().all(Residual::ok) && outcome.witnesses.iter().all(Witness::ok);
        VerificationReport {
            schema: SCHEMA,
            task,
            argmax: argmax.cloned(),
            residuals: outcome.residuals,
            witnesses: outcome.witnesses,
            max,
            mean: if n == 0 { 0.0 } else { sum / n as f64 },
            constants: outcome.constants,
            pass,
            error: None,
            skipped: outcome.skipped,
        }
    }

    pub fn from_error(task: VerificationTask, error: String) -> Self {
        VerificationReport {
            schema: SCHEMA,
            task,
            residuals: vec![],
            witnesses: vec![],
            max: f64::INFINITY,
            mean: f64::INFINITY,
            argmax: None,
            constants: BTreeMap::new(),
            pass: false,
            error: Some(error),
            skipped: None,
        }
    }
}

/// Several reports in one file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub pass: bool,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(reports: Vec<VerificationReport>) -> Self {
        SuiteReport {
            schema: SCHEMA,
            pass: reports.iter().all(|r| r.pass),
            reports,
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unsupported report schema {0}")]
    Schema(u64),
    #[error("not a report: {0}")]
    Json(#[from] serde_json::Error),
}

/// Reads either a single report or a suite.
pub fn parse_reports(text: &str) -> Result<Vec<VerificationReport>, ReportError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let schema = value.get("schema").and_then(|v| v.as_u64()).unwrap_or(0);
    if schema != SCHEMA as u64 {
        return Err(ReportError::Schema(schema));
    }
    if value.get("reports").is_some() {
        Ok(serde_json::from_value::<SuiteReport>(value)?.reports)
    } else {
        Ok(vec![serde_json::from_value(value)?])
    }
}

/// Concatenates reports, ordered by check name and seed.
pub fn merge(parts: Vec<Vec<VerificationReport>>) -> SuiteReport {
    let mut all: Vec<VerificationReport> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| (a.task.check, a.task.seed).cmp(&(b.task.check, b.task.seed)));
    SuiteReport::new(all)
}

/// `0` when every report passed, `1` otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().all(|r| r.pass) {
        0
    } else {
        1
    }
}
