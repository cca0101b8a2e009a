//! Run several checks as one suite and emit the JSON report.

use delpair::harness::report::{exit_code, CheckName, SuiteReport, VerificationTask};
use delpair::harness::run_suite;
use delpair::c64;

fn main() {
    let tasks = vec![
        VerificationTask::new(CheckName::Flatness).with_tau(c64(0.0, 1.0)).with_grid(25),
        VerificationTask::new(CheckName::Reciprocity).with_tau(c64(0.3, 1.7)).with_grid(4).with_seed(11),
        VerificationTask::new(CheckName::Curvature).with_seed(2),
        VerificationTask::new(CheckName::Twistor).with_grid(3),
        VerificationTask::new(CheckName::TorsionOracle),
    ];
    let reports = run_suite(&tasks);
    for r in &reports {
        println!("{:<15} pass={} max={:.2e} constants={:?}", r.task.check, r.pass, r.max, r.constants);
    }
    println!("exit code would be {}", exit_code(&reports));
    let json = serde_json::to_string_pretty(&SuiteReport::new(reports)).unwrap();
    println!("{}", &json[..json.len().min(600)]);
}
