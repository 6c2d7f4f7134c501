//! Produce a JSON report as the `ssk` binary does, then verify it.

use serde_json::json;
use ssk::cli::json::operator_to_json;
use ssk::cli::{run, verify_report, JobConfig};
use ssk::schur_sym::wallenberg_pair;

fn main() -> ssk::Result<()> {
    let (l, _) = wallenberg_pair(12)?;
    let input = json!({"op": operator_to_json(&l), "axis": 1, "k": 2});
    let config = JobConfig { prec_x: Some(6), ..JobConfig::default() };
    let (report, code) = run("conjugate", &input, &config);
    println!("exit code {code}, status {}", report["status"]);
    for check in report["verified"].as_array().into_iter().flatten() {
        println!("  {}: {}", check["check"], check["status"]);
    }
    match verify_report(&report) {
        Ok(outcome) => println!("re-verification: {}", serde_json::to_string(&outcome.result).unwrap_or_default()),
        Err(e) => println!("re-verification failed: {}", e.message),
    }
    Ok(())
}
