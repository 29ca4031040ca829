//! Runs the property suite and prints one line per check.

use fueterlab::verify::{verify_props, VerifyConfig};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let cfg = VerifyConfig {
        seed: seed.unwrap_or(VerifyConfig::default().seed),
        ..Default::default()
    };
    let summary = verify_props(&cfg);
    for c in &summary.checks {
        println!(
            "{} {:<26} {:>10.3e} / {:<8.1e} {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.max_residual,
            c.tolerance,
            c.detail
        );
    }
    println!(
        "{}/{} passed (seed {})",
        summary.passed, summary.total, summary.seed
    );
}
