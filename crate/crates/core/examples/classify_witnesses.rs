//! Classifies the catalog of known functions and prints each verdict.
//!
//! `cargo run --example classify_witnesses`

use fueterlab::catalog::witnesses;
use fueterlab::{classify, DiffConfig, Result, SampleGrid};

fn main() -> Result<()> {
    let grid = SampleGrid::default();
    let cfg = DiffConfig::default();
    println!(
        "{:<15} {:>6} {:>6} {:>6} {:>8} {:>8}",
        "function", "I", "II", "III", "regular", "central"
    );
    for w in witnesses() {
        let r = classify(&w.function, &grid, &cfg)?;
        let v = |s: &fueterlab::classify::ClassStats| if s.verdict.passed() { "yes" } else { "no" };
        println!(
            "{:<15} {:>6} {:>6} {:>6} {:>8} {:>8}",
            w.name,
            v(&r.class_i),
            v(&r.class_ii),
            v(&r.class_iii),
            v(&r.regular),
            v(&r.centrality)
        );
    }
    Ok(())
}
