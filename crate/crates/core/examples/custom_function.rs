//! Builds a CE function from its components and inspects it.
//!
//! `f = u + ι v` with `u = α cos β`, `v = sin β` is Class I (it does not
//! depend on `t, r`) but fails the spherical Cauchy–Riemann equations.

use fueterlab::diffops::{spherical_cr_residuals, DiffConfig};
use fueterlab::{classify, from_uv, Result, SampleGrid, SphericalPoint};

fn main() -> Result<()> {
    let f = from_uv(
        "alpha-cos-beta",
        |s| s.alpha * s.beta.cos(),
        |s| s.beta.sin(),
    );
    let report = classify(&f, &SampleGrid::default(), &DiffConfig::default())?;
    for (name, stats) in [
        ("I", report.class_i),
        ("II", report.class_ii),
        ("III", report.class_iii),
    ] {
        println!(
            "Class {name:<3} {:?} (max residual {:.2e})",
            stats.verdict, stats.max
        );
    }

    let s = SphericalPoint::new(0.2, 1.0, 0.7, 1.1);
    let (s1, s2) = spherical_cr_residuals(&f, &s, &DiffConfig::default())?;
    println!("spherical CR residuals at {s:?}: S1 = {s1:.6}, S2 = {s2:.6}");
    Ok(())
}
