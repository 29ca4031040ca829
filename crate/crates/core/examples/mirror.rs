//! The mirror `M(f)(p) = conj(f(conj p))` turns left Class II functions into
//! right Class II ones.

use fueterlab::catalog;
use fueterlab::classify::{classify, right_class_ii};
use fueterlab::generators::mirror;
use fueterlab::{DiffConfig, Quaternion, Result, SampleGrid};

fn main() -> Result<()> {
    let grid = SampleGrid::default();
    let cfg = DiffConfig::default();
    let rho = catalog::rho();
    let m = mirror(&rho);

    let left = classify(&rho, &grid, &cfg)?;
    println!(
        "rho: left Class II {:?} (max {:.2e})",
        left.class_ii.verdict, left.class_ii.max
    );
    let right = right_class_ii(&m, &grid, &cfg)?;
    println!(
        "M(rho): right Class II {:?} (max {:.2e})",
        right.verdict, right.max
    );

    let p = Quaternion::new(0.3, 0.4, 0.5, -0.6);
    println!("M(rho)(p)    = {}", m.eval(p)?);
    println!("M(M(rho))(p) = {}", mirror(&m).eval(p)?);
    println!("rho(p)       = {}", rho.eval(p)?);
    Ok(())
}
