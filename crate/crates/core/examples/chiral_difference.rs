//! The chiral difference `∂f/∂_l p̄ − ∂f/∂_r p̄` of a Class II function is
//! regular. For `ρ = α + ι ln tan(β/2)` it equals `2(y i − x j)/(x² + y²)`.

use fueterlab::catalog;
use fueterlab::diffops::fueter_left;
use fueterlab::generators::{chiral_difference, chiral_difference_unchecked};
use fueterlab::{DiffConfig, Quaternion, Result, SampleGrid};

fn main() -> Result<()> {
    let grid = SampleGrid::default();
    // rejected: not Class II
    if let Err(e) = chiral_difference(&catalog::x_over_r_iota(), &grid, &DiffConfig::default()) {
        println!("x-over-r-iota: {e}");
    }
    chiral_difference(&catalog::rho(), &grid, &DiffConfig::default())?;

    // nested stencils: Richardson keeps the compounded error small
    let cfg = DiffConfig::richardson(1e-4);
    let delta = chiral_difference_unchecked(&catalog::rho(), &cfg);
    for p in [
        Quaternion::new(0.1, 0.6, 0.3, -0.4),
        Quaternion::new(-0.5, -0.2, 1.1, 0.7),
    ] {
        let d2 = p.x * p.x + p.y * p.y;
        let exact = Quaternion::imaginary(p.y, -p.x, 0.0) * (2.0 / d2);
        println!("p = {p}");
        println!("  delta     = {}", delta.eval(p)?);
        println!("  expected  = {exact}");
        println!(
            "  |left(delta)| = {:.2e}",
            fueter_left(&delta, p, &cfg)?.norm()
        );
    }
    Ok(())
}
