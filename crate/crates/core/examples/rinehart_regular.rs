//! Regular functions from analytic stems: apply the Rinehart functional
//! `L`, lift the result with the CI extension and check `∂f/∂_l p̄ = 0`.

use fueterlab::diffops::fueter_left;
use fueterlab::generators::{regular_from_stem, rinehart_l, ComplexMap};
use fueterlab::{ComplexStem, DiffConfig, Result, SampleGrid};
use num_complex::Complex64;

fn main() -> Result<()> {
    let grid = SampleGrid::default();
    let cfg = DiffConfig::default();
    let z = Complex64::new(0.5, 1.0);
    for spec in ["1:1:0", "2:1:0", "3:1:0", "4:1:0", "-1:1:0", "exp"] {
        let stem = ComplexStem::parse(spec)?;
        let image = rinehart_l(&stem);
        let f = regular_from_stem(&stem, &grid, &cfg)?;
        let worst = grid
            .points()
            .iter()
            .map(|s| fueter_left(&f, s.to_quaternion(), &cfg).map(|v| v.norm()))
            .try_fold(0.0_f64, |m, v| v.map(|v| m.max(v)))?;
        println!(
            "{:<8} L(stem)({z}) = {:<28} max |left Fueter| = {worst:.2e}",
            stem.label(),
            image.eval(z)?.to_string()
        );
    }
    Ok(())
}
