//! Slice-wise Laurent coefficients, reconstruction and the coefficient
//! class check.

use fueterlab::catalog;
use fueterlab::laurent::{
    coefficient_class_check, laurent_coefficients, AnnulusRegion, DEFAULT_N_RANGE,
};
use fueterlab::{DiffConfig, QFunction, Result, SphericalPoint};

fn main() -> Result<()> {
    let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6))?;

    let sq = laurent_coefficients(&catalog::power(2), &region, DEFAULT_N_RANGE, 64)?;
    for n in -1..=3 {
        println!(
            "p²: a_{n} = {:.3}",
            sq.coefficient(n, 4, 4).unwrap_or_default()
        );
    }

    let inv = laurent_coefficients(&catalog::power(-1), &region, (-20, 20), 128)?;
    let p = SphericalPoint::new(0.25, 1.3, 0.4, 1.2).to_quaternion();
    let approx = inv.reconstruct(p)?;
    println!("1/p  series {approx}");
    println!("1/p  exact  {}", p.inv()?);
    println!("tail estimate {:.2e}", inv.tail_estimate(p)?);

    let f = catalog::rho().product(&QFunction::identity());
    let series = laurent_coefficients(&f, &region, (-2, 2), 64)?;
    for v in coefficient_class_check(&series, &DiffConfig::default())? {
        println!(
            "rho·p: a_{:<2} S1 {:.1e} S2 {:.1e} passed {}",
            v.n, v.max_s1, v.max_s2, v.passed
        );
    }
    Ok(())
}
