//! Compares the numeric Jacobian determinant of `p ↦ p²` with
//! `|∂f/∂t|² v² / r²`.

use fueterlab::catalog;
use fueterlab::classify::jacobian_check;
use fueterlab::{DiffConfig, Quaternion, Result};

fn main() -> Result<()> {
    let f = catalog::power(2);
    let cfg = DiffConfig::default();
    for p in [
        Quaternion::new(1.0, 1.0, 0.0, 0.0),
        Quaternion::new(0.3, -0.2, 0.9, 0.4),
        Quaternion::new(-1.5, 0.1, 0.1, 2.0),
    ] {
        let j = jacobian_check(&f, p, &cfg)?;
        println!(
            "p = {p}: numeric {:.9}, formula {:.9}, relative gap {:.2e}",
            j.det_numeric,
            j.det_formula,
            j.relative_gap()
        );
    }
    Ok(())
}
