//! Hamilton arithmetic and the spherical chart `p = t + ι(α, β) r`.

use fueterlab::quaternion::{iota_alpha, iota_beta, to_spherical};
use fueterlab::{Quaternion, Result, SphericalPoint};

fn main() -> Result<()> {
    let p = Quaternion::new(0.5, 1.0, -2.0, 0.25);
    let q = Quaternion::new(-1.0, 0.0, 3.0, 1.0);
    println!("p q     = {}", p * q);
    println!("q p     = {}", q * p);
    println!("p⁻¹     = {}", p.inv()?);
    println!("p³      = {}", p.powi(3)?);

    let s = to_spherical(p)?;
    println!(
        "chart   t = {:.4}, r = {:.4}, α = {:.4}, β = {:.4}",
        s.t, s.r, s.alpha, s.beta
    );
    println!("ι       = {}", s.iota());
    println!("ι²      = {}", s.iota() * s.iota());
    println!("ι_α     = {}", iota_alpha(s.alpha, s.beta));
    println!("ι_β     = {}", iota_beta(s.alpha, s.beta));
    println!(
        "back    = {}",
        SphericalPoint::new(s.t, s.r, s.alpha, s.beta).to_quaternion()
    );

    // on the real axis the direction ι is undefined
    match to_spherical(Quaternion::real(2.0)) {
        Err(e) => println!("p = 2   → {e}"),
        Ok(s) => println!("p = 2   → unexpected chart point {s:?}"),
    }
    Ok(())
}
