//! Quaternion arithmetic and the spherical chart `p = t + ι(α, β) r`.
//!
//! Quaternions use scalar-first coordinates `(t, x, y, z)` for
//! `t + x i + y j + z k`. The chart maps the imaginary part to a radius
//! `r > 0` and a direction `ι` on the unit sphere with azimuth
//! `α ∈ (−π, π]` and polar angle `β ∈ (0, π)`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    /// The four Cartesian unit directions `1, i, j, k` in coordinate order.
    pub const BASIS: [Quaternion; 4] = [Self::ONE, Self::I, Self::J, Self::K];

    #[inline]
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self { t, x, y, z }
    }

    #[inline]
    pub const fn real(t: f64) -> Self {
        Self::new(t, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub const fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.t, -self.x, -self.y, -self.z)
    }

    /// Pure imaginary part `x i + y j + z k`.
    #[inline]
    pub fn imag(self) -> Self {
        Self::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.t * self.t + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Length of the imaginary part, the chart radius `r`.
    #[inline]
    pub fn imag_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// Euclidean inner product on R⁴.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.t * other.t + self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Multiplicative inverse `p̄ / |p|²`.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::domain("inverse of the zero quaternion"));
        }
        Ok(self.conj() / n)
    }

    /// Commutator `ab − ba`; zero iff the imaginary parts are parallel.
    pub fn commutator(self, other: Self) -> Self {
        self * other - other * self
    }

    /// Integer power, negative exponents go through the inverse.
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self };
        let mut acc = Self::ONE;
        let mut b = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.t.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.t, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.t, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z,
            a.t * b.x + a.x * b.t + a.y * b.z - a.z * b.y,
            a.t * b.y - a.x * b.z + a.y * b.t + a.z * b.x,
            a.t * b.z + a.x * b.y - a.y * b.x + a.z * b.t,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.t / s, self.x / s, self.y / s, self.z / s)
    }
}

impl From<f64> for Quaternion {
    fn from(t: f64) -> Self {
        Self::real(t)
    }
}

/// Unit imaginary direction `ι(α, β) = (cosα sinβ, sinα sinβ, cosβ)`.
#[inline]
pub fn iota(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Quaternion::imaginary(ca * sb, sa * sb, cb)
}

/// `∂ι/∂α = (−sinα sinβ, cosα sinβ, 0)`.
#[inline]
pub fn iota_alpha(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let sb = beta.sin();
    Quaternion::imaginary(-sa * sb, ca * sb, 0.0)
}

/// `∂ι/∂β = (cosα cosβ, sinα cosβ, −sinβ)`.
#[inline]
pub fn iota_beta(alpha: f64, beta: f64) -> Quaternion {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    Quaternion::imaginary(ca * cb, sa * cb, -sb)
}

/// A point in the chart `(t, r, α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl SphericalPoint {
    pub const fn new(t: f64, r: f64, alpha: f64, beta: f64) -> Self {
        Self { t, r, alpha, beta }
    }

    pub fn iota(&self) -> Quaternion {
        iota(self.alpha, self.beta)
    }

    pub fn iota_alpha(&self) -> Quaternion {
        iota_alpha(self.alpha, self.beta)
    }

    pub fn iota_beta(&self) -> Quaternion {
        iota_beta(self.alpha, self.beta)
    }

    /// The chart map `φ(t, r, α, β) = t + r ι(α, β)`. Defined everywhere,
    /// including the singular set of the inverse chart.
    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::real(self.t) + self.iota() * self.r
    }

    /// Errors when the point lies on the singular set `r = 0` or `sinβ = 0`.
    pub fn check_regular(&self) -> Result<()> {
        if self.r <= 0.0 {
            return Err(Error::ChartSingularity(format!(
                "r = {} is not positive",
                self.r
            )));
        }
        if self.beta.sin() <= 0.0 {
            return Err(Error::ChartSingularity(format!(
                "beta = {} lies on the polar axis",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Inverse chart. Fails on the real axis and on the z-axis.
pub fn to_spherical(p: Quaternion) -> Result<SphericalPoint> {
    let r = p.imag_norm();
    if r == 0.0 {
        return Err(Error::ChartSingularity(format!(
            "{p} lies on the real axis"
        )));
    }
    if p.x == 0.0 && p.y == 0.0 {
        return Err(Error::ChartSingularity(format!(
            "{p} lies on the polar axis"
        )));
    }
    let alpha = p.y.atan2(p.x);
    let beta = (p.z / r).clamp(-1.0, 1.0).acos();
    Ok(SphericalPoint {
        t: p.t,
        r,
        alpha,
        beta,
    })
}

/// `ι = Im p / |Im p|`, defined off the real axis.
pub fn unit_imaginary(p: Quaternion) -> Result<Quaternion> {
    let r = p.imag_norm();
    if r == 0.0 {
        return Err(Error::ChartSingularity(format!(
            "{p} lies on the real axis"
        )));
    }
    Ok(p.imag() / r)
}
