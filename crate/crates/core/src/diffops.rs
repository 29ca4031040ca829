//! Finite-difference Fueter-type operators.
//!
//! Cartesian derivatives difference the raw evaluator along `1, i, j, k`.
//! Chart derivatives difference `f ∘ φ` along `t, r, α, β`. Every operator
//! is assembled from one of those two partial sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{split_value, QFunction, MIN_SIN_BETA};
use crate::quaternion::{Quaternion, SphericalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Second-order central differences.
    Central,
    /// Central differences at `h` and `h/2` combined to fourth order.
    Richardson,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "central" => Ok(Scheme::Central),
            "richardson" => Ok(Scheme::Richardson),
            other => Err(Error::Spec(format!("unknown scheme `{other}`"))),
        }
    }
}

/// A residual is zero when `|residual| ≤ abs + rel · scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-6,
            rel: 1e-6,
        }
    }
}

impl Tolerance {
    #[inline]
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    pub h: f64,
    pub scheme: Scheme,
    pub tol: Tolerance,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            h: 1e-5,
            scheme: Scheme::Central,
            tol: Tolerance::default(),
        }
    }
}

impl DiffConfig {
    pub fn richardson(h: f64) -> Self {
        Self {
            h,
            scheme: Scheme::Richardson,
            ..Self::default()
        }
    }

    pub fn central(h: f64) -> Self {
        Self {
            h,
            scheme: Scheme::Central,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Spec(format!("step h = {} must be positive", self.h)));
        }
        if self.tol.abs < 0.0 || self.tol.rel < 0.0 {
            return Err(Error::Spec("tolerances must be non-negative".into()));
        }
        Ok(())
    }
}

/// Result of applying an operator at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorValue {
    pub value: Quaternion,
    /// `|D(h/2) − D(h)|` summed over partials under Richardson, else 0.
    pub estimated_error: f64,
    /// Largest `|f|` seen on the stencil.
    pub scale: f64,
}

impl OperatorValue {
    pub fn norm(&self) -> f64 {
        self.value.norm()
    }
}

/// One directional derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partial {
    pub value: Quaternion,
    pub error: f64,
    pub scale: f64,
}

/// Differentiates `g` at 0 along its parameter.
pub fn derivative<G>(g: G, cfg: &DiffConfig) -> Result<Partial>
where
    G: Fn(f64) -> Result<Quaternion>,
{
    let h = cfg.h;
    let central = |h: f64, scale: &mut f64| -> Result<Quaternion> {
        let (fp, fm) = (g(h)?, g(-h)?);
        *scale = scale.max(fp.norm()).max(fm.norm());
        Ok((fp - fm) / (2.0 * h))
    };
    let mut scale = 0.0_f64;
    match cfg.scheme {
        Scheme::Central => {
            let value = central(h, &mut scale)?;
            Ok(Partial {
                value,
                error: 0.0,
                scale,
            })
        }
        Scheme::Richardson => {
            let coarse = central(h, &mut scale)?;
            let fine = central(0.5 * h, &mut scale)?;
            Ok(Partial {
                value: (fine * 4.0 - coarse) / 3.0,
                error: (fine - coarse).norm(),
                scale,
            })
        }
    }
}

/// Partials `∂f/∂t, ∂f/∂x, ∂f/∂y, ∂f/∂z` of the raw evaluator.
pub fn cartesian_partials(f: &QFunction, p: Quaternion, cfg: &DiffConfig) -> Result<[Partial; 4]> {
    let d = |e: Quaternion| derivative(|s| f.eval(p + e * s), cfg);
    Ok([
        d(Quaternion::ONE)?,
        d(Quaternion::I)?,
        d(Quaternion::J)?,
        d(Quaternion::K)?,
    ])
}

/// Partials `∂/∂t, ∂/∂r, ∂/∂α, ∂/∂β` of `f ∘ φ`.
pub fn chart_partials(f: &QFunction, s: &SphericalPoint, cfg: &DiffConfig) -> Result<[Partial; 4]> {
    let at = |t: f64, r: f64, a: f64, b: f64| f.eval_spherical(&SphericalPoint::new(t, r, a, b));
    let SphericalPoint { t, r, alpha, beta } = *s;
    Ok([
        derivative(|h| at(t + h, r, alpha, beta), cfg)?,
        derivative(|h| at(t, r + h, alpha, beta), cfg)?,
        derivative(|h| at(t, r, alpha + h, beta), cfg)?,
        derivative(|h| at(t, r, alpha, beta + h), cfg)?,
    ])
}

fn stencil_stats(parts: &[Partial]) -> (f64, f64) {
    parts
        .iter()
        .fold((0.0, 0.0), |(e, s), p| (e + p.error, f64::max(s, p.scale)))
}

/// `∂t f + i ∂x f + j ∂y f + k ∂z f`.
pub fn combine_fueter_left(d: &[Partial; 4]) -> OperatorValue {
    let value = d[0].value
        + Quaternion::I * d[1].value
        + Quaternion::J * d[2].value
        + Quaternion::K * d[3].value;
    let (estimated_error, scale) = stencil_stats(d);
    OperatorValue {
        value,
        estimated_error,
        scale,
    }
}

/// `∂t f + ∂x f i + ∂y f j + ∂z f k`.
pub fn combine_fueter_right(d: &[Partial; 4]) -> OperatorValue {
    let value = d[0].value
        + d[1].value * Quaternion::I
        + d[2].value * Quaternion::J
        + d[3].value * Quaternion::K;
    let (estimated_error, scale) = stencil_stats(d);
    OperatorValue {
        value,
        estimated_error,
        scale,
    }
}

/// `∂t f + ι ∂r f` from chart partials.
pub fn combine_class1(s: &SphericalPoint, d: &[Partial; 4]) -> OperatorValue {
    let value = d[0].value + s.iota() * d[1].value;
    let (estimated_error, scale) = stencil_stats(&d[..2]);
    OperatorValue {
        value,
        estimated_error,
        scale,
    }
}

/// Right-handed `∂t f + ∂r f ι`.
pub fn combine_class1_right(s: &SphericalPoint, d: &[Partial; 4]) -> OperatorValue {
    let value = d[0].value + d[1].value * s.iota();
    let (estimated_error, scale) = stencil_stats(&d[..2]);
    OperatorValue {
        value,
        estimated_error,
        scale,
    }
}

fn tangent_inverses(s: &SphericalPoint) -> Result<(Quaternion, Quaternion)> {
    s.check_regular()?;
    Ok((s.iota_alpha().inv()?, s.iota_beta().inv()?))
}

/// `ι_α⁻¹ ∂α f + ι_β⁻¹ ∂β f`.
pub fn combine_imaginary_derivative(s: &SphericalPoint, d: &[Partial; 4]) -> Result<OperatorValue> {
    let (ia, ib) = tangent_inverses(s)?;
    let value = ia * d[2].value + ib * d[3].value;
    let (estimated_error, scale) = stencil_stats(&d[2..]);
    Ok(OperatorValue {
        value,
        estimated_error,
        scale,
    })
}

/// `∂α f ι_α⁻¹ + ∂β f ι_β⁻¹`.
pub fn combine_imaginary_derivative_right(
    s: &SphericalPoint,
    d: &[Partial; 4],
) -> Result<OperatorValue> {
    let (ia, ib) = tangent_inverses(s)?;
    let value = d[2].value * ia + d[3].value * ib;
    let (estimated_error, scale) = stencil_stats(&d[2..]);
    Ok(OperatorValue {
        value,
        estimated_error,
        scale,
    })
}

pub fn fueter_left(f: &QFunction, p: Quaternion, cfg: &DiffConfig) -> Result<OperatorValue> {
    Ok(combine_fueter_left(&cartesian_partials(f, p, cfg)?))
}

pub fn fueter_right(f: &QFunction, p: Quaternion, cfg: &DiffConfig) -> Result<OperatorValue> {
    Ok(combine_fueter_right(&cartesian_partials(f, p, cfg)?))
}

/// `∂f/∂t + ι ∂f/∂r` at fixed `(α, β)`.
pub fn class1_residual(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<OperatorValue> {
    s.check_regular()?;
    Ok(combine_class1(s, &chart_partials(f, s, cfg)?))
}

/// Left Fueter operator written in the chart:
/// `∂t f + ι ∂r f − r⁻¹ ι_α⁻¹ ∂α f − r⁻¹ ι_β⁻¹ ∂β f`.
pub fn fueter_spherical(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<OperatorValue> {
    s.check_regular()?;
    let d = chart_partials(f, s, cfg)?;
    let radial = combine_class1(s, &d);
    let angular = combine_imaginary_derivative(s, &d)?;
    Ok(OperatorValue {
        value: radial.value - angular.value / s.r,
        estimated_error: radial.estimated_error + angular.estimated_error / s.r,
        scale: radial.scale.max(angular.scale),
    })
}

/// Mirror image of [`fueter_spherical`] with every unit multiplied from
/// the right.
pub fn fueter_spherical_right(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<OperatorValue> {
    s.check_regular()?;
    let d = chart_partials(f, s, cfg)?;
    let radial = combine_class1_right(s, &d);
    let angular = combine_imaginary_derivative_right(s, &d)?;
    Ok(OperatorValue {
        value: radial.value - angular.value / s.r,
        estimated_error: radial.estimated_error + angular.estimated_error / s.r,
        scale: radial.scale.max(angular.scale),
    })
}

pub fn imaginary_derivative(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<OperatorValue> {
    check_margin(s)?;
    combine_imaginary_derivative(s, &chart_partials(f, s, cfg)?)
}

pub fn imaginary_derivative_right(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<OperatorValue> {
    check_margin(s)?;
    combine_imaginary_derivative_right(s, &chart_partials(f, s, cfg)?)
}

fn check_margin(s: &SphericalPoint) -> Result<()> {
    s.check_regular()?;
    if s.beta.sin() < MIN_SIN_BETA {
        return Err(Error::ChartSingularity(format!(
            "sin(beta) = {} is below the {MIN_SIN_BETA} margin",
            s.beta.sin()
        )));
    }
    Ok(())
}

/// Angular partials of the split `(u, v)`: returns
/// `[(∂α u, ∂α v), (∂β u, ∂β v)]`.
///
/// Uses the product rule `∂v = Im(∂f)·ι + Im(f)·∂ι`, so only the chart
/// partials of `f` are differenced.
pub fn split_angular_partials(
    f: &QFunction,
    s: &SphericalPoint,
    d: &[Partial; 4],
) -> Result<[(f64, f64); 2]> {
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!("{} is not a CE function", f.name())));
    }
    Ok(project_angular_partials(f.eval_spherical(s)?, s, d))
}

/// Projection behind [`split_angular_partials`], for any value `f(s)`.
pub(crate) fn project_angular_partials(
    value: Quaternion,
    s: &SphericalPoint,
    d: &[Partial; 4],
) -> [(f64, f64); 2] {
    let iota = s.iota();
    let mut out = [(0.0, 0.0); 2];
    for (slot, (dq, di)) in out
        .iter_mut()
        .zip([(d[2].value, s.iota_alpha()), (d[3].value, s.iota_beta())])
    {
        let (du, dv_along) = split_value(dq, iota);
        *slot = (du, dv_along + value.imag().dot(di));
    }
    out
}

/// The pair `(S₁, S₂)`:
/// `S₁ = ∂α v / sinβ + ∂β u` and `S₂ = ∂α u / sinβ − ∂β v`.
pub fn spherical_cr_residuals(
    f: &QFunction,
    s: &SphericalPoint,
    cfg: &DiffConfig,
) -> Result<(f64, f64)> {
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!("{} is not a CE function", f.name())));
    }
    check_margin(s)?;
    let d = chart_partials(f, s, cfg)?;
    Ok(cr_from_partials(s, split_angular_partials(f, s, &d)?))
}

pub(crate) fn cr_from_partials(
    s: &SphericalPoint,
    [(ua, va), (ub, vb)]: [(f64, f64); 2],
) -> (f64, f64) {
    let sb = s.beta.sin();
    (va / sb + ub, ua / sb - vb)
}
