//! Constructions that turn known functions into new ones: the Rinehart
//! functional `L`, its CI extension, the chiral difference and the mirror.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::classify::{classify, Verdict};
use crate::diffops::{cartesian_partials, DiffConfig};
use crate::error::{Error, Result};
use crate::function::{lift_slice_map, ComplexStem, FunctionKind, QFunction, SampleGrid};
use crate::quaternion::Quaternion;

/// A complex function on (part of) the upper half plane.
pub trait ComplexMap: Send + Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn label(&self) -> String;
}

impl ComplexMap for ComplexStem {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        ComplexStem::eval(self, z)
    }
    fn label(&self) -> String {
        ComplexStem::label(self)
    }
}

/// Closure-backed [`ComplexMap`].
pub struct FnMap<F> {
    label: String,
    f: F,
}

impl<F> FnMap<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self {
            label: label.into(),
            f,
        }
    }
}

impl<F> ComplexMap for FnMap<F>
where
    F: Fn(Complex64) -> Result<Complex64> + Send + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (self.f)(z)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `L(f)(z) = (i/y) f'(z) − i v(z)/y²` for an analytic stem `f = u + i v`.
#[derive(Debug, Clone, PartialEq)]
pub struct RinehartImage {
    stem: ComplexStem,
}

impl RinehartImage {
    pub fn stem(&self) -> &ComplexStem {
        &self.stem
    }
}

impl ComplexMap for RinehartImage {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let y = z.im;
        if y <= 0.0 {
            return Err(Error::domain(format!("L(f) needs Im z > 0, got {z}")));
        }
        let i = Complex64::i();
        let d = self.stem.derivative(z)?;
        let v = self.stem.eval(z)?.im;
        Ok(i * d / y - i * (v / (y * y)))
    }

    fn label(&self) -> String {
        format!("L:{}", self.stem.label())
    }
}

pub fn rinehart_l(stem: &ComplexStem) -> RinehartImage {
    RinehartImage { stem: stem.clone() }
}

/// Residual of `∂g/∂x + i ∂g/∂y = 2 Im(g)/y` by central differences.
pub fn rinehart_residual(g: &dyn ComplexMap, z: Complex64, h: f64) -> Result<f64> {
    let dx = (g.eval(z + h)? - g.eval(z - h)?) / (2.0 * h);
    let ih = Complex64::new(0.0, h);
    let dy = (g.eval(z + ih)? - g.eval(z - ih)?) / (2.0 * h);
    let lhs = dx + Complex64::i() * dy;
    Ok((lhs - 2.0 * g.eval(z)?.im / z.im).norm())
}

/// CI extension `f(t + ι r) = Re g(t + ir) + ι Im g(t + ir)` of a complex
/// function satisfying the Rinehart condition, which makes `f` regular.
///
/// The condition is checked on the `(t, r)` samples of `grid`.
pub fn ci_extend_rinehart(
    g: Arc<dyn ComplexMap>,
    grid: &SampleGrid,
    cfg: &DiffConfig,
) -> Result<QFunction> {
    for z in grid.slice_points() {
        let res = rinehart_residual(g.as_ref(), z, cfg.h)?;
        let scale = g.eval(z)?.norm();
        if res > cfg.tol.threshold(scale) {
            return Err(Error::Precondition(format!(
                "{} violates the Rinehart condition at {z} (residual {res:e})",
                g.label()
            )));
        }
    }
    let label = g.label();
    Ok(QFunction::new(label, FunctionKind::Ci, move |p| {
        lift_slice_map(|z| g.eval(z), p)
    }))
}

/// The regular function generated from an analytic stem by `L` followed by
/// the CI extension.
pub fn regular_from_stem(
    stem: &ComplexStem,
    grid: &SampleGrid,
    cfg: &DiffConfig,
) -> Result<QFunction> {
    ci_extend_rinehart(Arc::new(rinehart_l(stem)), grid, cfg)
}

/// `Δ(p) = ∂f/∂_l p̄ − ∂f/∂_r p̄`, evaluated lazily with the stencils of
/// `cfg`. Rejects inputs that do not pass Class II on `grid`.
pub fn chiral_difference(f: &QFunction, grid: &SampleGrid, cfg: &DiffConfig) -> Result<QFunction> {
    let report = classify(f, grid, cfg)?;
    if report.class_ii.verdict != Verdict::Pass {
        return Err(Error::Precondition(format!(
            "{} is not Class II (verdict {:?}); its chiral difference need not be regular",
            f.name(),
            report.class_ii.verdict
        )));
    }
    Ok(chiral_difference_unchecked(f, cfg))
}

/// [`chiral_difference`] without the Class II gate.
pub fn chiral_difference_unchecked(f: &QFunction, cfg: &DiffConfig) -> QFunction {
    let inner = f.clone();
    let cfg = *cfg;
    QFunction::new(
        format!("chiral:{}", f.name()),
        FunctionKind::Raw,
        move |p| {
            let d = cartesian_partials(&inner, p, &cfg)?;
            let mut acc = Quaternion::ZERO;
            for (e, part) in [Quaternion::I, Quaternion::J, Quaternion::K]
                .iter()
                .zip(&d[1..])
            {
                acc += e.commutator(part.value);
            }
            Ok(acc)
        },
    )
    .with_domain(*f.domain())
}

/// Mirror operator `M(f)(p) = conj(f(conj p))`.
pub fn mirror(f: &QFunction) -> QFunction {
    let inner = f.clone();
    QFunction::new(format!("mirror:{}", f.name()), f.kind(), move |p| {
        Ok(inner.eval(p.conj())?.conj())
    })
    .with_domain(*f.domain())
}

impl fmt::Debug for dyn ComplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMap({})", self.label())
    }
}
