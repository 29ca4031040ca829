//! Quaternion-valued functions of a quaternion variable.
//!
//! A [`QFunction`] is an evaluator plus a kind tag. CE functions commute
//! with their argument and split as `u + ι v`; CI functions additionally
//! have a single complex component, as produced by [`cullen_extend`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::{iota, to_spherical, unit_imaginary, Quaternion, SphericalPoint};

pub type Evaluator = Arc<dyn Fn(Quaternion) -> Result<Quaternion> + Send + Sync>;
pub type ScalarField = Arc<dyn Fn(&SphericalPoint) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Raw,
    Ce,
    Ci,
}

impl FunctionKind {
    pub fn is_ce(self) -> bool {
        matches!(self, FunctionKind::Ce | FunctionKind::Ci)
    }

    /// Kind of a pointwise sum or product.
    fn join(self, other: Self) -> Self {
        use FunctionKind::*;
        match (self, other) {
            (Ci, Ci) => Ci,
            (Raw, _) | (_, Raw) => Raw,
            _ => Ce,
        }
    }
}

#[derive(Clone)]
struct Split {
    u: ScalarField,
    v: ScalarField,
}

#[derive(Clone)]
pub struct QFunction {
    name: String,
    kind: FunctionKind,
    domain: ChartBox,
    eval: Evaluator,
    split: Option<Split>,
}

impl fmt::Debug for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QFunction")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl QFunction {
    pub fn new<F>(name: impl Into<String>, kind: FunctionKind, f: F) -> Self
    where
        F: Fn(Quaternion) -> Result<Quaternion> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            kind,
            domain: ChartBox::default(),
            eval: Arc::new(f),
            split: None,
        }
    }

    pub fn constant(q: Quaternion) -> Self {
        let kind = if q.imag_norm() == 0.0 {
            FunctionKind::Ci
        } else {
            FunctionKind::Raw
        };
        Self::new(format!("const:{q}"), kind, move |_| Ok(q))
    }

    pub fn identity() -> Self {
        Self::new("identity", FunctionKind::Ci, Ok)
    }

    #[inline]
    pub fn eval(&self, p: Quaternion) -> Result<Quaternion> {
        (self.eval)(p)
    }

    /// Evaluates through the chart `φ(t, r, α, β)`.
    #[inline]
    pub fn eval_spherical(&self, s: &SphericalPoint) -> Result<Quaternion> {
        self.eval(s.to_quaternion())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FunctionKind {
        self.kind
    }

    pub fn domain(&self) -> &ChartBox {
        &self.domain
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_domain(mut self, domain: ChartBox) -> Self {
        self.domain = domain;
        self
    }

    pub fn has_split(&self) -> bool {
        self.split.is_some()
    }

    /// The pair `(u, v)` with `f = u + ι v` at a chart point. Uses the
    /// declared scalar fields when present, otherwise projects the value
    /// onto `1` and `ι`.
    pub fn split_at(&self, s: &SphericalPoint) -> Result<(f64, f64)> {
        if !self.kind.is_ce() {
            return Err(Error::Kind(format!("{} is not a CE function", self.name)));
        }
        match &self.split {
            Some(sp) => Ok(((sp.u)(s), (sp.v)(s))),
            None => Ok(split_value(self.eval_spherical(s)?, s.iota())),
        }
    }

    /// Pointwise quaternion product `f · g`.
    pub fn product(&self, other: &QFunction) -> QFunction {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        QFunction::new(
            format!("({})*({})", self.name, other.name),
            self.kind.join(other.kind),
            move |p| Ok(f(p)? * g(p)?),
        )
        .with_domain(self.domain)
    }

    pub fn sum(&self, other: &QFunction) -> QFunction {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        QFunction::new(
            format!("({})+({})", self.name, other.name),
            self.kind.join(other.kind),
            move |p| Ok(f(p)? + g(p)?),
        )
        .with_domain(self.domain)
    }

    /// Pointwise difference `f − g`.
    pub fn difference(&self, other: &QFunction) -> QFunction {
        let (f, g) = (self.eval.clone(), other.eval.clone());
        QFunction::new(
            format!("({})-({})", self.name, other.name),
            self.kind.join(other.kind),
            move |p| Ok(f(p)? - g(p)?),
        )
        .with_domain(self.domain)
    }

    pub fn scaled(&self, c: f64) -> QFunction {
        let f = self.eval.clone();
        QFunction::new(format!("{c}*({})", self.name), self.kind, move |p| {
            Ok(f(p)? * c)
        })
        .with_domain(self.domain)
    }

    /// Pointwise quaternion conjugate `p ↦ conj(f(p))`.
    pub fn conjugate(&self) -> QFunction {
        let f = self.eval.clone();
        QFunction::new(format!("conj({})", self.name), self.kind, move |p| {
            Ok(f(p)?.conj())
        })
        .with_domain(self.domain)
    }

    /// Pointwise algebraic inverse `p ↦ f(p)⁻¹`.
    pub fn reciprocal(&self) -> QFunction {
        let f = self.eval.clone();
        QFunction::new(format!("inv({})", self.name), self.kind, move |p| {
            f(p)?.inv()
        })
        .with_domain(self.domain)
    }
}

/// Projects a value onto `1` and the direction `ι`.
#[inline]
pub fn split_value(value: Quaternion, iota: Quaternion) -> (f64, f64) {
    (value.t, value.imag().dot(iota))
}

/// Builds the CE function `u + ι v` from scalar fields on the chart.
pub fn from_uv<U, V>(name: impl Into<String>, u: U, v: V) -> QFunction
where
    U: Fn(&SphericalPoint) -> f64 + Send + Sync + 'static,
    V: Fn(&SphericalPoint) -> f64 + Send + Sync + 'static,
{
    let u: ScalarField = Arc::new(u);
    let v: ScalarField = Arc::new(v);
    let (ue, ve) = (u.clone(), v.clone());
    let mut f = QFunction::new(name, FunctionKind::Ce, move |p| {
        let s = to_spherical(p)?;
        Ok(Quaternion::real(ue(&s)) + s.iota() * ve(&s))
    });
    f.split = Some(Split { u, v });
    f
}

/// Named analytic stems with closed forms, analytic on the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedStem {
    Exp,
    Log,
    /// `log(tan(z/2))`
    LogTan,
}

/// A complex analytic seed function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ComplexStem {
    /// Terms `c zⁿ`.
    Laurent(Vec<(i32, Complex64)>),
    Named(NamedStem),
}

impl ComplexStem {
    pub fn monomial(n: i32) -> Self {
        ComplexStem::Laurent(vec![(n, Complex64::new(1.0, 0.0))])
    }

    /// Parses comma-separated `n:re:im` terms, or one of `exp`, `log`,
    /// `logtan`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec.trim() {
            "exp" => return Ok(ComplexStem::Named(NamedStem::Exp)),
            "log" => return Ok(ComplexStem::Named(NamedStem::Log)),
            "logtan" => return Ok(ComplexStem::Named(NamedStem::LogTan)),
            _ => {}
        }
        let mut terms = Vec::new();
        for term in spec.split(',') {
            let parts: Vec<&str> = term.trim().split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Spec(format!("laurent term `{term}` is not n:re:im")));
            }
            let n = parts[0]
                .parse::<i32>()
                .map_err(|e| Error::Spec(format!("bad exponent `{}`: {e}", parts[0])))?;
            let re = parse_f64(parts[1])?;
            let im = parse_f64(parts[2])?;
            terms.push((n, Complex64::new(re, im)));
        }
        if terms.is_empty() {
            return Err(Error::Spec("empty laurent spec".into()));
        }
        Ok(ComplexStem::Laurent(terms))
    }

    pub fn label(&self) -> String {
        match self {
            ComplexStem::Laurent(terms) => terms
                .iter()
                .map(|(n, c)| format!("{n}:{}:{}", c.re, c.im))
                .collect::<Vec<_>>()
                .join(","),
            ComplexStem::Named(NamedStem::Exp) => "exp".into(),
            ComplexStem::Named(NamedStem::Log) => "log".into(),
            ComplexStem::Named(NamedStem::LogTan) => "logtan".into(),
        }
    }

    /// True when every coefficient is real, so the stem is real on the
    /// real axis.
    pub fn has_real_coefficients(&self) -> bool {
        match self {
            ComplexStem::Laurent(terms) => terms.iter().all(|(_, c)| c.im == 0.0),
            ComplexStem::Named(_) => false,
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            ComplexStem::Laurent(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(n, c) in terms {
                    if n < 0 && z == Complex64::new(0.0, 0.0) {
                        return Err(Error::domain("negative power at z = 0"));
                    }
                    acc += c * z.powi(n);
                }
                Ok(acc)
            }
            ComplexStem::Named(named) => {
                if z.im <= 0.0 {
                    return Err(Error::domain(format!(
                        "{} is only defined on the upper half plane, got {z}",
                        self.label()
                    )));
                }
                Ok(match named {
                    NamedStem::Exp => z.exp(),
                    NamedStem::Log => z.ln(),
                    NamedStem::LogTan => (z / 2.0).tan().ln(),
                })
            }
        }
    }

    /// Exact complex derivative.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        match self {
            ComplexStem::Laurent(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(n, c) in terms {
                    if n == 0 {
                        continue;
                    }
                    if n < 1 && z == Complex64::new(0.0, 0.0) {
                        return Err(Error::domain("negative power at z = 0"));
                    }
                    acc += c * f64::from(n) * z.powi(n - 1);
                }
                Ok(acc)
            }
            ComplexStem::Named(named) => {
                self.eval(z)?;
                Ok(match named {
                    NamedStem::Exp => z.exp(),
                    NamedStem::Log => 1.0 / z,
                    NamedStem::LogTan => 1.0 / z.sin(),
                })
            }
        }
    }

    /// Magnitude of the complex Cauchy–Riemann residual `∂f/∂x + i ∂f/∂y`
    /// by central differences, relative to `1 + |f|`.
    pub fn cr_residual(&self, z: Complex64, h: f64) -> Result<f64> {
        let dx = (self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h);
        let ih = Complex64::new(0.0, h);
        let dy = (self.eval(z + ih)? - self.eval(z - ih)?) / (2.0 * h);
        let res = dx + Complex64::i() * dy;
        Ok(res.norm() / (1.0 + self.eval(z)?.norm()))
    }

    /// Checks analyticity on the `(t, r)` samples of a grid.
    pub fn check_analytic(&self, grid: &SampleGrid) -> Result<()> {
        for z in grid.slice_points() {
            let res = self.cr_residual(z, 1e-5)?;
            if res >= 1e-8 {
                return Err(Error::Precondition(format!(
                    "stem {} fails the Cauchy-Riemann test at {z} (residual {res:e})",
                    self.label()
                )));
            }
        }
        Ok(())
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Spec(format!("bad number `{s}`: {e}")))
}

/// Lifts a complex function `g(t + i r) = a + i b` to `p ↦ a + ι b` with
/// `ι = Im p / |Im p|`. On the real axis only real values can be lifted.
pub(crate) fn lift_slice_map<G>(g: G, p: Quaternion) -> Result<Quaternion>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let r = p.imag_norm();
    let w = g(Complex64::new(p.t, r))?;
    if r == 0.0 {
        if w.im.abs() <= 1e-15 * (1.0 + w.re.abs()) {
            return Ok(Quaternion::real(w.re));
        }
        return Err(Error::domain(format!(
            "complex value {w} cannot be lifted on the real axis"
        )));
    }
    Ok(Quaternion::real(w.re) + unit_imaginary(p)? * w.im)
}

/// Cullen extension of an analytic stem: `f(t + ι r) = u(t, r) + ι v(t, r)`
/// where `u + i v = stem(t + i r)`.
pub fn cullen_extend(stem: &ComplexStem) -> QFunction {
    let s = stem.clone();
    QFunction::new(
        format!("stem:{}", stem.label()),
        FunctionKind::Ci,
        move |p| lift_slice_map(|z| s.eval(z), p),
    )
}

/// Complex component `f_ι` of a CE function on one slice.
#[derive(Debug, Clone)]
pub struct SliceFunction {
    function: QFunction,
    alpha: f64,
    beta: f64,
}

impl SliceFunction {
    pub fn iota(&self) -> Quaternion {
        iota(self.alpha, self.beta)
    }

    /// `f_ι(z)` for `z = t + r i` with `r > 0`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.im <= 0.0 {
            return Err(Error::domain(format!("{z} is not in the upper half plane")));
        }
        let s = SphericalPoint::new(z.re, z.im, self.alpha, self.beta);
        let (u, v) = self.function.split_at(&s)?;
        Ok(Complex64::new(u, v))
    }
}

pub fn restrict_to_slice(f: &QFunction, alpha: f64, beta: f64) -> Result<SliceFunction> {
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!(
            "{} is not CE and has no complex components",
            f.name()
        )));
    }
    Ok(SliceFunction {
        function: f.clone(),
        alpha,
        beta,
    })
}

/// Axis-aligned box in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartBox {
    pub t: (f64, f64),
    pub r: (f64, f64),
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

impl Default for ChartBox {
    fn default() -> Self {
        Self {
            t: (-1.0, 1.0),
            r: (0.5, 1.5),
            alpha: (-2.5, 2.5),
            beta: (0.4, PI - 0.4),
        }
    }
}

impl ChartBox {
    pub fn contains(&self, s: &SphericalPoint) -> bool {
        let within = |v: f64, (a, b): (f64, f64)| v >= a && v <= b;
        within(s.t, self.t)
            && within(s.r, self.r)
            && within(s.alpha, self.alpha)
            && within(s.beta, self.beta)
    }
}

/// Lower bounds kept between grid points and the chart singularities.
pub const MIN_SIN_BETA: f64 = 0.1;
pub const MIN_RADIUS: f64 = 0.1;

/// Tensor grid of chart points away from the singular set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub bounds: ChartBox,
    /// Points per axis in `(t, r, α, β)` order.
    pub counts: [usize; 4],
}

impl Default for SampleGrid {
    fn default() -> Self {
        Self {
            bounds: ChartBox::default(),
            counts: [8; 4],
        }
    }
}

fn linspace((a, b): (f64, f64), n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl SampleGrid {
    pub fn new(bounds: ChartBox, counts: [usize; 4]) -> Result<Self> {
        let g = Self { bounds, counts };
        g.validate()?;
        Ok(g)
    }

    pub fn uniform(bounds: ChartBox, n_per_axis: usize) -> Result<Self> {
        Self::new(bounds, [n_per_axis; 4])
    }

    /// Parses `t0,t1,r0,r1,a0,a1,b0,b1,n_per_axis`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 9 {
            return Err(Error::Spec(format!(
                "grid spec needs 9 comma-separated values, got {}",
                parts.len()
            )));
        }
        let v: Vec<f64> = parts[..8]
            .iter()
            .map(|s| parse_f64(s))
            .collect::<Result<_>>()?;
        let n = parts[8]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Spec(format!("bad point count `{}`: {e}", parts[8])))?;
        Self::uniform(
            ChartBox {
                t: (v[0], v[1]),
                r: (v[2], v[3]),
                alpha: (v[4], v[5]),
                beta: (v[6], v[7]),
            },
            n,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.bounds;
        for (name, (lo, hi)) in [("t", b.t), ("r", b.r), ("alpha", b.alpha), ("beta", b.beta)] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Region(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        if self.counts.contains(&0) {
            return Err(Error::Region("every axis needs at least one point".into()));
        }
        if b.r.0 < MIN_RADIUS {
            return Err(Error::Region(format!("r must stay above {MIN_RADIUS}")));
        }
        if b.beta.0.sin() < MIN_SIN_BETA
            || b.beta.1.sin() < MIN_SIN_BETA
            || b.beta.0 < 0.0
            || b.beta.1 > PI
        {
            return Err(Error::Region(format!(
                "sin(beta) must stay above {MIN_SIN_BETA}"
            )));
        }
        if b.alpha.0 <= -PI || b.alpha.1 > PI {
            return Err(Error::Region("alpha must lie in (-pi, pi]".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All grid points, `β` varying fastest.
    pub fn points(&self) -> Vec<SphericalPoint> {
        let ts = linspace(self.bounds.t, self.counts[0]);
        let rs = linspace(self.bounds.r, self.counts[1]);
        let als = linspace(self.bounds.alpha, self.counts[2]);
        let bes = linspace(self.bounds.beta, self.counts[3]);
        let mut out = Vec::with_capacity(self.len());
        for &t in &ts {
            for &r in &rs {
                for &a in &als {
                    for &b in &bes {
                        out.push(SphericalPoint::new(t, r, a, b));
                    }
                }
            }
        }
        out
    }

    /// The `(t, r)` samples as points `t + r i` of the upper half plane.
    pub fn slice_points(&self) -> Vec<Complex64> {
        let ts = linspace(self.bounds.t, self.counts[0]);
        let rs = linspace(self.bounds.r, self.counts[1]);
        ts.iter()
            .flat_map(|&t| rs.iter().map(move |&r| Complex64::new(t, r)))
            .collect()
    }
}
