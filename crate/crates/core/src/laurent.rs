//! Laurent expansions of Class I functions on annulus × sphere-window sets.
//!
//! On every slice `ι(α, β)` the function restricts to a holomorphic map of
//! `z = t + r i`. Its coefficients about `c = c₁ + c₂ i` come from the
//! trapezoid rule on the circle `|z − c| = (s + S)/2`:
//!
//! ```text
//! a_n = (1/N) Σ_k f(c + R e^{iθ_k}) R^{-n} e^{-inθ_k},   θ_k = 2πk/N
//! ```
//!
//! which converges geometrically for analytic integrands. Collecting `a_n`
//! over a grid of slices gives the coefficient functions `a_n(α, β)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diffops::{DiffConfig, Scheme};
use crate::error::{Error, Result};
use crate::function::{restrict_to_slice, QFunction, MIN_SIN_BETA};
use crate::parallel::par_map;
use crate::quaternion::{to_spherical, Quaternion};

/// Samples per window axis.
pub const WINDOW_POINTS: usize = 9;
pub const MIN_QUADRATURE_POINTS: usize = 16;
pub const DEFAULT_N_RANGE: (i32, i32) = (-8, 8);

/// Product of an annulus `s < |z − c| < S` in the slice plane and a window
/// of slice directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRegion {
    pub c1: f64,
    pub c2: f64,
    pub inner: f64,
    pub outer: f64,
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

impl AnnulusRegion {
    pub fn new(center: (f64, f64), radii: (f64, f64)) -> Result<Self> {
        let region = Self {
            c1: center.0,
            c2: center.1,
            inner: radii.0,
            outer: radii.1,
            alpha: (-2.5, 2.5),
            beta: (0.4, PI - 0.4),
        };
        region.validate()?;
        Ok(region)
    }

    pub fn with_window(mut self, alpha: (f64, f64), beta: (f64, f64)) -> Result<Self> {
        self.alpha = alpha;
        self.beta = beta;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.inner > 0.0 && self.inner < self.outer) {
            return Err(Error::Region(format!(
                "radii must satisfy 0 < s < S, got s = {}, S = {}",
                self.inner, self.outer
            )));
        }
        if self.c2 - self.outer <= 0.0 {
            return Err(Error::Region(format!(
                "annulus leaves the upper half plane: c2 - S = {}",
                self.c2 - self.outer
            )));
        }
        let (a0, a1) = self.alpha;
        let (b0, b1) = self.beta;
        if !(a0 <= a1 && a0 > -PI && a1 <= PI) {
            return Err(Error::Region(format!(
                "alpha window [{a0}, {a1}] must lie in (-pi, pi]"
            )));
        }
        if !(b0 <= b1
            && b0 > 0.0
            && b1 < PI
            && b0.sin() >= MIN_SIN_BETA
            && b1.sin() >= MIN_SIN_BETA)
        {
            return Err(Error::Region(format!(
                "beta window [{b0}, {b1}] must keep sin(beta) >= {MIN_SIN_BETA}"
            )));
        }
        Ok(())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.c1, self.c2)
    }

    pub fn contour_radius(&self) -> f64 {
        0.5 * (self.inner + self.outer)
    }

    pub fn alphas(&self) -> Vec<f64> {
        axis(self.alpha)
    }

    pub fn betas(&self) -> Vec<f64> {
        axis(self.beta)
    }
}

fn axis((a, b): (f64, f64)) -> Vec<f64> {
    (0..WINDOW_POINTS)
        .map(|i| a + (b - a) * i as f64 / (WINDOW_POINTS - 1) as f64)
        .collect()
}

/// Coefficients `a_n` for `n ∈ [n_min, n_max]` on one slice.
pub fn slice_coefficients(
    f: &QFunction,
    region: &AnnulusRegion,
    (n_min, n_max): (i32, i32),
    alpha: f64,
    beta: f64,
    quadrature_points: usize,
) -> Result<Vec<Complex64>> {
    let slice = restrict_to_slice(f, alpha, beta)?;
    let c = region.center();
    let radius = region.contour_radius();
    let n_q = quadrature_points;
    let samples: Vec<Complex64> = (0..n_q)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_q as f64;
            slice.eval(c + Complex64::from_polar(radius, theta))
        })
        .collect::<Result<_>>()?;
    Ok((n_min..=n_max)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, fz) in samples.iter().enumerate() {
                let theta = 2.0 * PI * k as f64 / n_q as f64;
                acc += fz * Complex64::from_polar(1.0, -f64::from(n) * theta);
            }
            acc / n_q as f64 * radius.powi(-n)
        })
        .collect())
}

/// Truncated series with coefficient functions sampled on the window grid.
#[derive(Debug, Clone)]
pub struct LaurentSeries {
    pub region: AnnulusRegion,
    pub n_min: i32,
    pub n_max: i32,
    pub quadrature_points: usize,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// `coefficients[n − n_min][alpha_idx][beta_idx]`
    pub coefficients: Vec<Vec<Vec<Complex64>>>,
    source: QFunction,
}

pub fn laurent_coefficients(
    f: &QFunction,
    region: &AnnulusRegion,
    n_range: (i32, i32),
    quadrature_points: usize,
) -> Result<LaurentSeries> {
    region.validate()?;
    if quadrature_points < MIN_QUADRATURE_POINTS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_QUADRATURE_POINTS} quadrature points, got {quadrature_points}"
        )));
    }
    if n_range.0 > n_range.1 {
        return Err(Error::Precondition(format!("empty n range {n_range:?}")));
    }
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!(
            "{} is not CE; it has no slice components",
            f.name()
        )));
    }
    let alphas = region.alphas();
    let betas = region.betas();
    let cells: Vec<(usize, usize)> = (0..alphas.len())
        .flat_map(|i| (0..betas.len()).map(move |j| (i, j)))
        .collect();
    let per_cell = par_map(&cells, |&(i, j)| {
        slice_coefficients(f, region, n_range, alphas[i], betas[j], quadrature_points)
    });

    let count = (n_range.1 - n_range.0 + 1) as usize;
    let mut coefficients =
        vec![vec![vec![Complex64::new(0.0, 0.0); betas.len()]; alphas.len()]; count];
    for (&(i, j), cell) in cells.iter().zip(per_cell) {
        for (k, a) in cell?.into_iter().enumerate() {
            coefficients[k][i][j] = a;
        }
    }
    Ok(LaurentSeries {
        region: *region,
        n_min: n_range.0,
        n_max: n_range.1,
        quadrature_points,
        alphas,
        betas,
        coefficients,
        source: f.clone(),
    })
}

impl LaurentSeries {
    pub fn source(&self) -> &QFunction {
        &self.source
    }

    /// Stored coefficient `a_n` at a window grid node.
    pub fn coefficient(&self, n: i32, alpha_idx: usize, beta_idx: usize) -> Option<Complex64> {
        if n < self.n_min || n > self.n_max {
            return None;
        }
        self.coefficients
            .get((n - self.n_min) as usize)?
            .get(alpha_idx)?
            .get(beta_idx)
            .copied()
    }

    /// Recomputes every `a_n` on an arbitrary slice.
    pub fn coefficients_at(&self, alpha: f64, beta: f64) -> Result<Vec<Complex64>> {
        slice_coefficients(
            &self.source,
            &self.region,
            (self.n_min, self.n_max),
            alpha,
            beta,
            self.quadrature_points,
        )
    }

    /// Bilinear interpolation of all coefficients at `(α, β)`.
    pub fn interpolate(&self, alpha: f64, beta: f64) -> Result<Vec<Complex64>> {
        let (ia, fa) = locate(&self.alphas, alpha)
            .ok_or_else(|| Error::domain(format!("alpha = {alpha} outside the window")))?;
        let (ib, fb) = locate(&self.betas, beta)
            .ok_or_else(|| Error::domain(format!("beta = {beta} outside the window")))?;
        Ok(self
            .coefficients
            .iter()
            .map(|grid| {
                let c00 = grid[ia][ib];
                let c10 = grid[ia + 1][ib];
                let c01 = grid[ia][ib + 1];
                let c11 = grid[ia + 1][ib + 1];
                c00 * ((1.0 - fa) * (1.0 - fb))
                    + c10 * (fa * (1.0 - fb))
                    + c01 * ((1.0 - fa) * fb)
                    + c11 * (fa * fb)
            })
            .collect())
    }

    fn slice_offset(&self, p: Quaternion) -> Result<(f64, f64, Complex64)> {
        let s = to_spherical(p)?;
        let w = Complex64::new(s.t, s.r) - self.region.center();
        let d = w.norm();
        if !(d > self.region.inner && d < self.region.outer) {
            return Err(Error::domain(format!(
                "|z - c| = {d} outside the annulus ({}, {})",
                self.region.inner, self.region.outer
            )));
        }
        Ok((s.alpha, s.beta, w))
    }

    /// Partial sum `Σ a_n(α, β) (z − c)ⁿ` lifted back to `u + ι v`.
    pub fn reconstruct(&self, p: Quaternion) -> Result<Quaternion> {
        let (alpha, beta, w) = self.slice_offset(p)?;
        let coeffs = self.interpolate(alpha, beta)?;
        let sum: Complex64 = coeffs
            .iter()
            .zip(self.n_min..=self.n_max)
            .map(|(a, n)| a * w.powi(n))
            .sum();
        let s = to_spherical(p)?;
        Ok(Quaternion::real(sum.re) + s.iota() * sum.im)
    }

    /// Truncation error estimate at `p`: the outermost computed terms
    /// continued geometrically with ratios `|w|/S` and `s/|w|`.
    pub fn tail_estimate(&self, p: Quaternion) -> Result<f64> {
        let (alpha, beta, w) = self.slice_offset(p)?;
        let coeffs = self.interpolate(alpha, beta)?;
        let d = w.norm();
        let q_pos = d / self.region.outer;
        let q_neg = self.region.inner / d;
        let top = coeffs.last().map_or(0.0, |a| a.norm()) * d.powi(self.n_max);
        let bottom = coeffs.first().map_or(0.0, |a| a.norm()) * d.powi(self.n_min);
        Ok(top * q_pos / (1.0 - q_pos) + bottom * q_neg / (1.0 - q_neg))
    }

    pub fn export(&self) -> SeriesExport {
        SeriesExport {
            function: self.source.name().to_string(),
            center: [self.region.c1, self.region.c2],
            radii: [self.region.inner, self.region.outer],
            window: Window {
                alpha: [self.region.alpha.0, self.region.alpha.1],
                beta: [self.region.beta.0, self.region.beta.1],
                alphas: self.alphas.clone(),
                betas: self.betas.clone(),
            },
            n_range: [self.n_min, self.n_max],
            quadrature_points: self.quadrature_points,
            coefficients: self
                .coefficients
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|row| row.iter().map(|c| [c.re, c.im]).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

fn locate(nodes: &[f64], x: f64) -> Option<(usize, f64)> {
    let (first, last) = (*nodes.first()?, *nodes.last()?);
    // chart round trips can land a few ulps outside the window edges
    let slack = 1e-9 * (last - first).abs().max(1.0);
    if !(x >= first - slack && x <= last + slack) || nodes.len() < 2 {
        return None;
    }
    let x = x.clamp(first, last);
    let step = (last - first) / (nodes.len() - 1) as f64;
    if step == 0.0 {
        return Some((0, 0.0));
    }
    let idx = (((x - first) / step).floor() as usize).min(nodes.len() - 2);
    Some((idx, ((x - nodes[idx]) / step).clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

/// Serializable form of a [`LaurentSeries`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesExport {
    pub function: String,
    pub center: [f64; 2],
    pub radii: [f64; 2],
    pub window: Window,
    pub n_range: [i32; 2],
    pub quadrature_points: usize,
    /// `coefficients[n][alpha_idx][beta_idx] = [re, im]`
    pub coefficients: Vec<Vec<Vec<[f64; 2]>>>,
}

/// Spherical Cauchy–Riemann residuals of one coefficient function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVerdict {
    pub n: i32,
    pub max_s1: f64,
    pub max_s2: f64,
    pub passed: bool,
}

fn coefficient_derivative<G>(g: G, cfg: &DiffConfig) -> Result<Vec<Complex64>>
where
    G: Fn(f64) -> Result<Vec<Complex64>>,
{
    let central = |h: f64| -> Result<Vec<Complex64>> {
        let (p, m) = (g(h)?, g(-h)?);
        Ok(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    match cfg.scheme {
        Scheme::Central => central(cfg.h),
        Scheme::Richardson => {
            let coarse = central(cfg.h)?;
            let fine = central(0.5 * cfg.h)?;
            Ok(fine
                .iter()
                .zip(&coarse)
                .map(|(f, c)| (f * 4.0 - c) / 3.0)
                .collect())
        }
    }
}

/// Checks that every `a_n(α, β) = u_n + ι v_n` satisfies the spherical
/// Cauchy–Riemann equations at the window nodes. Derivatives in `α, β`
/// recompute the contour integrals on neighbouring slices.
pub fn coefficient_class_check(
    series: &LaurentSeries,
    cfg: &DiffConfig,
) -> Result<Vec<CoefficientVerdict>> {
    cfg.validate()?;
    let spacing = |nodes: &[f64]| (nodes[nodes.len() - 1] - nodes[0]) / (nodes.len() - 1) as f64;
    let finest = spacing(&series.alphas).min(spacing(&series.betas));
    if finest > 0.0 && cfg.h >= 0.5 * finest {
        return Err(Error::Precondition(format!(
            "step h = {} does not resolve the window spacing {finest}",
            cfg.h
        )));
    }
    let nodes: Vec<(f64, f64)> = series
        .alphas
        .iter()
        .flat_map(|&a| series.betas.iter().map(move |&b| (a, b)))
        .collect();
    let per_node = par_map(&nodes, |&(alpha, beta)| -> Result<Vec<(f64, f64, f64)>> {
        let d_alpha = coefficient_derivative(|h| series.coefficients_at(alpha + h, beta), cfg)?;
        let d_beta = coefficient_derivative(|h| series.coefficients_at(alpha, beta + h), cfg)?;
        let here = series.coefficients_at(alpha, beta)?;
        let sb = beta.sin();
        Ok(d_alpha
            .iter()
            .zip(&d_beta)
            .zip(&here)
            .map(|((da, db), a)| {
                let s1 = da.im / sb + db.re;
                let s2 = da.re / sb - db.im;
                (s1, s2, a.norm())
            })
            .collect())
    });

    let count = (series.n_max - series.n_min + 1) as usize;
    let mut out: Vec<CoefficientVerdict> = (series.n_min..=series.n_max)
        .map(|n| CoefficientVerdict {
            n,
            max_s1: 0.0,
            max_s2: 0.0,
            passed: true,
        })
        .collect();
    for node in per_node {
        let node = node?;
        debug_assert_eq!(node.len(), count);
        for (v, (s1, s2, scale)) in out.iter_mut().zip(node) {
            v.max_s1 = v.max_s1.max(s1.abs());
            v.max_s2 = v.max_s2.max(s2.abs());
            if s1.abs().max(s2.abs()) > cfg.tol.threshold(scale) {
                v.passed = false;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn region_validation() {
        assert!(AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).is_ok());
        assert!(matches!(
            AnnulusRegion::new((0.0, 1.0), (0.6, 0.2)),
            Err(Error::Region(_))
        ));
        assert!(matches!(
            AnnulusRegion::new((0.0, 0.5), (0.2, 0.6)),
            Err(Error::Region(_))
        ));
        let r = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        assert!(r.with_window((-1.0, 1.0), (0.01, 1.0)).is_err());
    }

    #[test]
    fn p_squared_about_i() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        let a = slice_coefficients(&catalog::power(2), &region, (-3, 4), 0.7, 1.1, 64).unwrap();
        let expected = [
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(-1.0, 0.0),
            c(0.0, 2.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ];
        for (got, want) in a.iter().zip(expected) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn identity_about_shifted_center() {
        let region = AnnulusRegion::new((1.0, 2.0), (0.5, 1.0)).unwrap();
        let a = slice_coefficients(&QFunction::identity(), &region, (0, 2), -0.3, 2.0, 32).unwrap();
        assert!((a[0] - c(1.0, 2.0)).norm() < 1e-13);
        assert!((a[1] - c(1.0, 0.0)).norm() < 1e-13);
        assert!(a[2].norm() < 1e-13);
    }

    #[test]
    fn reciprocal_is_geometric() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        let a = slice_coefficients(&catalog::power(-1), &region, (-4, 6), 0.3, 1.3, 64).unwrap();
        let center = region.center();
        for (k, n) in (-4..=6).enumerate() {
            let want = if n < 0 {
                c(0.0, 0.0)
            } else {
                (-1.0f64).powi(n) * center.powi(-n - 1)
            };
            assert!((a[k] - want).norm() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        assert!(laurent_coefficients(&catalog::power(2), &region, (0, 2), 8).is_err());
        assert!(laurent_coefficients(&catalog::power(2), &region, (3, 2), 64).is_err());
        let raw = QFunction::new("raw", crate::function::FunctionKind::Raw, Ok);
        assert!(matches!(
            laurent_coefficients(&raw, &region, (0, 2), 64),
            Err(Error::Kind(_))
        ));
    }

    #[test]
    fn reconstruct_p_squared() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        let series =
            laurent_coefficients(&catalog::power(2), &region, DEFAULT_N_RANGE, 64).unwrap();
        let s = crate::quaternion::SphericalPoint::new(0.3, 1.2, 0.5, 1.0);
        let p = s.to_quaternion();
        assert!(series.reconstruct(p).unwrap().max_abs_diff(p * p) < 1e-8);
        assert!(series.tail_estimate(p).unwrap() < 1e-8);
        let far = crate::quaternion::SphericalPoint::new(2.0, 1.0, 0.5, 1.0).to_quaternion();
        assert!(series.reconstruct(far).is_err());
        let outside = crate::quaternion::SphericalPoint::new(0.3, 1.2, 2.9, 1.0).to_quaternion();
        assert!(series.reconstruct(outside).is_err());
    }

    #[test]
    fn interpolation_hits_nodes() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        let series = laurent_coefficients(&catalog::rho(), &region, (0, 1), 32).unwrap();
        let (a, b) = (series.alphas[3], series.betas[5]);
        let interp = series.interpolate(a, b).unwrap();
        assert!((interp[0] - series.coefficient(0, 3, 5).unwrap()).norm() < 1e-12);
        assert!((interp[0] - c(a, (b / 2.0).tan().ln())).norm() < 1e-12);
    }

    #[test]
    fn export_layout() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6)).unwrap();
        let series = laurent_coefficients(&catalog::power(2), &region, (-1, 2), 32).unwrap();
        let doc = series.export();
        assert_eq!(doc.coefficients.len(), 4);
        assert_eq!(doc.coefficients[0].len(), WINDOW_POINTS);
        assert_eq!(doc.coefficients[0][0].len(), WINDOW_POINTS);
        assert!((doc.coefficients[1][4][4][0] + 1.0).abs() < 1e-12);
        let json = serde_json::to_string(&doc).unwrap();
        let back: SeriesExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.n_range, doc.n_range);
        assert_eq!(back.window.alphas.len(), WINDOW_POINTS);
        assert!((back.coefficients[1][4][4][0] - doc.coefficients[1][4][4][0]).abs() < 1e-15);
    }

    #[test]
    fn class_check_resolution_error() {
        let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6))
            .unwrap()
            .with_window((0.0, 0.01), (1.0, 1.01))
            .unwrap();
        let series = laurent_coefficients(&catalog::power(2), &region, (0, 1), 32).unwrap();
        assert!(coefficient_class_check(&series, &DiffConfig::central(0.01)).is_err());
    }
}
