//! Property suite run by `fueterlab verify-props`.
//!
//! Every check reports its worst residual against a fixed tolerance. Checks
//! that cannot be evaluated (a singular stencil, a rejected precondition)
//! are reported as failures with the error text instead of aborting the
//! suite.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::{self, witnesses};
use crate::classify::{classify, jacobian_check, right_class_ii, ClassStats, Verdict};
use crate::diffops::{
    class1_residual, derivative, fueter_left, fueter_right, fueter_spherical, imaginary_derivative,
    spherical_cr_residuals, DiffConfig,
};
use crate::error::Result;
use crate::function::{ChartBox, ComplexStem, FunctionKind, QFunction, SampleGrid};
use crate::generators::{
    chiral_difference, chiral_difference_unchecked, ci_extend_rinehart, mirror, rinehart_l,
    ComplexMap,
};
use crate::laurent::{
    coefficient_class_check, laurent_coefficients, slice_coefficients, AnnulusRegion,
};
use crate::parallel::par_map;
use crate::quaternion::{Quaternion, SphericalPoint};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub diff: DiffConfig,
    pub grid: SampleGrid,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            diff: DiffConfig::default(),
            grid: SampleGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl PropCheck {
    fn bounded(name: &'static str, statement: &'static str, max: f64, tol: f64) -> Self {
        Self {
            name,
            statement,
            passed: max.is_finite() && max <= tol,
            max_residual: max,
            tolerance: tol,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    fn failed(mut self, detail: impl Into<String>) -> Self {
        self.passed = false;
        self.detail = detail.into();
        self
    }

    fn errored(name: &'static str, statement: &'static str, err: impl std::fmt::Display) -> Self {
        Self {
            name,
            statement,
            passed: false,
            max_residual: f64::NAN,
            tolerance: f64::NAN,
            detail: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub config: DiffConfig,
    pub grid: SampleGrid,
    pub checks: Vec<PropCheck>,
    pub passed: usize,
    pub total: usize,
    pub all_passed: bool,
}

type CheckFn = fn(&VerifyConfig) -> Result<PropCheck>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    (
        "operator-equivalence",
        "chart and Cartesian forms of the left Fueter operator agree",
        operator_equivalence,
    ),
    (
        "closure",
        "sums and products stay in their class; the inverse of p is Class III",
        closure,
    ),
    (
        "witness-classes",
        "catalog verdicts match their known classes and respect III => II => I",
        witness_classes,
    ),
    (
        "jacobian",
        "det of the real Jacobian equals |df/dt|^2 v^2/r^2 for Class II maps",
        jacobian,
    ),
    (
        "spherical-cr",
        "Class II functions satisfy the spherical Cauchy-Riemann equations",
        spherical_cr,
    ),
    (
        "rinehart-closed-forms",
        "L(z^2) = -2 and L(z^3) = -6x - 2iy",
        rinehart_closed_forms,
    ),
    (
        "rinehart-regular",
        "CI extensions of Rinehart images are regular",
        rinehart_regular,
    ),
    (
        "imaginary-derivative",
        "the imaginary derivative of a Class II function is 2v",
        imaginary_derivative_check,
    ),
    (
        "conjugate-chirality",
        "left Fueter of f equals minus right Fueter of conj(f)",
        conjugate_chirality,
    ),
    (
        "conjugate-right-class-ii",
        "conj of an (alpha, beta)-only Class II function is right Class II",
        conjugate_right_class_ii,
    ),
    (
        "centrality",
        "left and right Fueter agree exactly on Class III functions",
        centrality,
    ),
    (
        "decomposition",
        "left Fueter = Class I operator - imaginary derivative / r",
        decomposition,
    ),
    (
        "chiral-difference",
        "the chiral difference of a Class II function is regular",
        chiral_regular,
    ),
    (
        "laurent",
        "slice Laurent coefficients match closed forms and are Class II",
        laurent,
    ),
    (
        "mirror",
        "the mirror is an involution exchanging left and right Class II",
        mirror_check,
    ),
    (
        "convergence-order",
        "central differences are second order",
        convergence_order,
    ),
];

/// Runs every check. Deterministic for a given configuration.
pub fn verify_props(cfg: &VerifyConfig) -> Summary {
    let checks: Vec<PropCheck> = CHECKS
        .iter()
        .map(|&(name, statement, check)| {
            let cfg = cfg.diff.validate().and(cfg.grid.validate()).map(|_| cfg);
            match cfg.and_then(check) {
                Ok(c) => c,
                Err(e) => PropCheck::errored(name, statement, e),
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    Summary {
        seed: cfg.seed,
        config: cfg.diff,
        grid: cfg.grid,
        total: checks.len(),
        all_passed: passed == checks.len(),
        passed,
        checks,
    }
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

fn statement(name: &str) -> &'static str {
    CHECKS.iter().find(|c| c.0 == name).map_or("", |c| c.1)
}

fn rng(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Uniform point of `bounds`.
pub fn random_point<R: Rng>(rng: &mut R, bounds: &ChartBox) -> SphericalPoint {
    let mut pick = |(a, b): (f64, f64)| if a < b { rng.gen_range(a..b) } else { a };
    let t = pick(bounds.t);
    let r = pick(bounds.r);
    let alpha = pick(bounds.alpha);
    let beta = pick(bounds.beta);
    SphericalPoint::new(t, r, alpha, beta)
}

/// `p ↦ Σ a_k p^k` with random quaternion coefficients of norm at most one.
/// Not CE in general.
pub fn random_polynomial<R: Rng>(rng: &mut R, degree: usize) -> QFunction {
    let coeffs: Vec<Quaternion> = (0..=degree)
        .map(|_| Quaternion::from_array(std::array::from_fn(|_| rng.gen_range(-0.5..0.5))))
        .collect();
    QFunction::new(format!("poly{degree}"), FunctionKind::Raw, move |p| {
        let mut acc = Quaternion::ZERO;
        for a in coeffs.iter().rev() {
            acc = acc * p + *a;
        }
        Ok(acc)
    })
}

/// Worst `|chart − Cartesian|` gap of the left Fueter operator over random
/// polynomials and random points.
pub fn operator_equivalence_residual(
    cfg: &DiffConfig,
    seed: u64,
    functions: usize,
    points: usize,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bounds = ChartBox::default();
    let mut worst = 0.0_f64;
    for k in 0..functions {
        let f = random_polynomial(&mut rng, 1 + k % 4);
        let pts: Vec<SphericalPoint> = (0..points)
            .map(|_| random_point(&mut rng, &bounds))
            .collect();
        let gaps = par_map(&pts, |s| -> Result<f64> {
            let sph = fueter_spherical(&f, s, cfg)?;
            let cart = fueter_left(&f, s.to_quaternion(), cfg)?;
            Ok((sph.value - cart.value).norm())
        });
        for g in gaps {
            worst = worst.max(g?);
        }
    }
    Ok(worst)
}

fn operator_equivalence(cfg: &VerifyConfig) -> Result<PropCheck> {
    let max = operator_equivalence_residual(&cfg.diff, cfg.seed, 20, 200)?;
    Ok(PropCheck::bounded(
        "operator-equivalence",
        statement("operator-equivalence"),
        max,
        1e-6,
    )
    .with_detail("20 random quaternion polynomials x 200 points"))
}

fn stats_residual(stats: &ClassStats) -> f64 {
    if stats.verdict == Verdict::Singular {
        f64::INFINITY
    } else {
        stats.max
    }
}

fn closure(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut rng = rng(cfg, 2);
    let mut cases: Vec<(QFunction, bool)> = Vec::new();
    for _ in 0..4 {
        let (m, n) = (rng.gen_range(-2..=4), rng.gen_range(-2..=4));
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let f = catalog::power(m).scaled(a);
        let g = catalog::power(n).scaled(b);
        cases.push((f.product(&g), true));
        cases.push((f.sum(&g), true));
    }
    cases.push((QFunction::identity().reciprocal(), true));
    cases.push((catalog::rho().product(&catalog::power(2)), false));
    cases.push((catalog::rho().sum(&catalog::varrho()), false));

    let mut failures = Vec::new();
    let mut worst_ratio = 0.0_f64;
    for (f, cullen) in &cases {
        let r = classify(f, &cfg.grid, &cfg.diff)?;
        let ok = r.class_i.verdict.passed()
            && r.class_ii.verdict.passed()
            && r.class_iii.verdict.passed() == *cullen;
        worst_ratio = worst_ratio.max(stats_residual(&r.class_ii));
        if !ok {
            failures.push(format!(
                "{}: I={:?} II={:?} III={:?}",
                f.name(),
                r.class_i.verdict,
                r.class_ii.verdict,
                r.class_iii.verdict
            ));
        }
    }
    let check = PropCheck::bounded("closure", statement("closure"), failures.len() as f64, 0.0)
        .with_detail(format!(
            "{} combinations, worst Class II residual {worst_ratio:e}",
            cases.len()
        ));
    Ok(if failures.is_empty() {
        check
    } else {
        check.failed(failures.join("; "))
    })
}

fn witness_classes(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut failures = Vec::new();
    for w in witnesses() {
        let r = classify(&w.function, &cfg.grid, &cfg.diff)?;
        let got = (
            r.class_i.verdict.passed(),
            r.class_ii.verdict.passed(),
            r.class_iii.verdict.passed(),
            r.regular.verdict.passed(),
        );
        let e = w.expected;
        if got != (e.class_i, e.class_ii, e.class_iii, e.regular) || !r.inclusion_consistent {
            failures.push(format!("{}: got {got:?}", w.name));
        }
    }
    let check = PropCheck::bounded(
        "witness-classes",
        statement("witness-classes"),
        failures.len() as f64,
        0.0,
    );
    Ok(if failures.is_empty() {
        check
    } else {
        check.failed(failures.join("; "))
    })
}

fn jacobian(cfg: &VerifyConfig) -> Result<PropCheck> {
    let f = catalog::power(2);
    let mut rng = rng(cfg, 4);
    let bounds = ChartBox::default();
    let pts: Vec<Quaternion> = (0..100)
        .map(|_| random_point(&mut rng, &bounds).to_quaternion())
        .collect();
    let mut worst = 0.0_f64;
    for p in pts {
        worst = worst.max(jacobian_check(&f, p, &cfg.diff)?.relative_gap());
    }
    let at = jacobian_check(&f, Quaternion::new(1.0, 1.0, 0.0, 0.0), &cfg.diff)?;
    let exact = (at.det_numeric - 32.0).abs();
    let check = PropCheck::bounded("jacobian", statement("jacobian"), worst, 1e-4)
        .with_detail(format!("p^2 at 100 points; |det(1+i) - 32| = {exact:e}"));
    Ok(if exact < 1e-6 {
        check
    } else {
        check.failed(format!("det at 1+i is {}", at.det_numeric))
    })
}

fn max_over_grid<F>(grid: &SampleGrid, f: F) -> Result<f64>
where
    F: Fn(&SphericalPoint) -> Result<f64> + Sync + Send,
{
    par_map(&grid.points(), f)
        .into_iter()
        .try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
}

/// Catalog functions known to be Class II on the default chart box.
pub fn class_ii_catalog() -> Vec<QFunction> {
    witnesses()
        .into_iter()
        .filter(|w| w.expected.class_ii)
        .map(|w| w.function)
        .collect()
}

fn spherical_cr(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    for w in witnesses() {
        let r = classify(&w.function, &cfg.grid, &cfg.diff)?;
        if r.class_ii.verdict.passed() {
            let m = max_over_grid(&cfg.grid, |s| {
                let (s1, s2) = spherical_cr_residuals(&w.function, s, &cfg.diff)?;
                Ok(s1.abs().max(s2.abs()))
            })?;
            worst = worst.max(m);
        }
    }
    let witness = catalog::x_over_r_iota();
    let converse = max_over_grid(&cfg.grid, |s| {
        let (s1, s2) = spherical_cr_residuals(&witness, s, &cfg.diff)?;
        Ok(s1.abs().max(s2.abs()))
    })?;
    let check = PropCheck::bounded("spherical-cr", statement("spherical-cr"), worst, 1e-5)
        .with_detail(format!("x-over-r-iota residual {converse:e}"));
    Ok(if converse > 1e-2 {
        check
    } else {
        check.failed(format!("x-over-r-iota residual only {converse:e}"))
    })
}

fn rinehart_closed_forms(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut rng = rng(cfg, 6);
    let l2 = rinehart_l(&ComplexStem::monomial(2));
    let l3 = rinehart_l(&ComplexStem::monomial(3));
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0));
        worst = worst.max((l2.eval(z)? - Complex64::new(-2.0, 0.0)).norm());
        worst = worst.max((l3.eval(z)? - Complex64::new(-6.0 * z.re, -2.0 * z.im)).norm());
    }
    Ok(PropCheck::bounded(
        "rinehart-closed-forms",
        statement("rinehart-closed-forms"),
        worst,
        1e-10,
    ))
}

pub const RINEHART_STEMS: [&str; 5] = ["1:1:0", "2:1:0", "3:1:0", "4:1:0", "-1:1:0"];

fn rinehart_regular(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    for spec in RINEHART_STEMS {
        let g: Arc<dyn ComplexMap> = Arc::new(rinehart_l(&ComplexStem::parse(spec)?));
        let f = ci_extend_rinehart(g, &cfg.grid, &cfg.diff)?;
        worst = worst.max(max_over_grid(&cfg.grid, |s| {
            Ok(fueter_left(&f, s.to_quaternion(), &cfg.diff)?.norm())
        })?);
    }
    Ok(PropCheck::bounded(
        "rinehart-regular",
        statement("rinehart-regular"),
        worst,
        1e-5,
    )
    .with_detail("stems z, z^2, z^3, z^4, 1/z"))
}

fn imaginary_derivative_check(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    for f in class_ii_catalog() {
        let m = max_over_grid(&cfg.grid, |s| {
            let (_, v) = f.split_at(s)?;
            Ok((imaginary_derivative(&f, s, &cfg.diff)?.value - Quaternion::real(2.0 * v)).norm())
        })?;
        worst = worst.max(m);
    }
    Ok(PropCheck::bounded(
        "imaginary-derivative",
        statement("imaginary-derivative"),
        worst,
        1e-5,
    ))
}

fn slice_constant_witnesses() -> Vec<QFunction> {
    vec![catalog::rho(), catalog::varrho(), catalog::sigma()]
}

/// Worst `|∂_l f + ∂_r f̄|` relative to the stencil tolerance.
fn conjugate_chirality(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    let mut worst_excess = 0.0_f64;
    for f in slice_constant_witnesses() {
        let fbar = f.conjugate();
        let rows = par_map(&cfg.grid.points(), |s| -> Result<(f64, f64)> {
            let p = s.to_quaternion();
            let l = fueter_left(&f, p, &cfg.diff)?;
            let r = fueter_right(&fbar, p, &cfg.diff)?;
            let res = (l.value + r.value).norm();
            Ok((res, res / cfg.diff.tol.threshold(l.scale.max(r.scale))))
        });
        for row in rows {
            let (res, ratio) = row?;
            worst = worst.max(res);
            worst_excess = worst_excess.max(ratio);
        }
    }
    Ok(PropCheck::bounded(
        "conjugate-chirality",
        statement("conjugate-chirality"),
        worst_excess,
        1.0,
    )
    .with_detail(format!(
        "max |left(f) + right(conj f)| = {worst:e}; residual/threshold reported"
    )))
}

fn conjugate_right_class_ii(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for f in slice_constant_witnesses() {
        let stats = right_class_ii(&f.conjugate(), &cfg.grid, &cfg.diff)?;
        worst = worst.max(stats_residual(&stats));
        if !stats.verdict.passed() {
            failures.push(format!("conj {}: {:?}", f.name(), stats.verdict));
        }
    }
    let check = PropCheck::bounded(
        "conjugate-right-class-ii",
        statement("conjugate-right-class-ii"),
        worst,
        1e-5,
    );
    Ok(if failures.is_empty() {
        check
    } else {
        check.failed(failures.join("; "))
    })
}

fn centrality(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut failures = Vec::new();
    for w in witnesses() {
        let r = classify(&w.function, &cfg.grid, &cfg.diff)?;
        if r.centrality.verdict.passed() != r.class_iii.verdict.passed() {
            failures.push(format!(
                "{}: central {:?}, Class III {:?}",
                w.name, r.centrality.verdict, r.class_iii.verdict
            ));
        }
    }
    let check = PropCheck::bounded(
        "centrality",
        statement("centrality"),
        failures.len() as f64,
        0.0,
    );
    Ok(if failures.is_empty() {
        check
    } else {
        check.failed(failures.join("; "))
    })
}

fn decomposition(cfg: &VerifyConfig) -> Result<PropCheck> {
    let mut worst = 0.0_f64;
    for w in witnesses() {
        let f = &w.function;
        let m = max_over_grid(&cfg.grid, |s| {
            let left = fueter_left(f, s.to_quaternion(), &cfg.diff)?;
            let c1 = class1_residual(f, s, &cfg.diff)?;
            let im = imaginary_derivative(f, s, &cfg.diff)?;
            let gap = (left.value - (c1.value - im.value / s.r)).norm();
            let scale = left.scale.max(c1.scale).max(im.scale / s.r);
            let allowed = cfg.diff.tol.threshold(scale)
                + left.estimated_error
                + c1.estimated_error
                + im.estimated_error / s.r;
            Ok(gap / allowed)
        })?;
        worst = worst.max(m);
    }
    Ok(
        PropCheck::bounded("decomposition", statement("decomposition"), worst, 1.0)
            .with_detail("residual relative to stencil tolerance"),
    )
}

/// Stencil for nested differences: Richardson, not below `1e-4`.
pub fn chiral_config(cfg: &DiffConfig) -> DiffConfig {
    DiffConfig {
        tol: cfg.tol,
        ..DiffConfig::richardson(cfg.h.max(1e-4))
    }
}

fn chiral_regular(cfg: &VerifyConfig) -> Result<PropCheck> {
    let ccfg = chiral_config(&cfg.diff);
    // the gate classifies rho; the returned function is rebuilt on the nested stencil
    chiral_difference(&catalog::rho(), &cfg.grid, &cfg.diff)?;
    let inner = chiral_difference_unchecked(&catalog::rho(), &ccfg);
    let nested = max_over_grid(&cfg.grid, |s| {
        Ok(fueter_left(&inner, s.to_quaternion(), &ccfg)?.norm())
    })?;
    let closed = max_over_grid(&cfg.grid, |s| {
        let p = s.to_quaternion();
        let d2 = p.x * p.x + p.y * p.y;
        let exact = Quaternion::imaginary(p.y, -p.x, 0.0) * (2.0 / d2);
        Ok((inner.eval(p)? - exact).norm())
    })?;
    let cubic = chiral_difference_unchecked(&catalog::power(3), &ccfg);
    let central = max_over_grid(&cfg.grid, |s| Ok(cubic.eval(s.to_quaternion())?.norm()))?;

    let check = PropCheck::bounded("chiral-difference", statement("chiral-difference"), nested, 1e-4).with_detail(format!(
        "Richardson h = {}: |left(delta rho)| = {nested:e}; |delta rho - closed form| = {closed:e}; |delta p^3| = {central:e}",
        ccfg.h
    ));
    Ok(if central < 1e-8 {
        check
    } else {
        check.failed(format!("chiral difference of p^3 is {central:e}"))
    })
}

/// `|(z − c)/c₂|^{N+1} / (1 − |z − c|/c₂)`, the geometric remainder of
/// `1/z` about `c` after the terms up to `N`.
pub fn reciprocal_tail_bound(offset: f64, c2: f64, n_max: i32) -> f64 {
    let q = offset / c2;
    q.powi(n_max + 1) / (1.0 - q)
}

/// Rounding allowance added to the analytic tail bound.
pub const QUADRATURE_FLOOR: f64 = 1e-13;

fn laurent(cfg: &VerifyConfig) -> Result<PropCheck> {
    let region = AnnulusRegion::new((0.0, 1.0), (0.2, 0.6))?;
    let mut notes = Vec::new();

    let sq = laurent_coefficients(&catalog::power(2), &region, (-3, 4), 64)?;
    let expected = [0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0].map(|re| Complex64::new(re, 0.0));
    let mut coeff_err = 0.0_f64;
    for (k, n) in (sq.n_min..=sq.n_max).enumerate() {
        let want = if n == 1 {
            Complex64::new(0.0, 2.0)
        } else {
            expected[k]
        };
        for ai in 0..sq.alphas.len() {
            for bi in 0..sq.betas.len() {
                coeff_err =
                    coeff_err.max((sq.coefficient(n, ai, bi).unwrap_or_default() - want).norm());
            }
        }
    }
    notes.push(format!("p^2 coefficients {coeff_err:e}"));

    let inv = laurent_coefficients(&catalog::power(-1), &region, (-20, 20), 128)?;
    let mut rng = rng(cfg, 14);
    let mut worst_excess = 0.0_f64;
    for _ in 0..50 {
        let offset = rng.gen_range(0.3..0.5);
        let theta = rng.gen_range(-PI..PI);
        let z = region.center() + Complex64::from_polar(offset, theta);
        let s = SphericalPoint::new(
            z.re,
            z.im,
            rng.gen_range(-2.4..2.4),
            rng.gen_range(0.5..2.6),
        );
        let p = s.to_quaternion();
        let gap = inv.reconstruct(p)?.max_abs_diff(p.inv()?);
        let bound = reciprocal_tail_bound(offset, region.c2, 20) + QUADRATURE_FLOOR;
        worst_excess = worst_excess.max(gap / bound);
    }
    notes.push(format!(
        "1/p reconstruction error / tail bound {worst_excess:.3}"
    ));

    let mut quad_change = 0.0_f64;
    for n in [2, 3, -1] {
        let f = catalog::power(n);
        let a = slice_coefficients(&f, &region, (-8, 8), 0.4, 1.2, 64)?;
        let b = slice_coefficients(&f, &region, (-8, 8), 0.4, 1.2, 128)?;
        for (x, y) in a.iter().zip(&b) {
            quad_change = quad_change.max((x - y).norm());
        }
    }
    notes.push(format!("64 -> 128 quadrature change {quad_change:e}"));

    let mut cr = 0.0_f64;
    for f in [
        catalog::rho(),
        catalog::rho().product(&QFunction::identity()),
        catalog::power(2),
    ] {
        let series = laurent_coefficients(&f, &region, (-4, 4), 64)?;
        for v in coefficient_class_check(&series, &cfg.diff)? {
            cr = cr.max(v.max_s1).max(v.max_s2);
        }
    }
    notes.push(format!("coefficient spherical CR residual {cr:e}"));

    let mut failures = Vec::new();
    if coeff_err > 1e-9 {
        failures.push("p^2 coefficients");
    }
    if worst_excess > 1.0 {
        failures.push("1/p tail bound");
    }
    if quad_change > 1e-10 {
        failures.push("quadrature convergence");
    }
    if cr >= 1e-5 {
        failures.push("coefficient classes");
    }
    let check =
        PropCheck::bounded("laurent", statement("laurent"), cr, 1e-5).with_detail(notes.join("; "));
    Ok(if failures.is_empty() {
        check
    } else {
        check.failed(format!("{}: {}", failures.join(", "), notes.join("; ")))
    })
}

/// Maps a slice direction to its antipode `-ι(α, β) = ι(α + π, π − β)`.
pub fn antipode(alpha: f64, beta: f64) -> (f64, f64) {
    let a = alpha + PI;
    (if a > PI { a - 2.0 * PI } else { a }, PI - beta)
}

fn mirror_check(cfg: &VerifyConfig) -> Result<PropCheck> {
    let rho = catalog::rho();
    let m = mirror(&rho);
    let stats = right_class_ii(&m, &cfg.grid, &cfg.diff)?;
    let right = stats_residual(&stats);
    let involution = max_over_grid(&cfg.grid, |s| {
        let p = s.to_quaternion();
        let mut worst = 0.0_f64;
        for f in [&rho, &catalog::power(3), &catalog::x_over_r_iota()] {
            worst = worst.max(mirror(&mirror(f)).eval(p)?.max_abs_diff(f.eval(p)?));
        }
        Ok(worst)
    })?;

    // antipodes of this window stay clear of the branch cut of rho at alpha = ±pi
    let region = AnnulusRegion::new((0.2, 1.0), (0.2, 0.6))?.with_window((0.5, 2.0), (0.6, 2.0))?;
    let mut series_gap = 0.0_f64;
    for f in [
        rho.product(&QFunction::identity()),
        catalog::power(2),
        catalog::power(-1),
    ] {
        let mf = mirror(&f);
        let series = laurent_coefficients(&mf, &region, (-4, 4), 64)?;
        for (ai, &alpha) in series.alphas.iter().enumerate().step_by(4) {
            for (bi, &beta) in series.betas.iter().enumerate().step_by(4) {
                let (a2, b2) = antipode(alpha, beta);
                let original = slice_coefficients(&f, &region, (-4, 4), a2, b2, 64)?;
                let iota = crate::quaternion::iota(alpha, beta);
                for (k, n) in (-4..=4).enumerate() {
                    let mine = series.coefficient(n, ai, bi).unwrap_or_default();
                    let mine = Quaternion::real(mine.re) + iota * mine.im;
                    let theirs = Quaternion::real(original[k].re) + (-iota) * original[k].im;
                    series_gap = series_gap.max(mine.max_abs_diff(theirs.conj()));
                }
            }
        }
    }

    let check = PropCheck::bounded("mirror", statement("mirror"), right, 1e-5).with_detail(format!(
        "right Class II of M(rho) {right:e}; M(M f) - f {involution:e}; mirrored series {series_gap:e}"
    ));
    Ok(if !stats.verdict.passed() {
        check.failed(format!("M(rho) right Class II verdict {:?}", stats.verdict))
    } else if involution > 1e-12 {
        check.failed(format!("M(M f) differs from f by {involution:e}"))
    } else if series_gap > 1e-8 {
        check.failed(format!(
            "mirrored series coefficients differ by {series_gap:e}"
        ))
    } else {
        check
    })
}

/// Ratio of central-difference errors of `∂_t p³` under `h → h/2`, at the
/// given points. The exact error of a cubic is `h² ∂_t³ p³ / 6`.
pub fn convergence_ratios(h: f64, points: &[Quaternion]) -> Result<Vec<f64>> {
    let f = catalog::power(3);
    points
        .iter()
        .map(|&p| {
            let exact = p * p * 3.0;
            let err = |h: f64| -> Result<f64> {
                let d = derivative(
                    |dt| f.eval(p + Quaternion::real(dt)),
                    &DiffConfig::central(h),
                )?;
                Ok(d.value.max_abs_diff(exact))
            };
            Ok(err(h)? / err(0.5 * h)?)
        })
        .collect()
}

fn convergence_order(cfg: &VerifyConfig) -> Result<PropCheck> {
    let h = cfg.diff.h.max(1e-3);
    let mut rng = rng(cfg, 16);
    let bounds = ChartBox::default();
    let pts: Vec<Quaternion> = (0..20)
        .map(|_| random_point(&mut rng, &bounds).to_quaternion())
        .collect();
    let ratios = convergence_ratios(h, &pts)?;
    let worst = ratios.iter().map(|r| (r - 4.0).abs()).fold(0.0, f64::max);
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &r| {
            (lo.min(r), hi.max(r))
        });
    Ok(PropCheck::bounded(
        "convergence-order",
        statement("convergence-order"),
        worst,
        0.7,
    )
    .with_detail(format!(
        "h = {h}: ratios in [{lo:.4}, {hi:.4}], required [3.3, 4.7]"
    )))
}
