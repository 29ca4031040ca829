//! Grid-based class membership.
//!
//! Each class is a residual that must vanish at every grid point:
//!
//! | class     | residual                                          |
//! |-----------|---------------------------------------------------|
//! | CE        | `f(p) p − p f(p)`                                 |
//! | I         | `∂t f + ι ∂r f`                                   |
//! | II        | `∂f/∂_l p̄ + 2v/r`                                 |
//! | III       | Class I residual and `∂α u, ∂β u, ∂α v, ∂β v`     |
//! | regular   | `∂f/∂_l p̄`                                        |
//! | central   | `∂f/∂_l p̄ − ∂f/∂_r p̄`                             |

use serde::{Deserialize, Serialize};

use crate::diffops::{
    cartesian_partials, chart_partials, combine_class1, combine_fueter_left, combine_fueter_right,
    project_angular_partials, DiffConfig,
};
use crate::error::{Error, Result};
use crate::function::{split_value, QFunction, SampleGrid};
use crate::parallel::par_map;
use crate::quaternion::{Quaternion, SphericalPoint};

/// Fraction of grid points that must be below tolerance for a pass.
pub const PASS_FRACTION: f64 = 0.999;
/// No point may exceed this multiple of its tolerance in a pass.
pub const MAX_EXCESS: f64 = 100.0;
/// Relative commutation tolerance for the CE test.
pub const CE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Evaluation failed somewhere on the grid.
    Singular,
    /// The class is only defined for CE functions.
    NotCe,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

/// Residual statistics of one class over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub max: f64,
    pub mean: f64,
    pub verdict: Verdict,
}

/// Residual and its tolerance at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub residual: f64,
    pub threshold: f64,
}

impl ClassStats {
    /// Aggregates per-point samples in order. Any failed evaluation makes
    /// the verdict singular.
    pub fn from_samples(samples: &[Result<Sample>]) -> Self {
        let mut max = 0.0_f64;
        let mut sum = 0.0;
        let mut ok = 0usize;
        let mut below = 0usize;
        let mut worst_ratio = 0.0_f64;
        let mut singular = false;
        for s in samples {
            match s {
                Ok(s) => {
                    max = max.max(s.residual);
                    sum += s.residual;
                    ok += 1;
                    if s.residual <= s.threshold {
                        below += 1;
                    }
                    let ratio = if s.threshold > 0.0 {
                        s.residual / s.threshold
                    } else if s.residual == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    worst_ratio = worst_ratio.max(ratio);
                }
                Err(_) => singular = true,
            }
        }
        let mean = if ok > 0 { sum / ok as f64 } else { 0.0 };
        let verdict = if singular || ok == 0 {
            Verdict::Singular
        } else if (below as f64) >= PASS_FRACTION * ok as f64 && worst_ratio < MAX_EXCESS {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self { max, mean, verdict }
    }

    fn not_ce(self) -> Self {
        Self {
            verdict: Verdict::NotCe,
            ..self
        }
    }
}

/// Evaluates a residual at every grid point and aggregates it.
pub fn grid_stats<F>(grid: &SampleGrid, residual: F) -> ClassStats
where
    F: Fn(&SphericalPoint) -> Result<Sample> + Sync + Send,
{
    let samples = par_map(&grid.points(), residual);
    ClassStats::from_samples(&samples)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub function: String,
    pub grid: SampleGrid,
    pub config: DiffConfig,
    pub points: usize,
    pub ce: ClassStats,
    #[serde(rename = "class_I")]
    pub class_i: ClassStats,
    #[serde(rename = "class_II")]
    pub class_ii: ClassStats,
    #[serde(rename = "class_III")]
    pub class_iii: ClassStats,
    pub regular: ClassStats,
    pub centrality: ClassStats,
    pub inclusion_consistent: bool,
}

impl ClassificationReport {
    /// III ⇒ II ⇒ I must hold among passing verdicts.
    pub fn check_inclusion(&self) -> bool {
        let (i, ii, iii) = (
            self.class_i.verdict.passed(),
            self.class_ii.verdict.passed(),
            self.class_iii.verdict.passed(),
        );
        (!iii || ii) && (!ii || i)
    }
}

struct PointResiduals {
    ce: Sample,
    class_i: Sample,
    class_ii: Sample,
    class_iii: Sample,
    regular: Sample,
    central: Sample,
}

fn point_residuals(f: &QFunction, s: &SphericalPoint, cfg: &DiffConfig) -> Result<PointResiduals> {
    s.check_regular()?;
    let p = s.to_quaternion();
    let value = f.eval(p)?;
    let cart = cartesian_partials(f, p, cfg)?;
    let chart = chart_partials(f, s, cfg)?;
    let left = combine_fueter_left(&cart);
    let right = combine_fueter_right(&cart);
    let c1 = combine_class1(s, &chart);
    let (_, v) = split_value(value, s.iota());

    let scale = chart
        .iter()
        .chain(cart.iter())
        .fold(value.norm(), |m, d| m.max(d.scale));
    let thr = cfg.tol.threshold(scale);
    let sample = |residual: f64| Sample {
        residual,
        threshold: thr,
    };

    let [(ua, va), (ub, vb)] = project_angular_partials(value, s, &chart);
    let angular = ua.abs().max(va.abs()).max(ub.abs()).max(vb.abs());

    Ok(PointResiduals {
        ce: Sample {
            residual: value.commutator(p).norm(),
            threshold: CE_TOLERANCE * (1.0 + p.norm() * value.norm()),
        },
        class_i: sample(c1.norm()),
        class_ii: sample((left.value + Quaternion::real(2.0 * v / s.r)).norm()),
        class_iii: sample(c1.norm().max(angular)),
        regular: sample(left.norm()),
        central: sample((left.value - right.value).norm()),
    })
}

/// Classifies `f` on `grid`.
pub fn classify(
    f: &QFunction,
    grid: &SampleGrid,
    cfg: &DiffConfig,
) -> Result<ClassificationReport> {
    grid.validate()?;
    cfg.validate()?;
    let rows = par_map(&grid.points(), |s| point_residuals(f, s, cfg));
    let column = |pick: fn(&PointResiduals) -> Sample| -> ClassStats {
        let samples: Vec<Result<Sample>> = rows
            .iter()
            .map(|r| r.as_ref().map(pick).map_err(Clone::clone))
            .collect();
        ClassStats::from_samples(&samples)
    };

    let ce = column(|r| r.ce);
    let is_ce = f.kind().is_ce() && ce.verdict != Verdict::Fail;
    let gate = |stats: ClassStats| if is_ce { stats } else { stats.not_ce() };

    let mut report = ClassificationReport {
        function: f.name().to_string(),
        grid: *grid,
        config: *cfg,
        points: grid.len(),
        ce,
        class_i: gate(column(|r| r.class_i)),
        class_ii: gate(column(|r| r.class_ii)),
        class_iii: gate(column(|r| r.class_iii)),
        regular: column(|r| r.regular),
        centrality: gate(column(|r| r.central)),
        inclusion_consistent: true,
    };
    report.inclusion_consistent = report.check_inclusion();
    Ok(report)
}

/// Left/right Fueter agreement over the grid.
pub fn centrality_check(f: &QFunction, grid: &SampleGrid, cfg: &DiffConfig) -> Result<ClassStats> {
    grid.validate()?;
    cfg.validate()?;
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!("{} is not a CE function", f.name())));
    }
    Ok(grid_stats(grid, |s| {
        let d = cartesian_partials(f, s.to_quaternion(), cfg)?;
        let (l, r) = (combine_fueter_left(&d), combine_fueter_right(&d));
        Ok(Sample {
            residual: (l.value - r.value).norm(),
            threshold: cfg.tol.threshold(l.scale),
        })
    }))
}

/// Residual of the right-handed Class II equation `∂f/∂_r p̄ + 2v/r = 0`.
pub fn right_class_ii(f: &QFunction, grid: &SampleGrid, cfg: &DiffConfig) -> Result<ClassStats> {
    grid.validate()?;
    cfg.validate()?;
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!("{} is not a CE function", f.name())));
    }
    Ok(grid_stats(grid, |s| {
        let p = s.to_quaternion();
        let (_, v) = split_value(f.eval(p)?, s.iota());
        let r = combine_fueter_right(&cartesian_partials(f, p, cfg)?);
        Ok(Sample {
            residual: (r.value + Quaternion::real(2.0 * v / s.r)).norm(),
            threshold: cfg.tol.threshold(r.scale),
        })
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobianCheck {
    pub det_numeric: f64,
    pub det_formula: f64,
    /// Local Class II residual at the point.
    pub class_ii_residual: f64,
    /// Set when the point fails the local Class II test, where the closed
    /// form has no guarantee.
    pub advisory: bool,
}

impl JacobianCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.det_numeric - self.det_formula).abs() / (1.0 + self.det_formula.abs())
    }
}

/// Compares the finite-difference Jacobian determinant in `(t, x, y, z)`
/// with `|∂f/∂t|² v²/r²`.
pub fn jacobian_check(f: &QFunction, p: Quaternion, cfg: &DiffConfig) -> Result<JacobianCheck> {
    if !f.kind().is_ce() {
        return Err(Error::Kind(format!("{} is not a CE function", f.name())));
    }
    let s = crate::quaternion::to_spherical(p)?;
    let value = f.eval(p)?;
    let cart = cartesian_partials(f, p, cfg)?;
    let mut m = [[0.0; 4]; 4];
    for (col, d) in cart.iter().enumerate() {
        for (row, c) in d.value.to_array().into_iter().enumerate() {
            m[row][col] = c;
        }
    }
    let det_numeric = det4(m);

    let iota = s.iota();
    let (_, v) = split_value(value, iota);
    let (ut, vt) = split_value(cart[0].value, iota);
    let det_formula = (ut * ut + vt * vt) * v * v / (s.r * s.r);

    let left = combine_fueter_left(&cart);
    let class_ii_residual = (left.value + Quaternion::real(2.0 * v / s.r)).norm();
    Ok(JacobianCheck {
        det_numeric,
        det_formula,
        class_ii_residual,
        advisory: class_ii_residual > cfg.tol.threshold(left.scale),
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det4(mut m: [[f64; 4]; 4]) -> f64 {
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let pivot_row = m[col];
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] / pivot_row[col];
            for (x, p) in row.iter_mut().zip(pivot_row).skip(col) {
                *x -= factor * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::function::FunctionKind;

    fn small_grid() -> SampleGrid {
        SampleGrid::uniform(Default::default(), 4).unwrap()
    }

    #[test]
    fn det4_matches_known_values() {
        let id = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ];
        assert_eq!(det4(id), 1.0);
        let m = [
            [2.0, 1.0, 0.0, 0.0],
            [1.0, 3.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 4.0, 0.0],
        ];
        assert!((det4(m) - (5.0 * -4.0)).abs() < 1e-12);
        let singular = [
            [1.0, 2.0, 3.0, 4.0],
            [2.0, 4.0, 6.0, 8.0],
            [0.0, 1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0],
        ];
        assert!(det4(singular).abs() < 1e-12);
    }

    #[test]
    fn stats_rules() {
        let ok = |r| {
            Ok(Sample {
                residual: r,
                threshold: 1.0,
            })
        };
        assert_eq!(
            ClassStats::from_samples(&[ok(0.5), ok(0.1)]).verdict,
            Verdict::Pass
        );
        assert_eq!(
            ClassStats::from_samples(&[ok(0.5), ok(2.0)]).verdict,
            Verdict::Fail
        );
        // one outlier in 2000 is tolerated, but never above 100x tolerance
        let mut many: Vec<Result<Sample>> = (0..1999).map(|_| ok(0.0)).collect();
        many.push(ok(50.0));
        assert_eq!(ClassStats::from_samples(&many).verdict, Verdict::Pass);
        many.push(ok(150.0));
        assert_eq!(ClassStats::from_samples(&many).verdict, Verdict::Fail);
        let bad = [ok(0.0), Err(Error::domain("x"))];
        assert_eq!(ClassStats::from_samples(&bad).verdict, Verdict::Singular);
    }

    #[test]
    fn witness_verdicts_on_small_grid() {
        let cfg = DiffConfig::default();
        let r = classify(&catalog::power(3), &small_grid(), &cfg).unwrap();
        assert!(
            r.class_i.verdict.passed()
                && r.class_ii.verdict.passed()
                && r.class_iii.verdict.passed()
        );
        assert!(!r.regular.verdict.passed());
        assert!(r.centrality.verdict.passed());

        let r = classify(&catalog::rho(), &small_grid(), &cfg).unwrap();
        assert!(r.class_i.verdict.passed() && r.class_ii.verdict.passed());
        assert_eq!(r.class_iii.verdict, Verdict::Fail);
        assert_eq!(r.centrality.verdict, Verdict::Fail);

        let r = classify(&catalog::x_over_r_iota(), &small_grid(), &cfg).unwrap();
        assert!(r.class_i.verdict.passed());
        assert_eq!(r.class_ii.verdict, Verdict::Fail);
        assert!(r.inclusion_consistent);
    }

    #[test]
    fn non_ce_functions_are_gated() {
        let f = QFunction::new("right-j", FunctionKind::Raw, |p| Ok(p * Quaternion::J));
        let r = classify(&f, &small_grid(), &DiffConfig::default()).unwrap();
        assert_eq!(r.ce.verdict, Verdict::Fail);
        assert_eq!(r.class_i.verdict, Verdict::NotCe);
        assert_eq!(r.class_ii.verdict, Verdict::NotCe);
        assert_eq!(r.centrality.verdict, Verdict::NotCe);
        assert!(r.inclusion_consistent);
    }

    #[test]
    fn singular_function_reports_singular() {
        let f = QFunction::new("bad", FunctionKind::Ce, |p| {
            if p.t > 0.5 {
                Err(Error::domain("cut"))
            } else {
                Ok(p)
            }
        });
        let r = classify(&f, &small_grid(), &DiffConfig::default()).unwrap();
        assert_eq!(r.class_i.verdict, Verdict::Singular);
    }

    #[test]
    fn constant_is_central() {
        let c = QFunction::constant(Quaternion::real(3.0));
        let stats = centrality_check(&c, &small_grid(), &DiffConfig::default()).unwrap();
        assert!(stats.verdict.passed());
        assert_eq!(stats.max, 0.0);
    }

    #[test]
    fn jacobian_examples() {
        let cfg = DiffConfig::default();
        let j = jacobian_check(
            &catalog::power(2),
            Quaternion::new(1.0, 1.0, 0.0, 0.0),
            &cfg,
        )
        .unwrap();
        assert!((j.det_formula - 32.0).abs() < 1e-8);
        assert!((j.det_numeric - 32.0).abs() < 1e-6);
        assert!(!j.advisory);

        let j = jacobian_check(
            &QFunction::identity(),
            Quaternion::new(0.2, -0.3, 0.5, 0.9),
            &cfg,
        )
        .unwrap();
        assert!((j.det_numeric - 1.0).abs() < 1e-9 && (j.det_formula - 1.0).abs() < 1e-9);

        let j = jacobian_check(
            &catalog::power(2),
            Quaternion::new(0.0, 1.0, 0.0, 0.0),
            &cfg,
        )
        .unwrap();
        assert_eq!(j.det_formula, 0.0);
        assert!(j.det_numeric.abs() < 1e-8);

        let j = jacobian_check(
            &catalog::x_over_r_iota(),
            Quaternion::new(0.2, 0.6, 0.3, 0.5),
            &cfg,
        )
        .unwrap();
        assert!(j.advisory);
    }
}
