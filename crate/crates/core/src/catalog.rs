//! Named functions and the function-spec micro-grammar.
//!
//! ```text
//! identity | pow:<int> | rho | varrho | sigma | x-over-r-iota
//! stem:<n:re:im,...|exp|log|logtan>
//! L:<stem>            regular CI function from the Rinehart functional
//! chiral:<name>       chiral difference of a Class II function
//! mirror:<name>       p ↦ conj(f(conj p))
//! conj:<name>         p ↦ conj(f(p))
//! product:<a>*<b>     sum:<a>+<b>
//! ```

use serde::Serialize;

use crate::diffops::DiffConfig;
use crate::error::{Error, Result};
use crate::function::{cullen_extend, from_uv, ComplexStem, FunctionKind, QFunction, SampleGrid};
use crate::generators::{chiral_difference, mirror, regular_from_stem};
use crate::quaternion::{unit_imaginary, Quaternion};

/// `ρ = α + ι ln tan(β/2)`.
pub fn rho() -> QFunction {
    from_uv("rho", |s| s.alpha, |s| (0.5 * s.beta).tan().ln())
}

/// `ϱ = arctan(y/z) + ι artanh(x/r)`.
pub fn varrho() -> QFunction {
    QFunction::new("varrho", FunctionKind::Ce, |p| {
        let r = p.imag_norm();
        if p.z == 0.0 || p.x.abs() >= r {
            return Err(Error::domain(format!("varrho is singular at {p}")));
        }
        Ok(Quaternion::real((p.y / p.z).atan()) + unit_imaginary(p)? * (p.x / r).atanh())
    })
}

/// `σ = arctan(z/x) + ι artanh(y/r)`.
pub fn sigma() -> QFunction {
    QFunction::new("sigma", FunctionKind::Ce, |p| {
        let r = p.imag_norm();
        if p.x == 0.0 || p.y.abs() >= r {
            return Err(Error::domain(format!("sigma is singular at {p}")));
        }
        Ok(Quaternion::real((p.z / p.x).atan()) + unit_imaginary(p)? * (p.y / r).atanh())
    })
}

/// `x r⁻¹ ι`, Class I but not Class II.
pub fn x_over_r_iota() -> QFunction {
    QFunction::new("x-over-r-iota", FunctionKind::Ce, |p| {
        let r2 = p.imag_norm().powi(2);
        if r2 == 0.0 {
            return Err(Error::domain("x-over-r-iota needs r > 0"));
        }
        Ok(p.imag() * (p.x / r2))
    })
}

/// `p ↦ pⁿ` through the Cullen extension of `zⁿ`.
pub fn power(n: i32) -> QFunction {
    cullen_extend(&ComplexStem::monomial(n)).with_name(format!("pow:{n}"))
}

/// Builtin names that need no context.
pub fn builtin(name: &str) -> Result<QFunction> {
    Ok(match name {
        "identity" => QFunction::identity(),
        "rho" => rho(),
        "varrho" => varrho(),
        "sigma" => sigma(),
        "x-over-r-iota" => x_over_r_iota(),
        _ => {
            if let Some(n) = name.strip_prefix("pow:") {
                let n = n
                    .parse::<i32>()
                    .map_err(|e| Error::Spec(format!("bad power `{n}`: {e}")))?;
                power(n)
            } else if let Some(s) = name.strip_prefix("stem:") {
                cullen_extend(&ComplexStem::parse(s)?)
            } else {
                return Err(Error::Spec(format!("unknown function `{name}`")));
            }
        }
    })
}

fn parse_stem_arg(s: &str) -> Result<ComplexStem> {
    let s = s.strip_prefix("stem:").unwrap_or(s);
    if let Some(n) = s.strip_prefix("pow:") {
        let n = n
            .parse::<i32>()
            .map_err(|e| Error::Spec(format!("bad power `{n}`: {e}")))?;
        return Ok(ComplexStem::monomial(n));
    }
    ComplexStem::parse(s)
}

/// Resolves a function spec. Generators that check preconditions use
/// `grid` and `cfg`.
pub fn parse_spec(spec: &str, grid: &SampleGrid, cfg: &DiffConfig) -> Result<QFunction> {
    let spec = spec.trim();
    let named = |f: QFunction| f.with_name(spec);
    if let Some(rest) = spec.strip_prefix("L:") {
        return Ok(named(regular_from_stem(&parse_stem_arg(rest)?, grid, cfg)?));
    }
    if let Some(rest) = spec.strip_prefix("chiral:") {
        return Ok(named(chiral_difference(&builtin(rest)?, grid, cfg)?));
    }
    if let Some(rest) = spec.strip_prefix("mirror:") {
        return Ok(named(mirror(&builtin(rest)?)));
    }
    if let Some(rest) = spec.strip_prefix("conj:") {
        return Ok(named(builtin(rest)?.conjugate()));
    }
    if let Some(rest) = spec.strip_prefix("product:") {
        let (a, b) = rest
            .split_once('*')
            .ok_or_else(|| Error::Spec(format!("product spec `{rest}` needs `<a>*<b>`")))?;
        return Ok(named(builtin(a)?.product(&builtin(b)?)));
    }
    if let Some(rest) = spec.strip_prefix("sum:") {
        let (a, b) = rest
            .split_once('+')
            .ok_or_else(|| Error::Spec(format!("sum spec `{rest}` needs `<a>+<b>`")))?;
        return Ok(named(builtin(a)?.sum(&builtin(b)?)));
    }
    builtin(spec)
}

/// Class memberships a catalog function is known to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpectedClasses {
    pub class_i: bool,
    pub class_ii: bool,
    pub class_iii: bool,
    pub regular: bool,
}

impl ExpectedClasses {
    const CULLEN: Self = Self {
        class_i: true,
        class_ii: true,
        class_iii: true,
        regular: false,
    };
    const SLICE_CONSTANT: Self = Self {
        class_i: true,
        class_ii: true,
        class_iii: false,
        regular: false,
    };
    const CLASS_I_ONLY: Self = Self {
        class_i: true,
        class_ii: false,
        class_iii: false,
        regular: false,
    };
}

#[derive(Debug, Clone)]
pub struct WitnessEntry {
    pub name: String,
    pub function: QFunction,
    pub expected: ExpectedClasses,
    pub source: &'static str,
}

/// Regression fixtures with pinned class memberships.
pub fn witnesses() -> Vec<WitnessEntry> {
    let mut out = vec![
        WitnessEntry {
            name: "identity".into(),
            function: QFunction::identity(),
            expected: ExpectedClasses::CULLEN,
            source: "Cullen extension of z",
        },
        WitnessEntry {
            name: "rho".into(),
            function: rho(),
            expected: ExpectedClasses::SLICE_CONSTANT,
            source: "alpha + iota ln tan(beta/2)",
        },
        WitnessEntry {
            name: "varrho".into(),
            function: varrho(),
            expected: ExpectedClasses::SLICE_CONSTANT,
            source: "arctan(y/z) + iota artanh(x/r)",
        },
        WitnessEntry {
            name: "sigma".into(),
            function: sigma(),
            expected: ExpectedClasses::SLICE_CONSTANT,
            source: "arctan(z/x) + iota artanh(y/r)",
        },
        WitnessEntry {
            name: "x-over-r-iota".into(),
            function: x_over_r_iota(),
            expected: ExpectedClasses::CLASS_I_ONLY,
            source: "x r^-1 iota",
        },
    ];
    for n in -2..=4 {
        out.push(WitnessEntry {
            name: format!("pow:{n}"),
            function: power(n),
            expected: ExpectedClasses {
                regular: n == 0,
                ..ExpectedClasses::CULLEN
            },
            source: "Cullen extension of z^n",
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        for name in [
            "identity",
            "rho",
            "varrho",
            "sigma",
            "x-over-r-iota",
            "pow:-3",
            "stem:2:1:0,0:0:1",
        ] {
            builtin(name).unwrap();
        }
        assert!(matches!(builtin("tau"), Err(Error::Spec(_))));
        assert!(matches!(builtin("pow:x"), Err(Error::Spec(_))));
    }

    #[test]
    fn power_agrees_with_quaternion_powers() {
        let p = Quaternion::new(0.3, -0.6, 0.2, 0.9);
        for n in -3..=5 {
            let f = power(n);
            assert!(
                f.eval(p).unwrap().max_abs_diff(p.powi(n).unwrap()) < 1e-12,
                "n = {n}"
            );
        }
    }

    #[test]
    fn witness_formulas() {
        let p = Quaternion::new(0.1, 0.3, 0.4, 1.2);
        let r = p.imag_norm();
        let io = p.imag() / r;
        let v = varrho().eval(p).unwrap();
        assert!(
            v.max_abs_diff(Quaternion::real((0.4f64 / 1.2).atan()) + io * (0.3 / r).atanh())
                < 1e-15
        );
        let s = sigma().eval(p).unwrap();
        assert!(
            s.max_abs_diff(Quaternion::real((1.2f64 / 0.3).atan()) + io * (0.4 / r).atanh())
                < 1e-15
        );
        assert!(varrho().eval(Quaternion::new(0.0, 1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn spec_grammar() {
        let grid = SampleGrid::uniform(Default::default(), 2).unwrap();
        let cfg = DiffConfig::default();
        for spec in [
            "L:3:1:0",
            "L:pow:4",
            "mirror:rho",
            "conj:rho",
            "product:rho*pow:2",
            "sum:rho+identity",
            "chiral:rho",
        ] {
            let f = parse_spec(spec, &grid, &cfg).unwrap();
            assert_eq!(f.name(), spec);
        }
        assert!(parse_spec("product:rho", &grid, &cfg).is_err());
        assert!(parse_spec("mirror:nope", &grid, &cfg).is_err());
        assert!(parse_spec("chiral:x-over-r-iota", &grid, &cfg).is_err());
    }

    #[test]
    fn product_and_sum_evaluate_pointwise() {
        let grid = SampleGrid::uniform(Default::default(), 2).unwrap();
        let cfg = DiffConfig::default();
        let p = Quaternion::new(0.5, 0.1, 0.7, -0.3);
        let f = parse_spec("product:rho*pow:2", &grid, &cfg).unwrap();
        assert!(
            f.eval(p)
                .unwrap()
                .max_abs_diff(rho().eval(p).unwrap() * (p * p))
                < 1e-14
        );
        let g = parse_spec("sum:rho+identity", &grid, &cfg).unwrap();
        assert!(g.eval(p).unwrap().max_abs_diff(rho().eval(p).unwrap() + p) < 1e-14);
    }
}
