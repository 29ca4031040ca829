//! Numerical quaternionic analysis around modified Fueter operators.
//!
//! The crate evaluates quaternion-valued functions on grids in the chart
//! `p = t + ι(α, β) r`, classifies them by finite-difference residuals, and
//! builds new solutions:
//!
//! - [`quaternion`]: Hamilton arithmetic and the spherical chart.
//! - [`function`]: [`QFunction`], complex stems and the Cullen extension.
//! - [`diffops`]: left/right Fueter operators, the Class I operator, the
//!   chart form of the Fueter operator and the imaginary derivative.
//! - [`classify`]: Class I / II / III / regular verdicts, centrality and the
//!   Jacobian determinant check.
//! - [`generators`]: the Rinehart functional, chiral difference and mirror.
//! - [`laurent`]: slice-wise Laurent coefficients by contour quadrature.
//! - [`verify`]: the property suite behind `fueterlab verify-props`.
//!
//! See `examples/` for one runnable program per capability.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod diffops;
pub mod error;
pub mod function;
pub mod generators;
pub mod laurent;
pub mod parallel;
pub mod quaternion;
pub mod verify;

pub use classify::{classify, ClassificationReport, Verdict};
pub use diffops::{DiffConfig, Scheme, Tolerance};
pub use error::{Error, Result};
pub use function::{cullen_extend, from_uv, ComplexStem, FunctionKind, QFunction, SampleGrid};
pub use quaternion::{Quaternion, SphericalPoint};
