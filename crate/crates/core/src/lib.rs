//! Bivariate linear partial differential operators with symbolic coefficients.
//!
//! The crate is organized bottom-up:
//!
//! - [`expr`]: canonical symbolic expressions in `x`, `y` (parsing, printing,
//!   differentiation, evaluation, zero testing);
//! - [`operator`]: the noncommutative algebra of operators
//!   `sum a_jk Dx^j Dy^k` (composition, transpose, gauge conjugation,
//!   principal symbol);
//! - [`factor`]: first-order left/right factors at roots of the principal
//!   symbol, generalized invariants, Riccati obstructions for multiple roots
//!   and full factor chains;
//! - [`approx`]: invariant fields sampled on grids, auxiliary operators with
//!   damped coefficients, and the linear-coefficient proximity check.

pub mod approx;
pub mod expr;
pub mod factor;
pub mod format;
pub mod operator;

pub use approx::{GridField, GridSpec, LinearCoeffs};
pub use expr::{is_zero, parse, zero_test, Dependence, Expr, Func, Named, Point, Var, Verdict};
pub use factor::{
    extract_left_factor, extract_right_factor, full_factorization, laplace_invariants, roots,
    FactorChain, FactorError, FactorOptions, FactorizationReport, LinearFactor, RootDirection,
    RootKind, Status,
};
pub use operator::{parse_operator, BinaryForm, GaugeFunction, Lpdo, OperatorError};
