//! First-order factors of operators at roots of the principal symbol.
//!
//! For a root direction `(α, β)` of the symbol, a left factor
//! `L = α Dx + β Dy + p` and quotient `Q` with `A = L ∘ Q` are sought by
//! matching coefficients grade by grade from the top. Every grade below
//! `n - 1` gives one compatibility residual (an invariant); the factorization
//! exists exactly when all of them vanish.

mod chain;
mod extract;
mod roots;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, Verdict};
use crate::operator::Lpdo;

pub use chain::{full_factorization, FactorChain, FactorOptions};
pub use extract::{
    extract_left_factor, extract_right_factor, laplace_invariants, riccati_obstruction,
    verify_riccati,
};
pub use roots::{roots, RootSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("the zero operator cannot be factored")]
    ZeroOperator,
    #[error("operator of order 0 has no first-order factors")]
    OrderZero,
    #[error("{0} is not a root of the principal symbol")]
    NotARoot(String),
    #[error("root {root} has multiplicity {multiplicity}; use the Riccati obstruction")]
    MultipleRoot { root: String, multiplicity: u32 },
    #[error("root {0} is simple; use the left-factor extraction")]
    SimpleRoot(String),
    #[error("operator is not of the form Dx*Dy + a*Dx + b*Dy + c: {0}")]
    WrongNormalForm(String),
    #[error("no factor chain found ({} obstructed root(s))", reports.len())]
    NoChain { reports: Vec<FactorizationReport> },
    #[error("could not determine {unresolved} root(s) of the principal symbol {symbol}; supply roots explicitly")]
    UnresolvedRoots {
        symbol: String,
        found: Vec<RootDirection>,
        unresolved: u32,
    },
}

/// Projective root of the principal symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// `P(ω) = 0`; direction `(1, -ω)`.
    Finite(Expr),
    /// The coefficient of `s^n` vanishes; direction `(0, 1)`.
    Infinite,
}

impl RootKind {
    /// Normalized direction `(α, β)` of the first-order factor.
    pub fn direction(&self) -> (Expr, Expr) {
        match self {
            RootKind::Finite(w) => (Expr::one(), -w),
            RootKind::Infinite => (Expr::zero(), Expr::one()),
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootKind::Finite(w) => write!(f, "finite({w})"),
            RootKind::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDirection {
    pub kind: RootKind,
    pub multiplicity: u32,
}

impl RootDirection {
    pub fn finite(omega: Expr, multiplicity: u32) -> Self {
        RootDirection {
            kind: RootKind::Finite(omega),
            multiplicity,
        }
    }

    pub fn infinite(multiplicity: u32) -> Self {
        RootDirection {
            kind: RootKind::Infinite,
            multiplicity,
        }
    }

    pub fn direction(&self) -> (Expr, Expr) {
        self.kind.direction()
    }
}

impl fmt::Display for RootDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x{}", self.kind, self.multiplicity)
    }
}

/// First-order operator `α Dx + β Dy + p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub alpha: Expr,
    pub beta: Expr,
    pub p: Expr,
}

impl LinearFactor {
    pub fn to_lpdo(&self) -> Lpdo {
        Lpdo::linear(self.alpha.clone(), self.beta.clone(), self.p.clone())
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_lpdo())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Factored,
    Obstructed,
    RiccatiRequired,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Factored => "factored",
            Status::Obstructed => "obstructed",
            Status::RiccatiRequired => "riccati-required",
        }
    }
}

/// Which side of the quotient the first-order factor sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `A = factor ∘ quotient`.
    Left,
    /// `A = quotient ∘ factor`.
    Right,
}

/// Compatibility residual of one grade, evaluated at the root direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub grade: u32,
    pub value: Expr,
    pub verdict: Verdict,
}

/// Riccati data at a multiple root: `p` is left as the unknown `unknown`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Riccati {
    pub unknown: String,
    /// First non-vanishing compatibility condition, scaled so its leading
    /// term in the unknown has coefficient 1.
    pub residual: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub root: RootDirection,
    pub side: Side,
    pub factor: LinearFactor,
    /// Quotient so far; complete when the status is `Factored`.
    pub quotient: Lpdo,
    /// Residuals from the highest grade down. A simple root of an order-`n`
    /// operator yields exactly `n - 1` of them (grades `n-2 .. 0`); runs
    /// with `p` unknown or prescribed also report grade `n - 1`.
    pub invariants: Vec<Invariant>,
    pub riccati: Option<Riccati>,
    pub status: Status,
}

impl FactorizationReport {
    pub fn is_factored(&self) -> bool {
        self.status == Status::Factored
    }

    /// `factor ∘ quotient` (left) or `quotient ∘ factor` (right).
    pub fn recompose(&self) -> Lpdo {
        match self.side {
            Side::Left => self.factor.to_lpdo().compose(&self.quotient),
            Side::Right => self.quotient.compose(&self.factor.to_lpdo()),
        }
    }
}

#[derive(Serialize)]
struct RootJson {
    kind: &'static str,
    omega: Option<String>,
    multiplicity: u32,
}

impl From<&RootDirection> for RootJson {
    fn from(r: &RootDirection) -> Self {
        let (kind, omega) = match &r.kind {
            RootKind::Finite(w) => ("finite", Some(w.to_string())),
            RootKind::Infinite => ("infinite", None),
        };
        RootJson {
            kind,
            omega,
            multiplicity: r.multiplicity,
        }
    }
}

impl Serialize for RootDirection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootJson::from(self).serialize(s)
    }
}

#[derive(Serialize)]
struct FactorJson {
    alpha: String,
    beta: String,
    p: String,
    operator: String,
}

impl Serialize for LinearFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FactorJson {
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            p: self.p.to_string(),
            operator: self.to_lpdo().to_string(),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct InvariantJson {
    grade: u32,
    value: String,
    verdict: Verdict,
}

#[derive(Serialize)]
struct RiccatiJson {
    unknown: String,
    residual: String,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    side: Side,
    root: &'a RootDirection,
    factor: &'a LinearFactor,
    quotient: String,
    invariants: Vec<InvariantJson>,
    riccati: Option<RiccatiJson>,
    status: Status,
}

impl Serialize for FactorizationReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportJson {
            side: self.side,
            root: &self.root,
            factor: &self.factor,
            quotient: self.quotient.to_string(),
            invariants: self
                .invariants
                .iter()
                .map(|i| InvariantJson {
                    grade: i.grade,
                    value: i.value.to_string(),
                    verdict: i.verdict,
                })
                .collect(),
            riccati: self.riccati.as_ref().map(|r| RiccatiJson {
                unknown: r.unknown.clone(),
                residual: r.residual.to_string(),
            }),
            status: self.status,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests;
