//! Invariant fields on rectangular grids, auxiliary operators with scaled
//! coefficients, and the linear-coefficient proximity check.

mod grid;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{Expr, Rational};
use crate::factor::{extract_left_factor, FactorError, RootKind};
use crate::format::Float17;
use crate::operator::{Index, Lpdo};

pub use grid::{sample, FieldSummary, GridField, GridSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("coefficient ({0}, {1}) is absent from the operator")]
    MaskKeyAbsent(u32, u32),
    #[error("operator has no invariant at this root (order {0})")]
    NoInvariant(u32),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// Multiplies the masked coefficients of `a` by `f`: `ã_jk = f a_jk`.
pub fn scale_operator(a: &Lpdo, f: &Expr, mask: &[Index]) -> Result<Lpdo, ApproxError> {
    if let Some(&(j, k)) = mask.iter().find(|(j, k)| a.coeff(*j, *k).is_zero_literal()) {
        return Err(ApproxError::MaskKeyAbsent(j, k));
    }
    Ok(Lpdo::from_coeffs(a.coeffs().map(|(idx, c)| {
        if mask.contains(&idx) {
            (idx, c * f)
        } else {
            (idx, c.clone())
        }
    })))
}

/// Every coefficient below the principal part.
pub fn lower_order_mask(a: &Lpdo) -> Vec<Index> {
    let n = a.order().unwrap_or(0);
    a.coeffs()
        .map(|(idx, _)| idx)
        .filter(|(j, k)| j + k < n)
        .collect()
}

/// The lowest-grade invariant `inv[0]` at `root`, as an expression.
pub fn lowest_invariant(a: &Lpdo, root: &RootKind) -> Result<Expr, ApproxError> {
    let report = extract_left_factor(a, root)?;
    report
        .invariants
        .last()
        .map(|i| i.value.clone())
        .ok_or(ApproxError::NoInvariant(a.order().unwrap_or(0)))
}

/// `inv[0]` of `a` at `root`, sampled on the grid.
pub fn invariant_field(
    a: &Lpdo,
    root: &RootKind,
    spec: &GridSpec,
) -> Result<GridField, ApproxError> {
    Ok(sample(&lowest_invariant(a, root)?, spec))
}

/// One field `a_jk - ã_jk` per coefficient that differs.
pub fn coefficient_deltas(a: &Lpdo, b: &Lpdo, spec: &GridSpec) -> Vec<(Index, GridField)> {
    let mut keys: Vec<Index> = a.coeffs().chain(b.coeffs()).map(|(k, _)| k).collect();
    keys.sort_by_key(|&(j, k)| std::cmp::Reverse((j + k, j)));
    keys.dedup();
    keys.into_iter()
        .filter_map(|(j, k)| {
            let d = a.coeff(j, k) - b.coeff(j, k);
            (!d.is_zero_literal()).then(|| ((j, k), sample(&d, spec)))
        })
        .collect()
}

/// Ranked result of trying one scaling function.
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub f: Expr,
    pub summary: FieldSummary,
}

/// Scales `a` by each candidate `f` on `mask` and ranks the candidates by the
/// sup-norm of the resulting `inv[0]` field (NaN-only fields rank last).
pub fn scan_scalings(
    a: &Lpdo,
    root: &RootKind,
    candidates: &[Expr],
    mask: &[Index],
    spec: &GridSpec,
) -> Result<Vec<ScanEntry>, ApproxError> {
    let mut out = Vec::with_capacity(candidates.len());
    for f in candidates {
        let scaled = scale_operator(a, f, mask)?;
        let field = invariant_field(&scaled, root, spec)?;
        out.push(ScanEntry {
            f: f.clone(),
            summary: field.summary(),
        });
    }
    out.sort_by(|p, q| {
        let key = |s: &FieldSummary| {
            if s.max_abs.is_nan() {
                f64::INFINITY
            } else {
                s.max_abs
            }
        };
        key(&p.summary).total_cmp(&key(&q.summary))
    });
    Ok(out)
}

/// Linear coefficients `a00 = b3 x + b2 y + b1`, `a10 = c3 x + c2 y + c1`,
/// `a01 = d3 x + d2 y + d1` (index 3 multiplies `x`, index 2 `y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCoeffs {
    pub b: [Rational; 3],
    pub c: [Rational; 3],
    pub d: [Rational; 3],
}

fn linear(v: &[Rational; 3]) -> Expr {
    Expr::x() * Expr::rational(v[2].clone())
        + Expr::y() * Expr::rational(v[1].clone())
        + Expr::rational(v[0].clone())
}

impl LinearCoeffs {
    pub fn a00(&self) -> Expr {
        linear(&self.b)
    }

    pub fn a10(&self) -> Expr {
        linear(&self.c)
    }

    pub fn a01(&self) -> Expr {
        linear(&self.d)
    }

    /// `s_i = c_i - d_i`.
    pub fn s(&self) -> [Rational; 3] {
        [0, 1, 2].map(|i| &self.c[i] - &self.d[i])
    }

    /// `R = (s3 - s2)/2 + (s3 x + s2 y + s1)^2 / 4`.
    pub fn r_function(&self) -> Expr {
        let s = self.s();
        let lin = linear(&s);
        Expr::rational((&s[2] - &s[1]) / Rational::from_integer(2.into()))
            + &lin * &lin * Expr::frac(1, 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RCheck {
    /// `sup |a00 - R| < eps` over the non-singular grid points.
    pub holds: bool,
    pub worst: Float17,
    pub at: [Float17; 2],
}

/// Evaluates `a00 - R` on the grid and compares its sup-norm with `eps`.
pub fn r_function_check(lc: &LinearCoeffs, eps: f64, spec: &GridSpec) -> RCheck {
    let field = sample(&(lc.a00() - lc.r_function()), spec);
    let s = field.summary();
    RCheck {
        holds: s.max_abs < eps,
        worst: Float17(s.max_abs),
        at: [Float17(s.argmax.0), Float17(s.argmax.1)],
    }
}

/// Rational from a float given on the command line (exact binary value).
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v).filter(|q| q.to_f64() == Some(v))
}
