//! Bivariate linear partial differential operators `Σ a_jk Dx^j Dy^k`.
//!
//! Coefficients sit to the left of the derivatives. Composition re-expands
//! with the Leibniz rule so results are again in this normal form.

mod form;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::expr::{zero_test, Expr, ParseError, Target, Var, Verdict};

pub use form::BinaryForm;
pub use parse::{parse_operator, parse_operator_with};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("the zero operator has no order or symbol")]
    ZeroOperator,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Multi-index of a derivative: `(j, k)` stands for `Dx^j Dy^k`.
pub type Index = (u32, u32);

/// A linear partial differential operator in `x` and `y`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Lpdo {
    coeffs: BTreeMap<Index, Expr>,
}

/// Gauge function `φ` of the conjugation `e^(-φ) A e^(φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFunction {
    pub phi: Expr,
}

impl From<Expr> for GaugeFunction {
    fn from(phi: Expr) -> Self {
        GaugeFunction { phi }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn binomial_expr(n: u32, k: u32) -> Expr {
    Expr::rational(BigRational::from_integer(binomial(n, k)))
}

impl Lpdo {
    pub fn zero() -> Self {
        Lpdo::default()
    }

    pub fn one() -> Self {
        Lpdo::scalar(Expr::one())
    }

    /// Multiplication by a function.
    pub fn scalar(e: Expr) -> Self {
        Lpdo::term(0, 0, e)
    }

    pub fn dx() -> Self {
        Lpdo::term(1, 0, Expr::one())
    }

    pub fn dy() -> Self {
        Lpdo::term(0, 1, Expr::one())
    }

    /// `c * Dx^j * Dy^k`.
    pub fn term(j: u32, k: u32, c: Expr) -> Self {
        Lpdo::from_coeffs([((j, k), c)])
    }

    /// Builds an operator from `(index, coefficient)` pairs; repeated
    /// indices are summed and zero coefficients dropped.
    pub fn from_coeffs<I: IntoIterator<Item = (Index, Expr)>>(items: I) -> Self {
        let mut coeffs: BTreeMap<Index, Expr> = BTreeMap::new();
        for (idx, c) in items {
            let slot = coeffs.entry(idx).or_insert_with(Expr::zero);
            *slot = &*slot + &c;
        }
        coeffs.retain(|_, c| !c.is_zero_literal());
        Lpdo { coeffs }
    }

    /// First-order operator `alpha*Dx + beta*Dy + p`.
    pub fn linear(alpha: Expr, beta: Expr, p: Expr) -> Self {
        Lpdo::from_coeffs([((1, 0), alpha), ((0, 1), beta), ((0, 0), p)])
    }

    pub fn coeff(&self, j: u32, k: u32) -> Expr {
        self.coeffs.get(&(j, k)).cloned().unwrap_or_else(Expr::zero)
    }

    /// Nonzero coefficients in index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (Index, &Expr)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `j + k` over nonzero coefficients; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|(j, k)| j + k).max()
    }

    /// True when no coefficient involves `Dy` (an ordinary operator in `x`).
    pub fn is_ordinary(&self) -> bool {
        self.coeffs.keys().all(|(_, k)| *k == 0)
    }

    /// Grade-`m` part as a binary form: coefficient of `s^j t^(m-j)` is `a_{j,m-j}`.
    pub fn grade(&self, m: u32) -> BinaryForm {
        BinaryForm::new((0..=m).map(|j| self.coeff(j, m - j)).collect())
    }

    pub fn principal_symbol(&self) -> Result<BinaryForm, OperatorError> {
        let n = self.order().ok_or(OperatorError::ZeroOperator)?;
        Ok(self.grade(n))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> Lpdo {
        Lpdo::from_coeffs(self.coeffs.iter().map(|(k, v)| (*k, f(v))))
    }

    /// Left multiplication by a function.
    pub fn scale(&self, e: &Expr) -> Lpdo {
        self.map_coeffs(|c| c * e)
    }

    pub fn substitute(&self, target: &Target, r: &Expr) -> Lpdo {
        self.map_coeffs(|c| c.substitute(target, r))
    }

    /// `A u = Σ a_jk ∂x^j ∂y^k u`.
    pub fn apply(&self, u: &Expr) -> Expr {
        self.coeffs
            .iter()
            .map(|(&(j, k), a)| a * &u.diff_n(Var::X, j).diff_n(Var::Y, k))
            .sum()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Lpdo) -> Lpdo {
        let mut items = Vec::new();
        for (&(j, k), a) in &self.coeffs {
            for (&(bj, bk), b) in &other.coeffs {
                for gj in 0..=j {
                    let bx = b.diff_n(Var::X, gj);
                    for gk in 0..=k {
                        let d = bx.diff_n(Var::Y, gk);
                        if d.is_zero_literal() {
                            continue;
                        }
                        let c = binomial_expr(j, gj) * binomial_expr(k, gk);
                        items.push(((j - gj + bj, k - gk + bk), a * &d * c));
                    }
                }
            }
        }
        Lpdo::from_coeffs(items)
    }

    /// Formal adjoint: `A^t u = Σ (-1)^(j+k) ∂x^j ∂y^k (a_jk u)`.
    pub fn transpose(&self) -> Lpdo {
        let mut items = Vec::new();
        for (&(j, k), a) in &self.coeffs {
            for bj in 0..=j {
                let ax = a.diff_n(Var::X, bj);
                for bk in 0..=k {
                    let d = ax.diff_n(Var::Y, bk);
                    if d.is_zero_literal() {
                        continue;
                    }
                    let c = binomial_expr(j, bj) * binomial_expr(k, bk);
                    let c = if (j + k) % 2 == 1 { -c } else { c };
                    items.push(((j - bj, k - bk), d * c));
                }
            }
        }
        Lpdo::from_coeffs(items)
    }

    /// `e^(-φ) ∘ A ∘ e^(φ)`, i.e. `Dx ↦ Dx + φ_x`, `Dy ↦ Dy + φ_y`.
    pub fn gauge_conjugate(&self, g: &GaugeFunction) -> Lpdo {
        if g.phi.is_zero_literal() {
            return self.clone();
        }
        let sx = Lpdo::dx() + Lpdo::scalar(g.phi.diff(Var::X));
        let sy = Lpdo::dy() + Lpdo::scalar(g.phi.diff(Var::Y));
        let mut px = vec![Lpdo::one()];
        let mut py = vec![Lpdo::one()];
        let mut items = Vec::new();
        for (&(j, k), a) in &self.coeffs {
            while px.len() <= j as usize {
                let next = px.last().unwrap().compose(&sx);
                px.push(next);
            }
            while py.len() <= k as usize {
                let next = py.last().unwrap().compose(&sy);
                py.push(next);
            }
            let shifted = px[j as usize].compose(&py[k as usize]).scale(a);
            items.extend(shifted.coeffs);
        }
        Lpdo::from_coeffs(items)
    }

    /// Weakest zero verdict over the coefficient differences.
    pub fn equivalent(&self, other: &Lpdo) -> Verdict {
        let diff = self - other;
        diff.coeffs
            .values()
            .fold(Verdict::ProvenZero, |acc, c| acc.and(zero_test(c)))
    }
}

impl Add for &Lpdo {
    type Output = Lpdo;
    fn add(self, rhs: &Lpdo) -> Lpdo {
        Lpdo::from_coeffs(
            self.coeffs
                .iter()
                .chain(rhs.coeffs.iter())
                .map(|(k, v)| (*k, v.clone())),
        )
    }
}

impl Add for Lpdo {
    type Output = Lpdo;
    fn add(self, rhs: Lpdo) -> Lpdo {
        &self + &rhs
    }
}

impl Sub for &Lpdo {
    type Output = Lpdo;
    fn sub(self, rhs: &Lpdo) -> Lpdo {
        self + &-rhs
    }
}

impl Sub for Lpdo {
    type Output = Lpdo;
    fn sub(self, rhs: Lpdo) -> Lpdo {
        &self - &rhs
    }
}

impl Neg for &Lpdo {
    type Output = Lpdo;
    fn neg(self) -> Lpdo {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for Lpdo {
    type Output = Lpdo;
    fn neg(self) -> Lpdo {
        -&self
    }
}

/// Writes `c * mono` with sign handling; `mono` empty means a plain scalar,
/// which is written unparenthesized (it is always the last summand).
pub(crate) fn write_signed_term(out: &mut String, first: bool, c: &Expr, mono: &str) {
    let (neg, body) = if mono.is_empty() {
        let text = c.to_string();
        if let Some(rest) = text.strip_prefix('-') {
            (true, rest.to_string())
        } else {
            (false, text)
        }
    } else if c.is_one_literal() {
        (false, mono.to_string())
    } else if c.is_single_term() && c.leading_negative() {
        let m = -c;
        if m.is_one_literal() {
            (true, mono.to_string())
        } else {
            (true, format!("{}*{mono}", m.to_factor_string()))
        }
    } else {
        (false, format!("{}*{mono}", c.to_factor_string()))
    };
    match (first, neg) {
        (true, true) => out.push('-'),
        (true, false) => {}
        (false, true) => out.push_str(" - "),
        (false, false) => out.push_str(" + "),
    }
    out.push_str(&body);
}

fn power(name: &str, e: u32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

impl fmt::Display for Lpdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<Index> = self.coeffs.keys().copied().collect();
        keys.sort_by_key(|&(j, k)| std::cmp::Reverse((j + k, j)));
        let mut s = String::new();
        for (i, key) in keys.iter().enumerate() {
            let mono: Vec<String> = [power("Dx", key.0), power("Dy", key.1)]
                .into_iter()
                .flatten()
                .collect();
            write_signed_term(&mut s, i == 0, &self.coeffs[key], &mono.join("*"));
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Lpdo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lpdo({self})")
    }
}
