//! Symbolic coefficient expressions in the variables `x` and `y`.
//!
//! An [`Expr`] is always held in canonical form: a sum of terms, each term a
//! rational coefficient times a monomial, each monomial a sorted product of
//! atoms raised to non-zero rational exponents. Atoms are the variables,
//! named constants (`sqrt2`, `pi`), parameters (possibly depending on `x`
//! and/or `y`, with their partial derivatives), unary functions of a
//! canonical argument, and parenthesized groups. A group is kept only when it
//! cannot be expanded: a sum under a negative or fractional exponent, or a
//! constant under a fractional exponent.
//!
//! Canonical construction flattens sums and products, sorts by a fixed total
//! order, merges like terms, drops zero summands and unit factors, expands
//! positive integer powers of sums and keeps quotients by sums as groups with
//! exponent `-1` (no common denominators are formed).

mod canon;
mod diff;
mod eval;
mod parse;
mod print;
mod subst;
mod zero;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use eval::{Compiled, EvalError, Point};
pub use parse::{parse, parse_with, Ast, ParseError, ParseErrorKind, Symbols};
pub use subst::Target;
pub use zero::{is_zero, zero_test, Verdict};

pub(crate) use parse::parse_ast;

/// Exact rational number used for coefficients and exponents.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Differentiation variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

/// Which variables a named parameter depends on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Dependence {
    /// Constant under both partial derivatives.
    #[default]
    Constant,
    /// A function of `x` only; `d/dy` annihilates it.
    X,
    /// A function of `y` only; `d/dx` annihilates it.
    Y,
    /// A function of both variables.
    XY,
}

impl Dependence {
    pub fn depends_on(self, v: Var) -> bool {
        matches!(
            (self, v),
            (Dependence::XY, _) | (Dependence::X, Var::X) | (Dependence::Y, Var::Y)
        )
    }
}

/// Named irrational constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Named {
    Sqrt2,
    Pi,
}

impl Named {
    pub fn value(self) -> f64 {
        match self {
            Named::Sqrt2 => std::f64::consts::SQRT_2,
            Named::Pi => std::f64::consts::PI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Named::Sqrt2 => "sqrt2",
            Named::Pi => "pi",
        }
    }
}

/// Elementary unary functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Ln,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Ln => "ln",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            _ => None,
        }
    }
}

/// A named parameter, or one of its partial derivatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub name: Arc<str>,
    pub dep: Dependence,
    pub dx: u32,
    pub dy: u32,
}

impl Symbol {
    pub fn new(name: &str, dep: Dependence) -> Self {
        Symbol {
            name: Arc::from(name),
            dep,
            dx: 0,
            dy: 0,
        }
    }

    /// Key used for binding the value of this symbol (or derivative) at a point.
    pub fn binding_key(&self) -> String {
        let mut s = self.name.to_string();
        for _ in 0..self.dx {
            s = format!("d/dx({s})");
        }
        for _ in 0..self.dy {
            s = format!("d/dy({s})");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Atom {
    X,
    Y,
    Const(Named),
    Sym(Symbol),
    Func(Func, Expr),
    Group(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Monomial(pub(crate) Vec<(Atom, Rational)>);

impl Monomial {
    fn degree(&self) -> Rational {
        self.0
            .iter()
            .filter(|(a, _)| matches!(a, Atom::X | Atom::Y))
            .map(|(_, e)| e.clone())
            .fold(Rational::zero(), |acc, e| acc + e)
    }

    pub(crate) fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.0.is_empty().cmp(&other.0.is_empty()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub(crate) coeff: Rational,
    pub(crate) mono: Monomial,
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mono
            .cmp(&other.mono)
            .then_with(|| self.coeff.cmp(&other.coeff))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Immutable canonical symbolic expression. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr(Arc<Vec<Term>>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub(crate) fn from_sorted_terms(terms: Vec<Term>) -> Self {
        Expr(Arc::new(terms))
    }

    pub(crate) fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn zero() -> Self {
        Expr::from_sorted_terms(Vec::new())
    }

    pub fn one() -> Self {
        Expr::rational(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::rational(rat(n))
    }

    /// The rational `n/d`. Panics if `d == 0`.
    pub fn frac(n: i64, d: i64) -> Self {
        Expr::rational(ratio(n, d))
    }

    pub fn rational(q: Rational) -> Self {
        if q.is_zero() {
            Expr::zero()
        } else {
            Expr::from_sorted_terms(vec![Term {
                coeff: q,
                mono: Monomial::default(),
            }])
        }
    }

    pub(crate) fn atom(a: Atom) -> Self {
        canon::monomial_expr(Rational::one(), vec![(a, Rational::one())])
    }

    pub fn x() -> Self {
        Expr::atom(Atom::X)
    }

    pub fn y() -> Self {
        Expr::atom(Atom::Y)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Expr::x(),
            Var::Y => Expr::y(),
        }
    }

    pub fn named(c: Named) -> Self {
        Expr::atom(Atom::Const(c))
    }

    pub fn sqrt2() -> Self {
        Expr::named(Named::Sqrt2)
    }

    pub fn pi() -> Self {
        Expr::named(Named::Pi)
    }

    /// A parameter that is constant under both derivatives.
    pub fn param(name: &str) -> Self {
        Expr::symbol(Symbol::new(name, Dependence::Constant))
    }

    /// A parameter with an explicit dependence.
    pub fn function(name: &str, dep: Dependence) -> Self {
        Expr::symbol(Symbol::new(name, dep))
    }

    pub fn symbol(s: Symbol) -> Self {
        Expr::atom(Atom::Sym(s))
    }

    pub fn apply(f: Func, arg: &Expr) -> Self {
        canon::func(f, arg)
    }

    pub fn sin(arg: &Expr) -> Self {
        Expr::apply(Func::Sin, arg)
    }

    pub fn cos(arg: &Expr) -> Self {
        Expr::apply(Func::Cos, arg)
    }

    pub fn exp(arg: &Expr) -> Self {
        Expr::apply(Func::Exp, arg)
    }

    pub fn ln(arg: &Expr) -> Self {
        Expr::apply(Func::Ln, arg)
    }

    pub fn pow(&self, e: &Rational) -> Self {
        canon::pow(self, e)
    }

    pub fn powi(&self, e: i64) -> Self {
        canon::pow(self, &rat(e))
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Expr::zero();
        }
        let terms = self
            .terms()
            .iter()
            .map(|t| Term {
                coeff: &t.coeff * q,
                mono: t.mono.clone(),
            })
            .collect();
        Expr::from_sorted_terms(terms)
    }

    pub fn is_zero_literal(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one_literal(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// The rational value when the expression is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms() {
            [] => Some(Rational::zero()),
            [t] if t.mono.is_one() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    /// Number of summands in canonical form.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn is_single_term(&self) -> bool {
        self.0.len() == 1
    }

    /// True when no variable or dependent parameter occurs.
    pub fn is_constant(&self) -> bool {
        !self.depends_on(Var::X) && !self.depends_on(Var::Y)
    }

    /// True when the expression is a rational number.
    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.terms()
            .iter()
            .any(|t| t.mono.0.iter().any(|(a, _)| atom_depends_on(a, v)))
    }

    /// Names of all parameters occurring anywhere in the expression.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        collect_symbols(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Coefficient sign of the leading term (`true` when negative).
    pub(crate) fn leading_negative(&self) -> bool {
        self.terms().first().is_some_and(|t| t.coeff.is_negative())
    }

    pub fn diff(&self, v: Var) -> Self {
        diff::diff(self, v)
    }

    pub fn diff_n(&self, v: Var, n: u32) -> Self {
        let mut e = self.clone();
        for _ in 0..n {
            if e.is_zero_literal() {
                break;
            }
            e = e.diff(v);
        }
        e
    }

    pub fn substitute(&self, target: &Target, replacement: &Expr) -> Self {
        subst::substitute(self, target, replacement)
    }

    /// The summands of the canonical form, each as its own expression.
    pub fn summands(&self) -> Vec<Expr> {
        self.terms()
            .iter()
            .map(|t| Expr::from_sorted_terms(vec![t.clone()]))
            .collect()
    }

    /// For a single term `c*m`, the monomial `m` with unit coefficient.
    pub(crate) fn monomial_part(&self) -> Option<Expr> {
        match self.terms() {
            [t] => Some(Expr::from_sorted_terms(vec![Term {
                coeff: Rational::one(),
                mono: t.mono.clone(),
            }])),
            _ => None,
        }
    }

    /// Total degree of a term in the parameter `name` and its derivatives.
    fn symbol_degree(t: &Term, name: &str) -> Option<Rational> {
        let mut deg = Rational::zero();
        for (a, e) in &t.mono.0 {
            match a {
                Atom::Sym(s) if &*s.name == name => deg += e,
                Atom::Func(_, arg) | Atom::Group(arg)
                    if arg.symbols().iter().any(|s| &*s.name == name) =>
                {
                    return None
                }
                _ => {}
            }
        }
        Some(deg)
    }

    /// Treating the parameter `name` (with its derivatives) as a polynomial
    /// unknown, returns the cofactor of the first highest-degree term. `None`
    /// when `name` occurs inside a function or group, or the expression is zero.
    pub(crate) fn symbol_leading_cofactor(&self, name: &str) -> Option<Expr> {
        let mut best: Option<(Rational, &Term)> = None;
        for t in self.terms() {
            let d = Expr::symbol_degree(t, name)?;
            if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                best = Some((d, t));
            }
        }
        let (_, t) = best?;
        let factors = t
            .mono
            .0
            .iter()
            .filter(|(a, _)| !matches!(a, Atom::Sym(s) if &*s.name == name))
            .cloned()
            .collect();
        Some(canon::monomial_expr(t.coeff.clone(), factors))
    }
}

fn atom_depends_on(a: &Atom, v: Var) -> bool {
    match a {
        Atom::X => v == Var::X,
        Atom::Y => v == Var::Y,
        Atom::Const(_) => false,
        Atom::Sym(s) => s.dep.depends_on(v),
        Atom::Func(_, e) | Atom::Group(e) => e.depends_on(v),
    }
}

fn collect_symbols(e: &Expr, out: &mut Vec<Symbol>) {
    for t in e.terms() {
        for (a, _) in &t.mono.0 {
            match a {
                Atom::Sym(s) => out.push(s.clone()),
                Atom::Func(_, inner) | Atom::Group(inner) => collect_symbols(inner, out),
                _ => {}
            }
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Self {
        Expr::rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:path) => {
        impl std::ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(&self, &rhs)
            }
        }
        impl std::ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $f(&self, rhs)
            }
        }
        impl std::ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, canon::add);
forward_binop!(Sub, sub, canon::sub);
forward_binop!(Mul, mul, canon::mul);
forward_binop!(Div, div, canon::div);

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&rat(-1))
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Self {
        canon::sum_all(iter)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self)
    }
}

#[cfg(test)]
mod tests;
