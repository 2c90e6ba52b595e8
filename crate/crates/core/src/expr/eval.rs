use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use super::{Atom, Expr, Func, Monomial, Rational, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("fractional power of negative value {0}")]
    PowDomain(f64),
    #[error("unbound parameter `{0}`")]
    Unbound(String),
}

/// Evaluation point: values of `x`, `y` and of every parameter that occurs.
#[derive(Debug, Clone, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    pub params: HashMap<String, f64>,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point {
            x,
            y,
            params: HashMap::new(),
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }
}

impl Expr {
    pub fn eval(&self, p: &Point) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for t in self.terms() {
            acc += eval_term(t, p)?;
        }
        Ok(acc)
    }

    /// Evaluates at `(x, y)` with no parameters bound.
    pub fn eval_xy(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        self.eval(&Point::new(x, y))
    }

    /// Value of the expression and the largest absolute value among its
    /// top-level summands.
    pub(crate) fn eval_with_scale(&self, p: &Point) -> Result<(f64, f64), EvalError> {
        let mut acc = 0.0;
        let mut scale: f64 = 0.0;
        for t in self.terms() {
            let v = eval_term(t, p)?;
            scale = scale.max(v.abs());
            acc += v;
        }
        Ok((acc, scale))
    }
}

fn eval_term(t: &Term, p: &Point) -> Result<f64, EvalError> {
    let c = t.coeff.to_f64().unwrap_or(f64::NAN);
    Ok(c * eval_monomial(&t.mono, p)?)
}

fn eval_monomial(m: &Monomial, p: &Point) -> Result<f64, EvalError> {
    let mut acc = 1.0;
    for (a, e) in &m.0 {
        let base = eval_atom(a, p)?;
        acc *= real_pow(base, e)?;
    }
    Ok(acc)
}

fn eval_atom(a: &Atom, p: &Point) -> Result<f64, EvalError> {
    match a {
        Atom::X => Ok(p.x),
        Atom::Y => Ok(p.y),
        Atom::Const(c) => Ok(c.value()),
        Atom::Sym(s) => {
            let key = s.binding_key();
            p.params.get(&key).copied().ok_or(EvalError::Unbound(key))
        }
        Atom::Func(f, arg) => {
            let v = arg.eval(p)?;
            match f {
                Func::Sin => Ok(v.sin()),
                Func::Cos => Ok(v.cos()),
                Func::Exp => Ok(v.exp()),
                Func::Ln => {
                    if v <= 0.0 {
                        Err(EvalError::LogDomain(v))
                    } else {
                        Ok(v.ln())
                    }
                }
            }
        }
        Atom::Group(base) => base.eval(p),
    }
}

fn real_pow(base: f64, e: &Rational) -> Result<f64, EvalError> {
    if e.is_integer() {
        let k = e.to_integer().to_i32().unwrap_or(i32::MAX);
        if k < 0 && base == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        return Ok(base.powi(k));
    }
    if base == 0.0 {
        return if e.is_negative() {
            Err(EvalError::DivisionByZero)
        } else {
            Ok(0.0)
        };
    }
    let ef = e.to_f64().unwrap_or(f64::NAN);
    if base < 0.0 {
        if e.denom().is_odd() {
            let mag = (-base).powf(ef);
            return Ok(if e.numer().is_odd() { -mag } else { mag });
        }
        return Err(EvalError::PowDomain(base));
    }
    Ok(base.powf(ef))
}

/// An expression lowered to plain floats for repeated evaluation at many
/// points. Parameters must be bound at compile time.
#[derive(Debug, Clone)]
pub struct Compiled {
    terms: Vec<(f64, Vec<(Node, Power)>)>,
}

#[derive(Debug, Clone)]
enum Node {
    X,
    Y,
    Value(f64),
    Func(Func, Compiled),
    Group(Compiled),
}

#[derive(Debug, Clone, Copy)]
enum Power {
    Int(i32),
    /// `p/q` with `q` odd: real for negative bases.
    OddRoot {
        e: f64,
        odd_numer: bool,
    },
    Real(f64),
}

impl Power {
    fn new(e: &Rational) -> Power {
        if e.is_integer() {
            Power::Int(e.to_integer().to_i32().unwrap_or(i32::MAX))
        } else if e.denom().is_odd() {
            Power::OddRoot {
                e: e.to_f64().unwrap_or(f64::NAN),
                odd_numer: e.numer().is_odd(),
            }
        } else {
            Power::Real(e.to_f64().unwrap_or(f64::NAN))
        }
    }

    fn apply(self, base: f64) -> Result<f64, EvalError> {
        match self {
            Power::Int(1) => Ok(base),
            Power::Int(k) => {
                if k < 0 && base == 0.0 {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(base.powi(k))
            }
            Power::OddRoot { e, odd_numer } => {
                if base == 0.0 {
                    return if e < 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        Ok(0.0)
                    };
                }
                if base < 0.0 {
                    let mag = (-base).powf(e);
                    return Ok(if odd_numer { -mag } else { mag });
                }
                Ok(base.powf(e))
            }
            Power::Real(e) => {
                if base == 0.0 {
                    return if e < 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        Ok(0.0)
                    };
                }
                if base < 0.0 {
                    return Err(EvalError::PowDomain(base));
                }
                Ok(base.powf(e))
            }
        }
    }
}

impl Compiled {
    pub fn new(e: &Expr, params: &HashMap<String, f64>) -> Result<Compiled, EvalError> {
        let mut terms = Vec::with_capacity(e.len());
        for t in e.terms() {
            let mut factors = Vec::with_capacity(t.mono.0.len());
            for (a, exp) in &t.mono.0 {
                let node = match a {
                    Atom::X => Node::X,
                    Atom::Y => Node::Y,
                    Atom::Const(c) => Node::Value(c.value()),
                    Atom::Sym(s) => {
                        let key = s.binding_key();
                        Node::Value(*params.get(&key).ok_or(EvalError::Unbound(key))?)
                    }
                    Atom::Func(f, arg) => Node::Func(*f, Compiled::new(arg, params)?),
                    Atom::Group(b) => Node::Group(Compiled::new(b, params)?),
                };
                factors.push((node, Power::new(exp)));
            }
            terms.push((t.coeff.to_f64().unwrap_or(f64::NAN), factors));
        }
        Ok(Compiled { terms })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, EvalError> {
        let mut acc = 0.0;
        for (c, factors) in &self.terms {
            // same rounding as `Expr::eval`: monomial first, then coefficient
            let mut v = 1.0;
            for (node, pow) in factors {
                let base = match node {
                    Node::X => x,
                    Node::Y => y,
                    Node::Value(v) => *v,
                    Node::Func(f, arg) => {
                        let a = arg.eval(x, y)?;
                        match f {
                            Func::Sin => a.sin(),
                            Func::Cos => a.cos(),
                            Func::Exp => a.exp(),
                            Func::Ln if a <= 0.0 => return Err(EvalError::LogDomain(a)),
                            Func::Ln => a.ln(),
                        }
                    }
                    Node::Group(b) => b.eval(x, y)?,
                };
                v *= pow.apply(base)?;
            }
            acc += c * v;
        }
        Ok(acc)
    }
}
