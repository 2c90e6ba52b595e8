//! Recursive-descent parser shared by expressions and operators.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | atom ('^' exponent)?
//! exponent := '-'? integer ('/' integer)? | '(' '-'? integer ('/' integer)? ')'
//! atom     := integer | 'sqrt2' | 'pi' | 'x' | 'y' | 'Dx' | 'Dy' | ident
//!           | ident '(' expr ')' | 'd/dx' '(' expr ')' | 'd/dy' '(' expr ')'
//!           | '(' expr ')'
//! ```
//!
//! `Dx`/`Dy` are only accepted when the tree is lowered to an operator.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Dependence, Expr, Func, Named, Rational, Symbol, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("malformed rational: {0}")]
    MalformedRational(String),
    #[error("operator symbol `{0}` not allowed in a coefficient expression")]
    OperatorInExpression(String),
    #[error("{0}")]
    Operator(String),
}

impl ParseError {
    pub(crate) fn new(offset: usize, kind: ParseErrorKind) -> Self {
        ParseError { offset, kind }
    }
}

/// Declared dependencies of parameters; undeclared names are constants.
#[derive(Debug, Clone, Default)]
pub struct Symbols {
    deps: HashMap<String, Dependence>,
}

impl Symbols {
    pub fn new() -> Self {
        Symbols::default()
    }

    pub fn with(mut self, name: &str, dep: Dependence) -> Self {
        self.deps.insert(name.to_string(), dep);
        self
    }

    pub fn dependence(&self, name: &str) -> Dependence {
        self.deps.get(name).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    DerivX,
    DerivY,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(ParseError::new(
                        i,
                        ParseErrorKind::MalformedRational(
                            "decimal points are not supported; write n/d".into(),
                        ),
                    ));
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                if src[i..].starts_with("d/dx(") {
                    i += 4;
                    out.push((Tok::DerivX, start));
                    continue;
                }
                if src[i..].starts_with("d/dy(") {
                    i += 4;
                    out.push((Tok::DerivY, start));
                    continue;
                }
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(src[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(
                    i,
                    ParseErrorKind::Syntax(format!("unexpected character `{ch}`")),
                ));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

/// Untyped parse tree, lowered to [`Expr`] or to an operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Int(BigInt),
    Ident { name: String, offset: usize },
    Call(Func, Box<Ast>),
    Deriv(Var, Box<Ast>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Rational),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(_, o)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(
            self.offset(),
            ParseErrorKind::Syntax(msg.into()),
        ))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.factor()?;
                    if matches!(&rhs, Ast::Int(n) if n.is_zero()) {
                        return Err(ParseError::new(
                            at,
                            ParseErrorKind::MalformedRational("zero denominator".into()),
                        ));
                    }
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos -= 1;
                self.err("expected integer exponent")
            }
        }
    }

    fn rational_tail(&mut self, num: BigInt) -> Result<Rational, ParseError> {
        if self.peek() == Some(&Tok::Slash) && matches!(self.peek_at(1), Some(Tok::Int(_))) {
            self.pos += 1;
            let at = self.offset();
            let Some(Tok::Int(d)) = self.bump() else {
                unreachable!()
            };
            if d.is_zero() {
                return Err(ParseError::new(
                    at,
                    ParseErrorKind::MalformedRational("zero denominator".into()),
                ));
            }
            return Ok(Rational::new(num, d));
        }
        Ok(Rational::from_integer(num))
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let n = self.signed_int()?;
            let q = self.rational_tail(n)?;
            self.expect(Tok::RParen, "`)` after exponent")?;
            return Ok(q);
        }
        let n = self.signed_int()?;
        self.rational_tail(n)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Int(n)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::DerivX) | Some(Tok::DerivY) => {
                let var = if self.toks[self.pos - 1].0 == Tok::DerivX {
                    Var::X
                } else {
                    Var::Y
                };
                self.expect(Tok::LParen, "`(`")?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Ast::Deriv(var, Box::new(e)))
            }
            Some(Tok::Ident(name)) => {
                if self.peek() == Some(&Tok::LParen) {
                    let Some(f) = Func::from_name(&name) else {
                        return Err(ParseError::new(at, ParseErrorKind::UnknownFunction(name)));
                    };
                    self.pos += 1;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Ast::Call(f, Box::new(e)));
                }
                if Func::from_name(&name).is_some() {
                    return self.err(format!("function `{name}` needs an argument"));
                }
                Ok(Ast::Ident { name, offset: at })
            }
            Some(_) => {
                self.pos -= 1;
                self.err("expected operand")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `src` into an untyped tree.
pub(crate) fn parse_ast(src: &str) -> Result<Ast, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let ast = p.expr()?;
    if p.pos < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(ast)
}

impl Ast {
    pub fn to_expr(&self, symbols: &Symbols) -> Result<Expr, ParseError> {
        Ok(match self {
            Ast::Int(n) => Expr::rational(Rational::from_integer(n.clone())),
            Ast::Ident { name, offset } => match name.as_str() {
                "x" => Expr::x(),
                "y" => Expr::y(),
                "sqrt2" => Expr::named(Named::Sqrt2),
                "pi" => Expr::named(Named::Pi),
                "Dx" | "Dy" => {
                    return Err(ParseError::new(
                        *offset,
                        ParseErrorKind::OperatorInExpression(name.clone()),
                    ))
                }
                _ => Expr::symbol(Symbol::new(name, symbols.dependence(name))),
            },
            Ast::Call(f, a) => Expr::apply(*f, &a.to_expr(symbols)?),
            Ast::Deriv(v, a) => a.to_expr(symbols)?.diff(*v),
            Ast::Neg(a) => -a.to_expr(symbols)?,
            Ast::Add(a, b) => a.to_expr(symbols)? + b.to_expr(symbols)?,
            Ast::Sub(a, b) => a.to_expr(symbols)? - b.to_expr(symbols)?,
            Ast::Mul(a, b) => a.to_expr(symbols)? * b.to_expr(symbols)?,
            Ast::Div(a, b) => a.to_expr(symbols)? * b.reciprocal(symbols)?,
            Ast::Pow(a, e) => a.to_expr(symbols)?.pow(e),
        })
    }

    /// `1/self`, distributed over products and powers so that a printed
    /// denominator such as `(x^2 + 1)^2` reads back as the same group.
    fn reciprocal(&self, symbols: &Symbols) -> Result<Expr, ParseError> {
        Ok(match self {
            Ast::Mul(a, b) => a.reciprocal(symbols)? * b.reciprocal(symbols)?,
            Ast::Pow(a, e) => a.to_expr(symbols)?.pow(&-e),
            _ => self.to_expr(symbols)?.recip(),
        })
    }

    /// True when `Dx` or `Dy` occurs.
    pub fn mentions_operator(&self) -> bool {
        match self {
            Ast::Int(_) => false,
            Ast::Ident { name, .. } => name == "Dx" || name == "Dy",
            Ast::Call(_, a) | Ast::Deriv(_, a) | Ast::Neg(a) | Ast::Pow(a, _) => {
                a.mentions_operator()
            }
            Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => {
                a.mentions_operator() || b.mentions_operator()
            }
        }
    }
}

/// Parses an expression; every parameter is a constant.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    parse_with(src, &Symbols::default())
}

/// Parses an expression with declared parameter dependencies.
pub fn parse_with(src: &str, symbols: &Symbols) -> Result<Expr, ParseError> {
    parse_ast(src)?.to_expr(symbols)
}
