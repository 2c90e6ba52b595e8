use num_traits::Signed;

use crate::expr::{parse_ast, Ast, ParseError, ParseErrorKind, Symbols};

use super::{Lpdo, OperatorError};

/// Parses an operator such as `Dx*Dy + x*Dx + 1`; parameters are constants.
pub fn parse_operator(src: &str) -> Result<Lpdo, OperatorError> {
    parse_operator_with(src, &Symbols::default())
}

/// Parses an operator with declared parameter dependencies.
///
/// `*` composes, so `Dx*x` is `x*Dx + 1`. `a/b` composes `a` with
/// multiplication by `1/b`, which must be free of `Dx`, `Dy`.
pub fn parse_operator_with(src: &str, symbols: &Symbols) -> Result<Lpdo, OperatorError> {
    Ok(lower(&parse_ast(src)?, symbols)?)
}

fn first_operator_offset(ast: &Ast) -> usize {
    match ast {
        Ast::Int(_) => 0,
        Ast::Ident { name, offset } => {
            if name == "Dx" || name == "Dy" {
                *offset
            } else {
                0
            }
        }
        Ast::Call(_, a) | Ast::Deriv(_, a) | Ast::Neg(a) | Ast::Pow(a, _) => {
            first_operator_offset(a)
        }
        Ast::Add(a, b) | Ast::Sub(a, b) | Ast::Mul(a, b) | Ast::Div(a, b) => {
            if a.mentions_operator() {
                first_operator_offset(a)
            } else {
                first_operator_offset(b)
            }
        }
    }
}

fn misuse(ast: &Ast, msg: &str) -> ParseError {
    ParseError::new(
        first_operator_offset(ast),
        ParseErrorKind::Operator(msg.to_string()),
    )
}

fn lower(ast: &Ast, symbols: &Symbols) -> Result<Lpdo, ParseError> {
    if !ast.mentions_operator() {
        return Ok(Lpdo::scalar(ast.to_expr(symbols)?));
    }
    Ok(match ast {
        Ast::Ident { name, .. } if name == "Dx" => Lpdo::dx(),
        Ast::Ident { name, .. } if name == "Dy" => Lpdo::dy(),
        Ast::Neg(a) => -lower(a, symbols)?,
        Ast::Add(a, b) => lower(a, symbols)? + lower(b, symbols)?,
        Ast::Sub(a, b) => lower(a, symbols)? - lower(b, symbols)?,
        Ast::Mul(a, b) => lower(a, symbols)?.compose(&lower(b, symbols)?),
        Ast::Div(a, b) => {
            if b.mentions_operator() {
                return Err(misuse(b, "cannot divide by a differential operator"));
            }
            let inv = Lpdo::scalar(b.to_expr(symbols)?.recip());
            lower(a, symbols)?.compose(&inv)
        }
        Ast::Pow(a, e) => {
            if !e.is_integer() || e.is_negative() {
                return Err(misuse(a, "operator powers must be non-negative integers"));
            }
            let base = lower(a, symbols)?;
            let k: u32 = e
                .to_integer()
                .try_into()
                .map_err(|_| misuse(a, "operator power too large"))?;
            (0..k).fold(Lpdo::one(), |acc, _| acc.compose(&base))
        }
        Ast::Call(..) | Ast::Deriv(..) => {
            return Err(misuse(
                ast,
                "differential operator inside a function argument",
            ))
        }
        Ast::Int(_) | Ast::Ident { .. } => unreachable!("operator-free leaves handled above"),
    })
}
