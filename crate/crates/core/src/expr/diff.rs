use num_traits::One;

use super::canon::{func, monomial_expr};
use super::{rat, Atom, Expr, Func, Rational, Var};

pub(super) fn diff(e: &Expr, v: Var) -> Expr {
    let mut parts = Vec::new();
    for t in e.terms() {
        let factors = &t.mono.0;
        for (i, (atom, exp)) in factors.iter().enumerate() {
            let d = diff_atom(atom, v);
            if d.is_zero_literal() {
                continue;
            }
            let mut rest = factors.clone();
            rest[i].1 = exp - Rational::one();
            let head = monomial_expr(&t.coeff * exp, rest);
            parts.push(head * d);
        }
    }
    parts.into_iter().sum()
}

fn diff_atom(a: &Atom, v: Var) -> Expr {
    match a {
        Atom::X => {
            if v == Var::X {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Y => {
            if v == Var::Y {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Atom::Const(_) => Expr::zero(),
        Atom::Sym(s) => {
            if !s.dep.depends_on(v) {
                return Expr::zero();
            }
            let mut d = s.clone();
            match v {
                Var::X => d.dx += 1,
                Var::Y => d.dy += 1,
            }
            Expr::symbol(d)
        }
        Atom::Func(f, arg) => {
            let inner = arg.diff(v);
            if inner.is_zero_literal() {
                return Expr::zero();
            }
            let outer = match f {
                Func::Sin => func(Func::Cos, arg),
                Func::Cos => -func(Func::Sin, arg),
                Func::Exp => func(Func::Exp, arg),
                Func::Ln => arg.pow(&rat(-1)),
            };
            outer * inner
        }
        Atom::Group(base) => base.diff(v),
    }
}
