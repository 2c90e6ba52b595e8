use super::canon::func;
use super::{Atom, Expr, Var};

/// What a substitution replaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Var(Var),
    /// A parameter by name; its derivative atoms receive the matching
    /// derivatives of the replacement.
    Symbol(String),
}

pub(super) fn substitute(e: &Expr, target: &Target, r: &Expr) -> Expr {
    e.terms()
        .iter()
        .map(|t| {
            t.mono
                .0
                .iter()
                .fold(Expr::rational(t.coeff.clone()), |acc, (a, exp)| {
                    acc * subst_atom(a, target, r).pow(exp)
                })
        })
        .sum()
}

fn subst_atom(a: &Atom, target: &Target, r: &Expr) -> Expr {
    match (a, target) {
        (Atom::X, Target::Var(Var::X)) | (Atom::Y, Target::Var(Var::Y)) => r.clone(),
        (Atom::Sym(s), Target::Symbol(name)) if *s.name == **name => {
            r.diff_n(Var::X, s.dx).diff_n(Var::Y, s.dy)
        }
        (Atom::Func(f, arg), _) => func(*f, &substitute(arg, target, r)),
        (Atom::Group(b), _) => substitute(b, target, r),
        _ => Expr::atom(a.clone()),
    }
}
