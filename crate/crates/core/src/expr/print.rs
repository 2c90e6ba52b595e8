use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use super::{Atom, Expr, Rational, Term};

pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    f.write_str(&expr_string(e))
}

pub(crate) fn expr_string(e: &Expr) -> String {
    terms_string(e.terms().iter())
}

fn terms_string<'a>(terms: impl ExactSizeIterator<Item = &'a Term>) -> String {
    if terms.len() == 0 {
        return "0".into();
    }
    let mut s = String::new();
    for (i, t) in terms.enumerate() {
        let neg = t.coeff.is_negative();
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&term_abs_string(t));
    }
    s
}

fn atom_string(a: &Atom) -> String {
    match a {
        Atom::X => "x".into(),
        Atom::Y => "y".into(),
        Atom::Const(c) => c.name().into(),
        Atom::Sym(s) => s.binding_key(),
        Atom::Func(func, arg) => format!("{}({})", func.name(), expr_string(arg)),
        Atom::Group(base) => format!("({})", expr_string(base)),
    }
}

fn factor_string(a: &Atom, e: &Rational) -> String {
    let base = atom_string(a);
    if e.is_one() {
        base
    } else if e.is_integer() {
        format!("{base}^{e}")
    } else {
        format!("{base}^({e})")
    }
}

/// A term without its sign.
fn term_abs_string(t: &Term) -> String {
    let n = t.coeff.numer().abs();
    let d = t.coeff.denom().clone();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (a, e) in &t.mono.0 {
        if e.is_negative() {
            den.push(factor_string(a, &-e));
        } else {
            num.push(factor_string(a, e));
        }
    }
    let mut s = String::new();
    if den.is_empty() {
        if num.is_empty() {
            let _ = write!(s, "{}", Rational::new(n, d));
        } else {
            if !(n.is_one() && d.is_one()) {
                let _ = write!(s, "{}*", Rational::new(n, d));
            }
            s.push_str(&num.join("*"));
        }
        return s;
    }
    if num.is_empty() {
        let _ = write!(s, "{n}");
    } else {
        if !n.is_one() {
            let _ = write!(s, "{n}*");
        }
        s.push_str(&num.join("*"));
    }
    let mut denom = Vec::new();
    if !d.is_one() {
        denom.push(d.to_string());
    }
    denom.extend(den);
    if denom.len() == 1 {
        let _ = write!(s, "/{}", denom[0]);
    } else {
        let _ = write!(s, "/({})", denom.join("*"));
    }
    s
}

impl Expr {
    /// Prints the summands by ascending degree in the parameter `name`, then
    /// by its derivative order: `1 - 2*r + d/dx(r) + r^2`.
    pub fn to_string_by_degree_in(&self, name: &str) -> String {
        let mut terms: Vec<(Rational, u32, &Term)> = self
            .terms()
            .iter()
            .map(|t| {
                let mut deg = Rational::zero();
                let mut order = 0;
                for (a, e) in &t.mono.0 {
                    if let Atom::Sym(sym) = a {
                        if &*sym.name == name {
                            deg += e;
                            order += sym.dx + sym.dy;
                        }
                    }
                }
                (deg, order, t)
            })
            .collect();
        terms.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        terms_string(terms.iter().map(|(_, _, t)| *t))
    }

    /// Text form suitable as a factor inside a product: parenthesized when
    /// the expression has more than one summand or a leading minus sign.
    pub fn to_factor_string(&self) -> String {
        let s = self.to_string();
        if self.len() > 1 || self.leading_negative() {
            format!("({s})")
        } else {
            s
        }
    }
}
