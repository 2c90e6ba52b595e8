//! Canonical construction: every public constructor funnels through here.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{rat, Atom, Expr, Func, Monomial, Named, Rational, Term};

/// Sorts, merges like terms and drops zero coefficients.
pub(crate) fn normalize_terms(mut terms: Vec<Term>) -> Expr {
    terms.sort_by(|a, b| a.mono.cmp(&b.mono));
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        match out.last_mut() {
            Some(last) if last.mono == t.mono => last.coeff += t.coeff,
            _ => out.push(t),
        }
        if out.last().is_some_and(|l| l.coeff.is_zero()) {
            out.pop();
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    Expr::from_sorted_terms(out)
}

pub(crate) fn add(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero_literal() {
        return b.clone();
    }
    if b.is_zero_literal() {
        return a.clone();
    }
    let mut terms = Vec::with_capacity(a.len() + b.len());
    terms.extend_from_slice(a.terms());
    terms.extend_from_slice(b.terms());
    normalize_terms(terms)
}

pub(crate) fn sub(a: &Expr, b: &Expr) -> Expr {
    add(a, &b.scale(&rat(-1)))
}

pub(crate) fn sum_all<I: Iterator<Item = Expr>>(iter: I) -> Expr {
    let mut terms = Vec::new();
    for e in iter {
        terms.extend_from_slice(e.terms());
    }
    normalize_terms(terms)
}

pub(crate) fn mul(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero_literal() || b.is_zero_literal() {
        return Expr::zero();
    }
    if let Some(q) = a.as_rational() {
        return b.scale(&q);
    }
    if let Some(q) = b.as_rational() {
        return a.scale(&q);
    }
    let mut terms = Vec::with_capacity(a.len() * b.len());
    for ta in a.terms() {
        for tb in b.terms() {
            let mut factors = ta.mono.0.clone();
            factors.extend_from_slice(&tb.mono.0);
            let prod = monomial_expr(&ta.coeff * &tb.coeff, factors);
            terms.extend_from_slice(prod.terms());
        }
    }
    normalize_terms(terms)
}

pub(crate) fn div(a: &Expr, b: &Expr) -> Expr {
    mul(a, &pow(b, &rat(-1)))
}

/// Builds `coeff * prod(atom^exp)` in canonical form. The result may be a sum
/// when a group atom reaches a positive integer exponent.
pub(crate) fn monomial_expr(mut coeff: Rational, mut factors: Vec<(Atom, Rational)>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Atom, Rational)> = Vec::with_capacity(factors.len());
    for (a, e) in factors {
        match merged.last_mut() {
            Some((la, le)) if *la == a => *le += e,
            _ => merged.push((a, e)),
        }
    }
    merged.retain(|(_, e)| !e.is_zero());

    let mut pending: Vec<Expr> = Vec::new();
    let mut exp_arg: Option<Expr> = None;
    let mut kept: Vec<(Atom, Rational)> = Vec::with_capacity(merged.len());
    for (a, e) in merged {
        match a {
            Atom::Const(Named::Sqrt2) if e.is_integer() => {
                let k = e.to_integer();
                let (half, rem) = k.div_mod_floor(&BigInt::from(2));
                coeff *= pow_rational_int(&rat(2), &half);
                if !rem.is_zero() {
                    kept.push((Atom::Const(Named::Sqrt2), Rational::one()));
                }
            }
            Atom::Func(Func::Exp, arg) => {
                let scaled = arg.scale(&e);
                exp_arg = Some(match exp_arg {
                    Some(acc) => add(&acc, &scaled),
                    None => scaled,
                });
            }
            Atom::Group(base) if e.is_integer() => {
                if e.is_positive() {
                    pending.push(pow(&base, &e));
                } else if base.is_empty() {
                    kept.push((Atom::Group(base), e));
                } else if base.is_single_term() || !base.terms()[0].coeff.is_one() {
                    pending.push(pow(&base, &e));
                } else {
                    kept.push((Atom::Group(base), e));
                }
            }
            other => kept.push((other, e)),
        }
    }
    if let Some(arg) = exp_arg {
        if !arg.is_zero_literal() {
            kept.push((Atom::Func(Func::Exp, arg), Rational::one()));
            kept.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }
    let head = Expr::from_sorted_terms(vec![Term {
        coeff,
        mono: Monomial(kept),
    }]);
    pending.iter().fold(head, |acc, p| mul(&acc, p))
}

fn pow_rational_int(q: &Rational, k: &BigInt) -> Rational {
    let n = k.to_i32().expect("exponent out of range");
    if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    }
}

fn exact_root(n: &BigInt, r: u32) -> Option<BigInt> {
    let root = n.nth_root(r);
    if num_traits::pow(root.clone(), r as usize) == *n {
        Some(root)
    } else {
        None
    }
}

/// `c^e` for a positive rational `c`.
fn positive_rational_pow(c: &Rational, e: &Rational) -> Expr {
    if e.is_integer() {
        return Expr::rational(pow_rational_int(c, &e.to_integer()));
    }
    let p = e.numer();
    let r = e.denom().to_u32().unwrap_or(u32::MAX);
    let base = pow_rational_int(c, p);
    if r < 64 {
        if let (Some(nr), Some(dr)) = (exact_root(base.numer(), r), exact_root(base.denom(), r)) {
            return Expr::rational(Rational::new(nr, dr));
        }
        // (n/d)^(1/r) = (n d^(r-1))^(1/r) / d, then pull out perfect powers
        let d = base.denom().clone();
        let radicand = base.numer() * num_traits::pow(d.clone(), r as usize - 1);
        if let Some((k, m)) = split_power(&radicand, r) {
            let outside = Rational::new(k, d);
            let inside = if r == 2 && m == BigInt::from(2) {
                Expr::sqrt2()
            } else if m.is_one() {
                Expr::one()
            } else {
                Expr::from_sorted_terms(vec![Term {
                    coeff: Rational::one(),
                    mono: Monomial(vec![(
                        Atom::Group(Expr::rational(Rational::from_integer(m))),
                        Rational::new(BigInt::one(), BigInt::from(r)),
                    )]),
                }])
            };
            return inside.scale(&outside);
        }
    }
    Expr::from_sorted_terms(vec![Term {
        coeff: Rational::one(),
        mono: Monomial(vec![(Atom::Group(Expr::rational(c.clone())), e.clone())]),
    }])
}

/// Writes a positive integer `n` as `k^r * m` with `k` maximal, by trial
/// division; `None` when `n` is too large to factor cheaply.
fn split_power(n: &BigInt, r: u32) -> Option<(BigInt, BigInt)> {
    let mut m = n.to_u64().filter(|v| *v > 0 && *v < 1 << 40)?;
    let (mut k, mut rest) = (1u64, 1u64);
    let mut f = 2u64;
    while f * f <= m {
        let mut count = 0;
        while m % f == 0 {
            m /= f;
            count += 1;
        }
        k *= f.pow(count / r);
        rest *= f.pow(count % r);
        f += 1;
    }
    // what is left of m is 1 or a single prime
    Some((BigInt::from(k), BigInt::from(rest * m)))
}

pub(crate) fn pow(base: &Expr, e: &Rational) -> Expr {
    if e.is_zero() {
        return Expr::one();
    }
    if base.is_zero_literal() {
        if e.is_positive() {
            return Expr::zero();
        }
        return Expr::from_sorted_terms(vec![Term {
            coeff: Rational::one(),
            mono: Monomial(vec![(Atom::Group(Expr::zero()), e.clone())]),
        }]);
    }
    if e.is_one() {
        return base.clone();
    }
    if e.is_integer() && e.is_positive() && !base.is_single_term() {
        let mut k = e.to_integer().to_u64().expect("exponent out of range");
        let mut acc = Expr::one();
        let mut sq = base.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = mul(&sq, &sq);
            }
        }
        return acc;
    }
    if base.is_single_term() {
        let t = &base.terms()[0];
        let odd_root = e.denom().is_odd();
        if t.coeff.is_negative() && !e.is_integer() && !odd_root {
            return Expr::from_sorted_terms(vec![Term {
                coeff: Rational::one(),
                mono: Monomial(vec![(Atom::Group(base.clone()), e.clone())]),
            }]);
        }
        let sign_flip = t.coeff.is_negative() && e.numer().is_odd();
        let mut c = positive_rational_pow(&t.coeff.abs(), e);
        if sign_flip {
            c = -c;
        }
        let factors = t.mono.0.iter().map(|(a, ae)| (a.clone(), ae * e)).collect();
        return mul(&c, &monomial_expr(Rational::one(), factors));
    }
    if e.is_integer() {
        // negative integer power of a sum: pull out the leading coefficient
        let lead = base.terms()[0].coeff.clone();
        let normalized = base.scale(&lead.recip());
        let head = Expr::rational(pow_rational_int(&lead, &e.to_integer()));
        let group = Expr::from_sorted_terms(vec![Term {
            coeff: Rational::one(),
            mono: Monomial(vec![(Atom::Group(normalized), e.clone())]),
        }]);
        return mul(&head, &group);
    }
    Expr::from_sorted_terms(vec![Term {
        coeff: Rational::one(),
        mono: Monomial(vec![(Atom::Group(base.clone()), e.clone())]),
    }])
}

pub(crate) fn func(f: Func, arg: &Expr) -> Expr {
    match f {
        Func::Sin => {
            if arg.is_zero_literal() {
                return Expr::zero();
            }
            if arg.leading_negative() {
                return -func(Func::Sin, &-arg);
            }
        }
        Func::Cos => {
            if arg.is_zero_literal() {
                return Expr::one();
            }
            if arg.leading_negative() {
                return func(Func::Cos, &-arg);
            }
        }
        Func::Exp => {
            if arg.is_zero_literal() {
                return Expr::one();
            }
        }
        Func::Ln => {
            if arg.is_one_literal() {
                return Expr::zero();
            }
            if let [t] = arg.terms() {
                if t.coeff.is_one() {
                    if let [(Atom::Func(Func::Exp, inner), e)] = t.mono.0.as_slice() {
                        if e.is_one() {
                            return inner.clone();
                        }
                    }
                }
            }
        }
    }
    monomial_expr(
        Rational::one(),
        vec![(Atom::Func(f, arg.clone()), Rational::one())],
    )
}
