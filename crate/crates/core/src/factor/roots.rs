//! Roots of the principal symbol `Sym(s, t)` via `P(t) = Sym(t, 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::expr::{is_zero, zero_test, Expr};
use crate::operator::Lpdo;

use super::{FactorError, RootDirection, RootKind};

/// Roots found for a principal symbol. `unresolved` counts roots (with
/// multiplicity) that could not be expressed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<RootDirection>,
    pub unresolved: u32,
}

impl RootSet {
    pub fn is_complete(&self) -> bool {
        self.unresolved == 0
    }
}

/// All projective roots of the principal symbol: finite roots first (in
/// discovery order), then the root at infinity.
pub fn roots(a: &Lpdo) -> Result<RootSet, FactorError> {
    let sym = a
        .principal_symbol()
        .map_err(|_| FactorError::ZeroOperator)?;
    let n = sym.degree();
    if n == 0 {
        return Err(FactorError::OrderZero);
    }
    let mut p: Vec<Expr> = sym.dehomogenize().to_vec();
    trim(&mut p);
    let infinite = n - (p.len() as u32 - 1);
    let (finite, unresolved) = finite_roots(p);
    let mut roots: Vec<RootDirection> = finite
        .into_iter()
        .map(|(w, m)| RootDirection::finite(w, m))
        .collect();
    if infinite > 0 {
        roots.push(RootDirection::infinite(infinite));
    }
    Ok(RootSet { roots, unresolved })
}

/// True when `kind` is a root of the principal symbol of `a`.
pub(crate) fn is_root(a: &Lpdo, kind: &RootKind) -> bool {
    let Ok(sym) = a.principal_symbol() else {
        return false;
    };
    let (alpha, beta) = kind.direction();
    zero_test(&sym.eval(&beta, &-&alpha)).is_zero()
}

/// Drops vanishing leading coefficients (highest powers).
fn trim(p: &mut Vec<Expr>) {
    while p.len() > 1 && is_zero(p.last().unwrap()) {
        p.pop();
    }
}

fn eval_poly(p: &[Expr], w: &Expr) -> Expr {
    p.iter().rev().fold(Expr::zero(), |acc, c| &(&acc * w) + c)
}

fn derivative(p: &[Expr]) -> Vec<Expr> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Expr::int(k as i64))
        .collect()
}

/// `p / (t - w)` by synthetic division, remainder dropped.
fn deflate(p: &[Expr], w: &Expr) -> Vec<Expr> {
    let d = p.len() - 1;
    let mut q = vec![Expr::zero(); d];
    q[d - 1] = p[d].clone();
    for k in (1..d).rev() {
        q[k - 1] = &p[k] + &(w * &q[k]);
    }
    q
}

/// Multiplicity from the vanishing of `P, P', P'', ...` at `w`.
fn multiplicity(p: &[Expr], w: &Expr) -> u32 {
    let mut m = 0;
    let mut d = p.to_vec();
    while d.len() > 1 && zero_test(&eval_poly(&d, w)).is_zero() {
        m += 1;
        d = derivative(&d);
    }
    m
}

fn is_numeric_constant(e: &Expr) -> bool {
    e.is_constant() && e.symbols().is_empty()
}

fn numeric(e: &Expr) -> Option<f64> {
    e.eval_xy(0.0, 0.0).ok()
}

fn finite_roots(mut p: Vec<Expr>) -> (Vec<(Expr, u32)>, u32) {
    let mut found: Vec<(Expr, u32)> = Vec::new();
    let record = |found: &mut Vec<(Expr, u32)>, p: &mut Vec<Expr>, w: Expr, m: u32| {
        for _ in 0..m {
            *p = deflate(p, &w);
        }
        trim(p);
        found.push((w, m));
    };
    loop {
        let d = p.len() - 1;
        if d == 0 {
            return (found, 0);
        }
        let zeros = p.iter().take_while(|c| is_zero(c)).count();
        if zeros > 0 {
            p.drain(..zeros);
            found.push((Expr::zero(), zeros as u32));
            continue;
        }
        if d == 1 {
            let w = -(&p[0] / &p[1]);
            record(&mut found, &mut p, w, 1);
            continue;
        }
        if let Some(w) = candidates(&p)
            .into_iter()
            .find(|w| zero_test(&eval_poly(&p, w)).is_zero())
        {
            let m = multiplicity(&p, &w).max(1);
            record(&mut found, &mut p, w, m);
            continue;
        }
        let constant = p.iter().all(is_numeric_constant);
        let solved = match d {
            2 => quadratic(&p, constant),
            3 if constant => cubic(&p),
            4 if constant => quartic(&p),
            _ => None,
        };
        let Some(ws) = solved else {
            return (found, d as u32);
        };
        for w in ws {
            if p.len() < 2 {
                break;
            }
            let m = multiplicity(&p, &w).max(1);
            record(&mut found, &mut p, w, m);
        }
        // anything left that the formulas did not cover is unresolved
        let left = p.len() as u32 - 1;
        if left > 0 && d <= 2 {
            return (found, left);
        }
    }
}

fn push_unique(out: &mut Vec<Expr>, e: Expr) {
    if !e.is_zero_literal() && !out.contains(&e) {
        out.push(e);
    }
}

/// Trial roots: `±1`, `±` each summand (and its bare monomial) of the ratios
/// `c_j / c_d` and `c_0 / c_1`, and rational-root-theorem candidates when
/// all coefficients are rational.
fn candidates(p: &[Expr]) -> Vec<Expr> {
    let d = p.len() - 1;
    let mut out = Vec::new();
    push_unique(&mut out, Expr::one());
    push_unique(&mut out, Expr::int(-1));
    let mut ratios: Vec<Expr> = (0..d).map(|j| &p[j] / &p[d]).collect();
    ratios.push(&p[0] / &p[1]);
    for r in &ratios {
        for s in r.summands() {
            if let Some(m) = s.monomial_part() {
                push_unique(&mut out, -&m);
                push_unique(&mut out, m);
            }
            push_unique(&mut out, -&s);
            push_unique(&mut out, s);
        }
    }
    if let Some(qs) = p.iter().map(Expr::as_rational).collect::<Option<Vec<_>>>() {
        for w in rational_root_candidates(&qs) {
            push_unique(&mut out, Expr::rational(w));
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let Some(n) = n.abs().to_u64() else {
        return Vec::new();
    };
    if n == 0 || n > 1_000_000_000_000 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i * i != n {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    out
}

fn rational_root_candidates(qs: &[BigRational]) -> Vec<BigRational> {
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * &lcm).to_integer()).collect();
    let (Some(c0), Some(cd)) = (ints.first(), ints.last()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for num in divisors(c0) {
        for den in divisors(cd) {
            let w = BigRational::new(num.clone(), den);
            out.push(w.clone());
            out.push(-w);
        }
    }
    out
}

/// Roots of `c0 + c1 t + c2 t^2`; `None` for a negative constant discriminant.
fn quadratic(p: &[Expr], constant: bool) -> Option<Vec<Expr>> {
    let (c0, c1, c2) = (&p[0], &p[1], &p[2]);
    let disc = c1 * c1 - Expr::int(4) * c0 * c2;
    let two_a = c2 * Expr::int(2);
    if is_zero(&disc) {
        return Some(vec![-(c1 / &two_a)]);
    }
    if constant && numeric(&disc)? < 0.0 {
        return None;
    }
    let root = disc.pow(&BigRational::new(1.into(), 2.into()));
    Some(vec![(&root - c1) / &two_a, -(&root + c1) / &two_a])
}

fn third() -> BigRational {
    BigRational::new(1.into(), 3.into())
}

/// One real root of a constant cubic when its discriminant allows radicals
/// over the reals (Cardano).
fn cubic(p: &[Expr]) -> Option<Vec<Expr>> {
    let a = &p[3];
    let (b, c, d) = (&p[2] / a, &p[1] / a, &p[0] / a);
    // t = u - b/3: u^3 + pp u + qq
    let pp = &c - &(&b * &b / Expr::int(3));
    let qq = Expr::frac(2, 27) * &b * &b * &b - &b * &c / Expr::int(3) + &d;
    let disc = &qq * &qq / Expr::int(4) + &pp * &pp * &pp / Expr::int(27);
    let shift = -(&b / Expr::int(3));
    if is_zero(&disc) {
        if is_zero(&pp) {
            return Some(vec![shift]);
        }
        return Some(vec![
            &shift + &(Expr::int(3) * &qq / &pp),
            &shift - &(Expr::int(3) * &qq / (Expr::int(2) * &pp)),
        ]);
    }
    if numeric(&disc)? < 0.0 {
        return None;
    }
    let sq = disc.pow(&BigRational::new(1.into(), 2.into()));
    let half_q = -(&qq / Expr::int(2));
    let u = (&half_q + &sq).pow(&third());
    let v = (&half_q - &sq).pow(&third());
    Some(vec![u + v + shift])
}

/// Roots of a constant quartic: biquadratic, or Ferrari with a rational
/// root of the resolvent cubic.
fn quartic(p: &[Expr]) -> Option<Vec<Expr>> {
    let a = &p[4];
    let (b, c, d, e) = (&p[3] / a, &p[2] / a, &p[1] / a, &p[0] / a);
    // t = y - b/4: y^4 + pp y^2 + qq y + rr
    let b2 = &b * &b;
    let pp = &c - &(Expr::frac(3, 8) * &b2);
    let qq = &d - &(&b * &c / Expr::int(2)) + Expr::frac(1, 8) * &b2 * &b;
    let rr = &e - &(&b * &d / Expr::int(4)) + Expr::frac(1, 16) * &b2 * &c
        - Expr::frac(3, 256) * &b2 * &b2;
    let shift = -(&b / Expr::int(4));
    let half = BigRational::new(1.into(), 2.into());
    let mut ys = Vec::new();
    if is_zero(&qq) {
        for z in quadratic(&[rr, pp, Expr::one()], true)? {
            if numeric(&z)? < 0.0 {
                continue;
            }
            let s = z.pow(&half);
            ys.push(-&s);
            ys.push(s);
        }
    } else {
        // 8m^3 + 8pp m^2 + (2pp^2 - 8rr) m - qq^2 = 0 with 2m > 0
        let resolvent = [
            -(&qq * &qq),
            Expr::int(2) * &pp * &pp - Expr::int(8) * &rr,
            Expr::int(8) * &pp,
            Expr::int(8),
        ];
        let qs: Vec<BigRational> = resolvent
            .iter()
            .map(Expr::as_rational)
            .collect::<Option<_>>()?;
        let m = rational_root_candidates(&qs).into_iter().find(|m| {
            m.is_positive() && is_zero(&eval_poly(&resolvent, &Expr::rational(m.clone())))
        })?;
        let m = Expr::rational(m);
        let s = (Expr::int(2) * &m).pow(&half);
        let k = &qq / (Expr::int(2) * &s);
        let base = &pp / Expr::int(2) + &m;
        for (lin, cst) in [(s.clone(), &base - &k), (-&s, &base + &k)] {
            if let Some(roots) = quadratic(&[cst, lin, Expr::one()], true) {
                ys.extend(roots);
            }
        }
    }
    if ys.is_empty() {
        return None;
    }
    Some(ys.into_iter().map(|y| y + &shift).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::operator::parse_operator;

    fn poly(cs: &[&str]) -> Vec<Expr> {
        cs.iter().map(|c| parse(c).unwrap()).collect()
    }

    #[test]
    fn rational_quadratic_and_cubic() {
        let (r, u) = finite_roots(poly(&["-1", "0", "1"]));
        assert_eq!(u, 0);
        assert_eq!(r, vec![(Expr::one(), 1), (Expr::int(-1), 1)]);
        // (t - 2)^2 (t + 3)
        let (r, u) = finite_roots(poly(&["12", "-8", "-1", "1"]));
        assert_eq!(u, 0);
        assert!(r.contains(&(Expr::int(2), 2)));
        assert!(r.contains(&(Expr::int(-3), 1)));
    }

    #[test]
    fn irrational_quadratic() {
        let (r, u) = finite_roots(poly(&["-2", "0", "1"]));
        assert_eq!(u, 0);
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|(w, _)| *w == Expr::sqrt2()));
        let (_, u) = finite_roots(poly(&["1", "0", "1"]));
        assert_eq!(u, 2);
    }

    #[test]
    fn cardano_and_ferrari() {
        // t^3 - 2: single real root 2^(1/3)
        let p = poly(&["-2", "0", "0", "1"]);
        let (r, u) = finite_roots(p.clone());
        assert_eq!(r.len(), 1);
        // the other two roots are complex
        assert_eq!(u, 2);
        let v = r[0].0.eval_xy(0.0, 0.0).unwrap();
        assert!((v - 2f64.cbrt()).abs() < 1e-12);
        // t^4 - 5t^2 + 6 = (t^2 - 2)(t^2 - 3)
        let (r, u) = finite_roots(poly(&["6", "0", "-5", "0", "1"]));
        assert_eq!(u, 0);
        let mut vals: Vec<f64> = r
            .iter()
            .map(|(w, _)| w.eval_xy(0.0, 0.0).unwrap())
            .collect();
        vals.sort_by(f64::total_cmp);
        let want = [-(3f64.sqrt()), -(2f64.sqrt()), 2f64.sqrt(), 3f64.sqrt()];
        for (a, b) in vals.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        // (t^2 + t - 1)(t^2 - t - 3): Ferrari with a rational resolvent root
        let (r, u) = finite_roots(poly(&["3", "-2", "-5", "0", "1"]));
        assert_eq!(u, 0);
        assert_eq!(r.len(), 4);
        for (w, _) in &r {
            let t = w.eval_xy(0.0, 0.0).unwrap();
            assert!((t.powi(4) - 5.0 * t * t - 2.0 * t + 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn symbolic_coefficients() {
        // t^2 - x^2 via candidates
        let (r, u) = finite_roots(poly(&["-x^2", "0", "1"]));
        assert_eq!(u, 0);
        assert!(r.contains(&(Expr::x(), 1)));
        assert!(r.contains(&(-Expr::x(), 1)));
        // t^3 + (y - x) t^2 - x y t = t (t - x)(t + y)
        let (r, u) = finite_roots(poly(&["0", "-x*y", "y - x", "1"]));
        assert_eq!(u, 0);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn infinite_root_from_degree_drop() {
        let a = parse_operator("Dx*Dy + x*Dx + 1").unwrap();
        let rs = roots(&a).unwrap();
        assert_eq!(
            rs.roots,
            vec![
                RootDirection::finite(Expr::zero(), 1),
                RootDirection::infinite(1)
            ]
        );
        let b = parse_operator("Dy^3 + x*Dx").unwrap();
        assert_eq!(roots(&b).unwrap().roots, vec![RootDirection::infinite(3)]);
    }
}
