//! Zero testing: exact canonical comparison first, then randomized evaluation.

use std::collections::BTreeSet;

use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{rat, Atom, Expr, Func, Named, Point};

const SAMPLE_POINTS: usize = 32;
const MIN_VALID_POINTS: usize = 8;
const REL_TOL: f64 = 1e-9;
const SEED: u64 = 0x1b5e_eda7_0c0f_fee5;

/// Outcome of a zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The canonical form (after the Pythagorean rewrite) is literally zero.
    ProvenZero,
    /// Not provably zero, but vanishes at every sample point.
    NumericallyZero,
    /// Nonzero: either an exact nonzero normal form or a sample point where
    /// the value clearly does not vanish.
    ProvenNonzero,
}

impl Verdict {
    pub fn is_zero(self) -> bool {
        !matches!(self, Verdict::ProvenNonzero)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ProvenZero => "proven-zero",
            Verdict::NumericallyZero => "numerically-zero",
            Verdict::ProvenNonzero => "proven-nonzero",
        }
    }

    /// The weaker of two zero verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (ProvenNonzero, _) | (_, ProvenNonzero) => ProvenNonzero,
            (NumericallyZero, _) | (_, NumericallyZero) => NumericallyZero,
            _ => ProvenZero,
        }
    }
}

pub fn is_zero(e: &Expr) -> bool {
    zero_test(e).is_zero()
}

pub fn zero_test(e: &Expr) -> Verdict {
    if e.is_zero_literal() {
        return Verdict::ProvenZero;
    }
    let reduced = pythagorean(e);
    if reduced.is_zero_literal() {
        return Verdict::ProvenZero;
    }
    if is_free_polynomial(&reduced) {
        return Verdict::ProvenNonzero;
    }
    numeric_test(&reduced)
}

/// Rewrites `sin(u)^k` (k >= 2) as `sin(u)^(k-2) * (1 - cos(u)^2)` everywhere.
pub(crate) fn pythagorean(e: &Expr) -> Expr {
    e.terms()
        .iter()
        .map(|t| {
            t.mono
                .0
                .iter()
                .fold(Expr::rational(t.coeff.clone()), |acc, (a, exp)| {
                    let factor = match a {
                        Atom::Func(Func::Sin, arg) if exp.is_integer() && *exp >= rat(2) => {
                            let arg = pythagorean(arg);
                            let k = exp.to_integer().to_i64().unwrap_or(0);
                            let one_minus_cos2 = Expr::one() - Expr::cos(&arg).powi(2);
                            one_minus_cos2.powi(k / 2) * Expr::sin(&arg).powi(k % 2)
                        }
                        Atom::Func(f, arg) => Expr::apply(*f, &pythagorean(arg)).pow(exp),
                        Atom::Group(b) => pythagorean(b).pow(exp),
                        other => Expr::atom(other.clone()).pow(exp),
                    };
                    acc * factor
                })
        })
        .sum()
}

/// Polynomials (with rational exponents on x, y) in independent
/// indeterminates: a nonzero canonical form is a nonzero function.
fn is_free_polynomial(e: &Expr) -> bool {
    e.terms().iter().all(|t| {
        t.mono.0.iter().all(|(a, exp)| match a {
            Atom::X | Atom::Y => true,
            Atom::Const(Named::Sqrt2) => exp.is_one(),
            Atom::Const(Named::Pi) | Atom::Sym(_) => exp.is_integer(),
            Atom::Func(..) | Atom::Group(_) => false,
        })
    })
}

pub(crate) fn sample_points(e: &Expr) -> Vec<Point> {
    let keys: BTreeSet<String> = e.symbols().iter().map(|s| s.binding_key()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let coord = |rng: &mut ChaCha8Rng| {
        let mag: f64 = rng.gen_range(0.1..=3.0);
        if rng.gen_bool(0.5) {
            -mag
        } else {
            mag
        }
    };
    (0..SAMPLE_POINTS)
        .map(|_| {
            let mut p = Point::new(coord(&mut rng), coord(&mut rng));
            for k in &keys {
                let v = coord(&mut rng);
                p.params.insert(k.clone(), v);
            }
            p
        })
        .collect()
}

fn numeric_test(e: &Expr) -> Verdict {
    let mut valid = 0;
    for p in sample_points(e) {
        let Ok((v, scale)) = e.eval_with_scale(&p) else {
            continue;
        };
        if !v.is_finite() || !scale.is_finite() {
            continue;
        }
        valid += 1;
        if v.abs() >= REL_TOL * (1.0 + scale) {
            return Verdict::ProvenNonzero;
        }
    }
    if valid >= MIN_VALID_POINTS {
        Verdict::NumericallyZero
    } else {
        Verdict::ProvenNonzero
    }
}
