use super::*;
use crate::expr::{parse, parse_with, Dependence, Symbols, Target};
use crate::operator::parse_operator;

fn op(s: &str) -> Lpdo {
    parse_operator(s).unwrap()
}

fn e(s: &str) -> Expr {
    parse(s).unwrap()
}

fn finite(s: &str) -> RootKind {
    RootKind::Finite(e(s))
}

const A1: &str = "Dx*Dy + x*Dx + 1";
const SPLIT: &str = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/4*(y^2 - x^2) - 1";
const PERTURBED: &str = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/2*(y^2 - x^2) - 1";
const LANDAU: &str = "Dx^3 + x*Dx^2*Dy + 2*Dx^2 + (2*x + 2)*Dx*Dy + Dx + (2 + x)*Dy";

#[test]
fn roots_of_examples() {
    let rs = roots(&op(LANDAU)).unwrap();
    assert!(rs.is_complete());
    assert_eq!(rs.roots.len(), 2);
    assert!(rs.roots.contains(&RootDirection::finite(e("-x"), 1)));
    assert!(rs.roots.contains(&RootDirection::finite(Expr::zero(), 2)));

    let rs = roots(&op(SPLIT)).unwrap();
    assert_eq!(
        rs.roots,
        vec![
            RootDirection::finite(Expr::one(), 1),
            RootDirection::finite(Expr::int(-1), 1)
        ]
    );
    assert_eq!(roots(&Lpdo::zero()), Err(FactorError::ZeroOperator));
}

#[test]
fn a1_both_roots() {
    let a = op(A1);
    let r = extract_left_factor(&a, &finite("0")).unwrap();
    assert_eq!(r.status, Status::Factored);
    assert_eq!(r.factor.to_lpdo(), Lpdo::dx());
    assert_eq!(r.quotient, op("Dy + x"));
    assert_eq!(r.invariants.len(), 1);
    assert_eq!(r.invariants[0].value, Expr::zero());
    assert_eq!(r.invariants[0].verdict, Verdict::ProvenZero);

    let r = extract_left_factor(&a, &RootKind::Infinite).unwrap();
    assert_eq!(r.status, Status::Obstructed);
    let (ahat, bhat) = laplace_invariants(&a).unwrap();
    assert_eq!(ahat, Expr::zero());
    assert_eq!(bhat, Expr::one());
    assert_eq!(r.invariants[0].value, bhat);
}

#[test]
fn split_roots() {
    let a = op(SPLIT);
    let r = extract_left_factor(&a, &finite("1")).unwrap();
    assert_eq!(r.status, Status::Factored);
    assert_eq!(r.factor.to_lpdo(), op("Dx - Dy + 1/2*(y + x)"));
    assert_eq!(r.quotient, op("Dx + Dy + 1/2*(y - x)"));
    assert_eq!(r.recompose(), a);

    let r = extract_left_factor(&a, &finite("-1")).unwrap();
    assert_eq!(r.status, Status::Obstructed);
    assert_eq!(r.invariants[0].value, Expr::int(-2));
    assert_eq!(r.invariants[0].verdict, Verdict::ProvenNonzero);
}

#[test]
fn perturbed_invariant() {
    let r = extract_left_factor(&op(PERTURBED), &finite("1")).unwrap();
    assert_eq!(r.invariants[0].value, e("1/4*(y^2 - x^2)"));
    assert_eq!(r.status, Status::Obstructed);
}

#[test]
fn not_a_root_and_multiple_root_errors() {
    let a = op(SPLIT);
    assert!(matches!(
        extract_left_factor(&a, &finite("2")),
        Err(FactorError::NotARoot(_))
    ));
    let l = op(LANDAU);
    assert!(matches!(
        extract_left_factor(&l, &finite("0")),
        Err(FactorError::MultipleRoot {
            multiplicity: 2,
            ..
        })
    ));
    assert!(matches!(
        riccati_obstruction(&l, &finite("-x")),
        Err(FactorError::SimpleRoot(_))
    ));
    assert_eq!(
        extract_left_factor(&Lpdo::zero(), &finite("0")),
        Err(FactorError::ZeroOperator)
    );
}

#[test]
fn landau_riccati() {
    let l = op(LANDAU);
    let r = riccati_obstruction(&l, &finite("0")).unwrap();
    assert_eq!(r.status, Status::RiccatiRequired);
    let ric = r.riccati.as_ref().unwrap();
    assert_eq!(ric.unknown, "r");
    let syms = Symbols::new().with("r", Dependence::XY);
    let expected = parse_with("1 - 2*r + d/dx(r) + r^2", &syms).unwrap();
    assert_eq!(ric.residual, expected);
    assert_eq!(
        ric.residual.to_string_by_degree_in("r"),
        "1 - 2*r + d/dx(r) + r^2"
    );

    let target = Target::Symbol("r".into());
    assert_eq!(
        ric.residual.substitute(&target, &e("1 + 1/(x + C)")),
        Expr::zero()
    );
    assert_eq!(ric.residual.substitute(&target, &Expr::one()), Expr::zero());

    let v = verify_riccati(&l, &finite("0"), &e("1 + 1/(x + C)")).unwrap();
    assert_eq!(v.status, Status::Factored);
    assert_eq!(v.recompose(), l);
    assert_eq!(
        v.quotient,
        op("Dx + 1 - 1/(x + C)").compose(&op("Dx + x*Dy"))
    );

    let bad = verify_riccati(&l, &finite("0"), &e("2")).unwrap();
    assert_eq!(bad.status, Status::Obstructed);
}

#[test]
fn landau_chain() {
    let l = op(LANDAU);
    let opts = FactorOptions {
        all: true,
        riccati: vec![e("1 + 1/(x + C)")],
        ..Default::default()
    };
    let chains = full_factorization(&l, &opts).unwrap();
    let want: Vec<Lpdo> = ["Dx + 1 + 1/(x + C)", "Dx + 1 - 1/(x + C)", "Dx + x*Dy"]
        .iter()
        .map(|s| op(s))
        .collect();
    assert!(chains.iter().any(|c| {
        c.scalar.is_one_literal()
            && c.factors
                .iter()
                .map(LinearFactor::to_lpdo)
                .collect::<Vec<_>>()
                == want
    }));
    for c in &chains {
        assert_eq!(c.compose(), l);
    }
}

#[test]
fn split_chain() {
    let chains = full_factorization(&op(SPLIT), &FactorOptions::default()).unwrap();
    assert_eq!(chains.len(), 1);
    assert_eq!(
        chains[0].to_string(),
        "[Dx - Dy + 1/2*x + 1/2*y]*[Dx + Dy - 1/2*x + 1/2*y]"
    );
}

#[test]
fn a1_chains() {
    let a = op(A1);
    let all = FactorOptions {
        all: true,
        ..Default::default()
    };
    let chains = full_factorization(&a, &all).unwrap();
    assert_eq!(chains.len(), 1);
    assert_eq!(chains[0].to_string(), "[Dx]*[Dy + x]");
    let chains = full_factorization(&op("Dx*Dy"), &all).unwrap();
    assert_eq!(chains.len(), 2);
    assert_eq!(chains[0].to_string(), "[Dx]*[Dy]");
}

#[test]
fn no_chain_reports_obstructions() {
    match full_factorization(&op(PERTURBED), &FactorOptions::default()) {
        Err(FactorError::NoChain { reports }) => {
            assert_eq!(reports.len(), 2);
            assert!(reports.iter().all(|r| r.status == Status::Obstructed));
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn right_factor_of_first_order() {
    let a = op("Dx + x*Dy + y");
    let r = extract_right_factor(&a, &finite("-x")).unwrap();
    assert_eq!(r.factor.to_lpdo(), a);
    assert_eq!(r.quotient, Lpdo::one());
}

#[test]
fn right_factor_of_split() {
    let a = op(SPLIT);
    let r = extract_right_factor(&a, &finite("-1")).unwrap();
    assert_eq!(r.status, Status::Factored);
    assert_eq!(r.factor.to_lpdo(), op("Dx + Dy + 1/2*(y - x)"));
    assert_eq!(r.quotient, op("Dx - Dy + 1/2*(y + x)"));
    assert_eq!(r.recompose(), a);
}

#[test]
fn transpose_duality_on_split_transpose() {
    // A^t has the bracket of the left factor of A on its right, up to
    // the adjoint sign: the right factor of A^t is -L^t.
    let a = op(SPLIT);
    let at = a.transpose();
    let r = extract_right_factor(&at, &finite("1")).unwrap();
    assert_eq!(r.status, Status::Factored);
    let l = op("Dx - Dy + 1/2*(y + x)");
    assert_eq!(r.factor.to_lpdo(), -l.transpose());
    assert_eq!(r.factor.to_lpdo().transpose(), -l.clone());
    assert_eq!(r.recompose(), at);
}

#[test]
fn gauge_invariance_of_invariant() {
    let a = op(PERTURBED);
    let b = a.gauge_conjugate(&e("x*y^2 - sin(x)").into());
    let ia = extract_left_factor(&a, &finite("1")).unwrap();
    let ib = extract_left_factor(&b, &finite("1")).unwrap();
    assert_eq!(ia.invariants[0].value, ib.invariants[0].value);
}

#[test]
fn report_json() {
    let r = extract_left_factor(&op(SPLIT), &finite("-1")).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["status"], "obstructed");
    assert_eq!(v["side"], "left");
    assert_eq!(v["root"]["kind"], "finite");
    assert_eq!(v["root"]["omega"], "-1");
    assert_eq!(v["invariants"][0]["value"], "-2");
    assert_eq!(v["invariants"][0]["verdict"], "proven-nonzero");
    assert_eq!(v["factor"]["operator"], "Dx + Dy - 1/2*x + 1/2*y");
}

#[test]
fn ode_chain_with_riccati_candidates() {
    let a = op("x*Dx^3 + (x^2 - 1)*Dx^2 - x*Dx + 2/x^2 - 1");
    let rs = roots(&a).unwrap();
    assert_eq!(rs.roots, vec![RootDirection::finite(Expr::zero(), 3)]);
    let ric = riccati_obstruction(&a, &finite("0")).unwrap();
    assert_eq!(ric.status, Status::RiccatiRequired);

    let opts = FactorOptions {
        riccati: vec![e("x - 1/x"), e("(sqrt2 - 1)/x")],
        ..Default::default()
    };
    let chains = full_factorization(&a, &opts).unwrap();
    let c = &chains[0];
    assert_eq!(c.compose(), a);
    assert_eq!(
        c.to_string(),
        "[Dx + x - 1/x]*[Dx - 1/x + sqrt2/x]*[Dx - 2/x - sqrt2/x]*[x]"
    );
}
