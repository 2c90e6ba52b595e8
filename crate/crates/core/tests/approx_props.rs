mod common;

use lpdo::approx::{invariant_field, lower_order_mask, sample, scale_operator};
use lpdo::{parse, parse_operator, Expr, GaugeFunction, GridSpec, RootKind};
use rand::Rng;

const B: &str = "Dx^2 - Dy^2 + sin(y)*Dx + cos(x)*Dy + 1/2*(sin(y)^2 - cos(x)^2)";
const PERTURBED: &str = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/2*(y^2 - x^2) - 1";

#[test]
fn stored_samples_match_the_source() {
    let mut r = common::rng(11);
    let b = parse_operator(B).unwrap();
    let bt = scale_operator(&b, &parse("sin(1/(x*y))").unwrap(), &lower_order_mask(&b)).unwrap();
    let spec = GridSpec::new(0.5, 3.0, -2.0, 4.0, 57, 83).unwrap();
    let f = invariant_field(&bt, &RootKind::Finite(Expr::one()), &spec).unwrap();
    for _ in 0..20 {
        let (i, j) = (r.gen_range(0..spec.nx), r.gen_range(0..spec.ny));
        let direct = f
            .source
            .eval_xy(spec.x(i), spec.y(j))
            .map_or(f64::NAN, |v| v);
        let stored = f.get(i, j);
        assert!(
            stored == direct || (stored.is_nan() && direct.is_nan()),
            "({i}, {j})"
        );
    }
}

#[test]
fn scaling_is_pointwise_multiplication() {
    let b = parse_operator(B).unwrap();
    let f = parse("sin(1/(x*y))").unwrap();
    let spec = GridSpec::new(0.2, 5.0, 0.2, 5.0, 60, 60).unwrap();
    let bt = scale_operator(&b, &f, &lower_order_mask(&b)).unwrap();
    let ff = sample(&f, &spec);
    for (j, k) in lower_order_mask(&b) {
        let scaled = sample(&bt.coeff(j, k), &spec);
        let plain = sample(&b.coeff(j, k), &spec);
        for n in 0..spec.len() {
            let want = ff.values[n] * plain.values[n];
            assert!(
                (scaled.values[n] - want).abs() <= 1e-12,
                "({j}, {k}) at {n}"
            );
        }
    }
    assert_eq!(
        scale_operator(&b, &Expr::one(), &lower_order_mask(&b)).unwrap(),
        b
    );
}

#[test]
fn gauge_pairs_have_equal_fields() {
    let mut r = common::rng(12);
    let spec = GridSpec::new(-3.0, 3.0, -3.0, 3.0, 40, 40).unwrap();
    for _ in 0..10 {
        let w = common::distinct_ints(&mut r, 2);
        let a = common::with_symbol_roots(&mut r, &w);
        let phi = common::poly(&mut r, 2) + Expr::sin(&Expr::x());
        let g = a.gauge_conjugate(&GaugeFunction::from(phi));
        let root = RootKind::Finite(Expr::int(w[0]));
        let fa = invariant_field(&a, &root, &spec).unwrap();
        let fg = invariant_field(&g, &root, &spec).unwrap();
        for (u, v) in fa.values.iter().zip(&fg.values) {
            assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()), "{u} vs {v}");
        }
    }
}

#[test]
fn refinement_does_not_lose_the_peak() {
    for (src, lo, hi) in [(PERTURBED, -10.0, 10.0), (B, -10.0, 10.0), (B, 1.0, 4.0)] {
        let a = parse_operator(src).unwrap();
        let root = RootKind::Finite(Expr::one());
        let coarse =
            invariant_field(&a, &root, &GridSpec::new(lo, hi, lo, hi, 50, 50).unwrap()).unwrap();
        let fine =
            invariant_field(&a, &root, &GridSpec::new(lo, hi, lo, hi, 100, 100).unwrap()).unwrap();
        // largest jump between neighbouring coarse samples bounds the loss
        let n = coarse.spec.nx;
        let mut lip = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i + 1 < n {
                    lip = lip.max((coarse.get(i + 1, j) - coarse.get(i, j)).abs());
                }
                if j + 1 < n {
                    lip = lip.max((coarse.get(i, j + 1) - coarse.get(i, j)).abs());
                }
            }
        }
        let (mc, mf) = (coarse.summary().max_abs, fine.summary().max_abs);
        assert!(mf >= mc - 1.1 * lip, "{src}: {mf} < {mc} - {lip}");
    }
}
