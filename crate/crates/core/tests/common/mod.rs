//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use lpdo::{Expr, Lpdo};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_1dea_2024_0001;

pub fn rng(stream: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

/// Polynomial in x, y of total degree <= `deg` with small integer coefficients.
pub fn poly(r: &mut ChaCha8Rng, deg: u32) -> Expr {
    let mut acc = Expr::zero();
    for i in 0..=deg {
        for j in 0..=(deg - i) {
            if r.gen_bool(0.5) {
                let c = r.gen_range(-3i64..=3);
                acc = acc + Expr::int(c) * Expr::x().powi(i as i64) * Expr::y().powi(j as i64);
            }
        }
    }
    acc
}

/// Random operator of order <= `n` with polynomial coefficients.
pub fn operator(r: &mut ChaCha8Rng, n: u32) -> Lpdo {
    let mut items = Vec::new();
    for g in 0..=n {
        for j in 0..=g {
            if r.gen_bool(0.6) {
                items.push(((j, g - j), poly(r, 2)));
            }
        }
    }
    Lpdo::from_coeffs(items)
}

/// `m` distinct integers from [-4, 4].
pub fn distinct_ints(r: &mut ChaCha8Rng, m: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let w = r.gen_range(-4i64..=4);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Order-n operator whose principal symbol is `prod (s - w t)` over the given
/// constant roots, with random polynomial lower-order coefficients.
pub fn with_symbol_roots(r: &mut ChaCha8Rng, omegas: &[i64]) -> Lpdo {
    let top = omegas.iter().fold(Lpdo::one(), |acc, &w| {
        acc.compose(&Lpdo::linear(Expr::one(), Expr::int(-w), Expr::zero()))
    });
    let n = omegas.len() as u32;
    let mut items: Vec<_> = top.coeffs().map(|(k, c)| (k, c.clone())).collect();
    for g in 0..n {
        for j in 0..=g {
            items.push(((j, g - j), poly(r, 2)));
        }
    }
    Lpdo::from_coeffs(items)
}
