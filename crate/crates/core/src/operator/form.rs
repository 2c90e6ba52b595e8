use std::fmt;

use crate::expr::Expr;

use super::write_signed_term;

/// Homogeneous binary form `Σ c_j s^j t^(n-j)` with expression coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Expr>,
}

impl BinaryForm {
    /// `coeffs[j]` multiplies `s^j t^(n-j)`, with `n = coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Expr>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs a degree");
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, j: u32) -> &Expr {
        &self.coeffs[j as usize]
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero_literal)
    }

    pub fn eval(&self, s: &Expr, t: &Expr) -> Expr {
        let n = self.degree() as i64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_literal())
            .map(|(j, c)| c * &s.powi(j as i64) * t.powi(n - j as i64))
            .sum()
    }

    /// Coefficients of `P(t) = Sym(t, 1)` in increasing powers of `t`.
    pub fn dehomogenize(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = vec![Expr::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm::new(out)
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        BinaryForm::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, e: &Expr) -> BinaryForm {
        BinaryForm::new(self.coeffs.iter().map(|c| c * e).collect())
    }
}

fn var_power(name: &str, e: usize) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.coeffs.len() - 1;
        let mut s = String::new();
        for j in (0..=n).rev() {
            let c = &self.coeffs[j];
            if c.is_zero_literal() {
                continue;
            }
            let mono: Vec<String> = [var_power("s", j), var_power("t", n - j)]
                .into_iter()
                .flatten()
                .collect();
            let first = s.is_empty();
            write_signed_term(&mut s, first, c, &mono.join("*"));
        }
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}
