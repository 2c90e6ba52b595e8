use std::fmt;

use rayon::prelude::*;

use crate::expr::{is_zero, Expr};
use crate::operator::Lpdo;

use super::extract::{
    extract_left_factor, recomposition_verdict, riccati_obstruction, verify_riccati,
};
use super::roots::{is_root, roots};
use super::{FactorError, FactorizationReport, LinearFactor, RootKind};

#[derive(Clone, Debug, Default)]
pub struct FactorOptions {
    /// Enumerate every chain instead of stopping at the first.
    pub all: bool,
    /// Extra roots tried at every level where they annihilate the symbol.
    pub user_roots: Vec<RootKind>,
    /// Candidates for the unknown coefficient at multiple roots.
    pub riccati: Vec<Expr>,
}

/// `A = factors[0] ∘ factors[1] ∘ ... ∘ scalar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorChain {
    pub factors: Vec<LinearFactor>,
    pub scalar: Expr,
}

impl FactorChain {
    pub fn compose(&self) -> Lpdo {
        self.factors
            .iter()
            .rev()
            .fold(Lpdo::scalar(self.scalar.clone()), |acc, f| {
                f.to_lpdo().compose(&acc)
            })
    }
}

impl fmt::Display for FactorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.factors.iter().map(|l| l.to_string()).collect();
        if !self.scalar.is_one_literal() || parts.is_empty() {
            parts.push(format!("[{}]", self.scalar));
        }
        f.write_str(&parts.join("*"))
    }
}

impl serde::Serialize for FactorChain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct ChainJson<'a> {
            factors: &'a [LinearFactor],
            scalar: String,
            text: String,
        }
        ChainJson {
            factors: &self.factors,
            scalar: self.scalar.to_string(),
            text: self.to_string(),
        }
        .serialize(s)
    }
}

struct Search<'a> {
    opts: &'a FactorOptions,
    chains: Vec<FactorChain>,
    failures: Vec<FactorizationReport>,
    unresolved: Option<FactorError>,
}

fn same_root(a: &RootKind, b: &RootKind) -> bool {
    match (a, b) {
        (RootKind::Infinite, RootKind::Infinite) => true,
        (RootKind::Finite(u), RootKind::Finite(v)) => is_zero(&(u - v)),
        _ => false,
    }
}

/// Reports for one root: the direct extraction at a simple root, or one
/// check per Riccati candidate (falling back to the obstruction) otherwise.
fn root_reports(
    a: &Lpdo,
    kind: &RootKind,
    simple: bool,
    opts: &FactorOptions,
) -> Vec<FactorizationReport> {
    if simple {
        return extract_left_factor(a, kind).into_iter().collect();
    }
    let checked: Vec<FactorizationReport> = opts
        .riccati
        .iter()
        .filter_map(|c| verify_riccati(a, kind, c).ok())
        .collect();
    if checked.iter().any(FactorizationReport::is_factored) {
        return checked.into_iter().filter(|r| r.is_factored()).collect();
    }
    riccati_obstruction(a, kind).into_iter().collect()
}

impl Search<'_> {
    fn level_roots(&mut self, a: &Lpdo) -> Vec<(RootKind, bool)> {
        let mut out: Vec<(RootKind, u32)> = Vec::new();
        match roots(a) {
            Ok(rs) => {
                if !rs.is_complete() && self.unresolved.is_none() {
                    self.unresolved = Some(FactorError::UnresolvedRoots {
                        symbol: a
                            .principal_symbol()
                            .map(|s| s.to_string())
                            .unwrap_or_default(),
                        found: rs.roots.clone(),
                        unresolved: rs.unresolved,
                    });
                }
                out.extend(rs.roots.into_iter().map(|r| (r.kind, r.multiplicity)));
            }
            Err(e) => {
                self.unresolved.get_or_insert(e);
            }
        }
        for u in &self.opts.user_roots {
            if is_root(a, u) && !out.iter().any(|(k, _)| same_root(k, u)) {
                out.push((u.clone(), 0));
            }
        }
        out.into_iter()
            .map(|(k, m)| {
                let simple = if m == 0 {
                    extract_left_factor(a, &k).is_ok()
                } else {
                    m == 1
                };
                (k, simple)
            })
            .collect()
    }

    /// Returns true when the search should stop.
    fn run(&mut self, a: &Lpdo, prefix: &mut Vec<LinearFactor>) -> bool {
        match a.order() {
            None => return false,
            Some(0) => {
                let chain = FactorChain {
                    factors: prefix.clone(),
                    scalar: a.coeff(0, 0),
                };
                if !self.chains.contains(&chain) {
                    self.chains.push(chain);
                }
                return !self.opts.all;
            }
            Some(_) => {}
        }
        let level = self.level_roots(a);
        let opts = self.opts;
        let reports: Vec<Vec<FactorizationReport>> = level
            .par_iter()
            .map(|(k, simple)| root_reports(a, k, *simple, opts))
            .collect();
        for report in reports.into_iter().flatten() {
            if !report.is_factored() || !recomposition_verdict(&report, a).is_zero() {
                self.failures.push(report);
                continue;
            }
            prefix.push(report.factor.clone());
            let stop = self.run(&report.quotient, prefix);
            prefix.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// Factor chains `A = L_1 ∘ L_2 ∘ ... ∘ L_n ∘ c` by depth-first recursion
/// over the roots at each level. Every returned chain recomposes to `A`.
pub fn full_factorization(a: &Lpdo, opts: &FactorOptions) -> Result<Vec<FactorChain>, FactorError> {
    match a.order() {
        None => return Err(FactorError::ZeroOperator),
        Some(0) => return Err(FactorError::OrderZero),
        Some(_) => {}
    }
    let mut search = Search {
        opts,
        chains: Vec::new(),
        failures: Vec::new(),
        unresolved: None,
    };
    search.run(a, &mut Vec::new());
    let chains: Vec<FactorChain> = search
        .chains
        .into_iter()
        .filter(|c| c.compose().equivalent(a).is_zero())
        .collect();
    if !chains.is_empty() {
        return Ok(chains);
    }
    match search.unresolved {
        Some(e) => Err(e),
        None => Err(FactorError::NoChain {
            reports: search.failures,
        }),
    }
}
