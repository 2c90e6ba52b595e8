//! Text rendering of reports and field summaries.

use std::fmt::Write;

use lpdo::approx::FieldSummary;
use lpdo::factor::Side;
use lpdo::format::fmt17;
use lpdo::FactorizationReport;

pub fn report_text(r: &FactorizationReport) -> String {
    let mut s = String::new();
    let side = match r.side {
        Side::Left => "left",
        Side::Right => "right",
    };
    let _ = writeln!(s, "root: {}", r.root);
    let _ = writeln!(s, "status: {}", r.status.as_str());
    match (r.is_factored(), r.side) {
        (true, Side::Left) => {
            let _ = writeln!(s, "factorization: {}*[{}]", r.factor, r.quotient);
        }
        (true, Side::Right) => {
            let _ = writeln!(s, "factorization: [{}]*{}", r.quotient, r.factor);
        }
        (false, _) => {
            let _ = writeln!(s, "{side} factor: {}", r.factor);
        }
    }
    if !r.invariants.is_empty() {
        s.push_str("invariants:\n");
        for inv in &r.invariants {
            let _ = writeln!(
                s,
                "  inv[{}] = {}  ({})",
                inv.grade,
                inv.value,
                inv.verdict.as_str()
            );
        }
    }
    if let Some(ric) = &r.riccati {
        let _ = writeln!(
            s,
            "Riccati residual: {}",
            ric.residual.to_string_by_degree_in(&ric.unknown)
        );
        let _ = writeln!(
            s,
            "unknown: {} (the zero-order coefficient of the factor)",
            ric.unknown
        );
    }
    s
}

pub fn summary_text(label: &str, s: &FieldSummary) -> String {
    format!(
        "{label}: max_abs {} at ({}, {}), min_abs {}, mean_abs {}, nan_count {}\n",
        fmt17(s.max_abs),
        fmt17(s.argmax.0),
        fmt17(s.argmax.1),
        fmt17(s.min_abs),
        fmt17(s.mean_abs),
        s.nan_count
    )
}
