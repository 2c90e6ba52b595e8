//! `lpdo`: command-line front end for operator parsing, factorization,
//! invariants, transposition, gauge conjugation and invariant fields.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Read};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lpdo::approx::{
    coefficient_deltas, lower_order_mask, lowest_invariant, r_function_check, sample,
    scale_operator, scan_scalings, FieldSummary, GridField, RCheck,
};
use lpdo::expr::Rational;
use lpdo::factor::{riccati_obstruction, verify_riccati};
use lpdo::format::{fmt17, Float17};
use lpdo::operator::Index;
use lpdo::{
    extract_left_factor, extract_right_factor, full_factorization, parse, parse_operator, roots,
    Expr, FactorError, FactorOptions, FactorizationReport, GaugeFunction, GridSpec, LinearCoeffs,
    Lpdo, RootKind,
};
use serde::Serialize;
use serde_json::{json, Value};

use report::{report_text, summary_text};

#[derive(Parser)]
#[command(
    name = "lpdo",
    version,
    about = "Bivariate linear partial differential operators"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the canonical form, order and principal symbol.
    Parse {
        /// Operator text, or `-` for stdin.
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[command(flatten)]
        out: Output,
    },
    /// Search for complete chains of first-order left factors.
    Factor {
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[command(flatten)]
        roots: RootArgs,
        /// Enumerate every chain instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Report the generalized invariants at every root of the symbol.
    Invariants {
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[command(flatten)]
        roots: RootArgs,
        /// Extract right factors instead of left factors.
        #[arg(long)]
        right: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Formal adjoint of an operator.
    Transpose {
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[command(flatten)]
        out: Output,
    },
    /// Gauge conjugation e^(-phi) A e^(phi).
    Gauge {
        #[arg(allow_hyphen_values = true)]
        operator: String,
        #[arg(allow_hyphen_values = true)]
        phi: String,
        #[command(flatten)]
        out: Output,
    },
    /// Composition A1 ∘ A2 ∘ ... of two or more operators.
    Compose {
        #[arg(required = true, num_args = 2.., allow_hyphen_values = true)]
        operators: Vec<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Invariant field of an operator or of auxiliary operators with scaled
    /// coefficients; with `--lin-coeffs`, the linear-coefficient check.
    Approx(ApproxArgs),
    /// Sample an expression on a grid.
    Grid {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value = "-10,10,-10,10", allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        csv: Option<String>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct RootArgs {
    /// Root of the principal symbol to use (an expression, or `inf`).
    #[arg(long = "root", allow_hyphen_values = true)]
    roots: Vec<String>,
    /// Candidate for the unknown coefficient at a multiple root.
    #[arg(long, allow_hyphen_values = true)]
    riccati: Vec<String>,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(allow_hyphen_values = true)]
    operator: Option<String>,
    /// Scaling function f; several values are ranked by the sup-norm of inv[0].
    #[arg(long = "scale-f", allow_hyphen_values = true)]
    scale_f: Vec<String>,
    /// Coefficients to scale, `j,k;j,k`; defaults to every lower-order one.
    #[arg(long)]
    mask: Option<String>,
    /// Root used for inv[0]; defaults to the first simple root.
    #[arg(long, allow_hyphen_values = true)]
    root: Option<String>,
    /// `x0,x1,y0,y1[,nx,ny]`.
    #[arg(long, default_value = "-10,10,-10,10", allow_hyphen_values = true)]
    grid: String,
    /// Write the inv[0] field as CSV.
    #[arg(long)]
    csv: Option<String>,
    /// `b1,b2,b3;c1,c2,c3;d1,d2,d3` for a00, a10, a01 (index 3 multiplies x).
    #[arg(long = "lin-coeffs", allow_hyphen_values = true)]
    lin_coeffs: Option<String>,
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[command(flatten)]
    out: Output,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(2, e.to_string())
    }
}

type Run = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cmd: Cmd) -> Run {
    match cmd {
        Cmd::Parse { operator, out } => cmd_parse(&operator, out.json),
        Cmd::Factor {
            operator,
            roots,
            all,
            out,
        } => cmd_factor(&operator, &roots, all, out.json),
        Cmd::Invariants {
            operator,
            roots,
            right,
            out,
        } => cmd_invariants(&operator, &roots, right, out.json),
        Cmd::Transpose { operator, out } => {
            emit_operator(&read_operator(&operator)?.transpose(), out.json)
        }
        Cmd::Gauge { operator, phi, out } => {
            let g = GaugeFunction::from(parse(&phi)?);
            emit_operator(&read_operator(&operator)?.gauge_conjugate(&g), out.json)
        }
        Cmd::Compose { operators, out } => {
            let mut acc = Lpdo::one();
            for o in &operators {
                acc = acc.compose(&read_operator(o)?);
            }
            emit_operator(&acc, out.json)
        }
        Cmd::Approx(args) => cmd_approx(&args),
        Cmd::Grid {
            expr,
            grid,
            csv,
            out,
        } => {
            let e = parse(&read_arg(&expr)?)?;
            let field = sample(&e, &grid.parse::<GridSpec>()?);
            write_csv(csv.as_deref(), &field)?;
            let s = field.summary();
            if out.json {
                #[derive(Serialize)]
                struct GridOut {
                    expr: String,
                    summary: FieldSummary,
                }
                print_json(&GridOut {
                    expr: e.to_string(),
                    summary: s,
                });
            } else {
                print!("expr: {e}\n{}", summary_text("field", &s));
            }
            Ok(0)
        }
    }
}

fn read_arg(text: &str) -> Result<String, Fail> {
    if text != "-" {
        return Ok(text.to_string());
    }
    let mut s = String::new();
    io::stdin().read_to_string(&mut s)?;
    Ok(s.trim().to_string())
}

fn read_operator(text: &str) -> Result<Lpdo, Fail> {
    Ok(parse_operator(&read_arg(text)?)?)
}

fn parse_root(text: &str) -> Result<RootKind, Fail> {
    match text.trim() {
        "inf" | "infinity" => Ok(RootKind::Infinite),
        t => Ok(RootKind::Finite(parse(t)?)),
    }
}

fn print_json<T: Serialize + ?Sized>(v: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    );
}

fn emit_operator(a: &Lpdo, as_json: bool) -> Run {
    if as_json {
        print_json(&json!({ "operator": a.to_string() }));
    } else {
        println!("{a}");
    }
    Ok(0)
}

fn cmd_parse(text: &str, as_json: bool) -> Run {
    let a = read_operator(text)?;
    let symbol = a
        .principal_symbol()
        .map(|s| s.to_string())
        .unwrap_or_else(|_| "0".into());
    let coeffs: serde_json::Map<String, Value> = a
        .coeffs()
        .map(|((j, k), c)| (format!("{j},{k}"), Value::String(c.to_string())))
        .collect();
    if as_json {
        print_json(&json!({
            "operator": a.to_string(),
            "order": a.order(),
            "symbol": symbol,
            "coefficients": coeffs,
        }));
    } else {
        println!("operator: {a}");
        match a.order() {
            Some(n) => println!("order: {n}"),
            None => println!("order: none (zero operator)"),
        }
        println!("symbol: {symbol}");
    }
    Ok(0)
}

fn unresolved(e: &FactorError, as_json: bool) -> Run {
    if let FactorError::UnresolvedRoots {
        symbol,
        found,
        unresolved,
    } = e
    {
        if as_json {
            print_json(&json!({
                "status": "unresolved-roots",
                "symbol": symbol,
                "found": found,
                "unresolved": unresolved,
            }));
        }
        return Err(Fail(3, e.to_string()));
    }
    Err(Fail(2, e.to_string()))
}

fn cmd_factor(text: &str, ra: &RootArgs, all: bool, as_json: bool) -> Run {
    let a = read_operator(text)?;
    let opts = FactorOptions {
        all,
        user_roots: ra
            .roots
            .iter()
            .map(|r| parse_root(r))
            .collect::<Result<_, _>>()?,
        riccati: ra
            .riccati
            .iter()
            .map(|r| parse(r))
            .collect::<Result<_, _>>()?,
    };
    match full_factorization(&a, &opts) {
        Ok(chains) => {
            if as_json {
                print_json(&json!({
                    "operator": a.to_string(),
                    "status": "factored",
                    "chains": chains,
                }));
            } else {
                for c in &chains {
                    println!("{c}");
                }
            }
            Ok(0)
        }
        Err(FactorError::NoChain { reports }) => {
            if as_json {
                print_json(&json!({
                    "operator": a.to_string(),
                    "status": "obstructed",
                    "reports": reports,
                }));
            } else {
                println!("no factorization into first-order factors");
                for r in &reports {
                    println!();
                    print!("{}", report_text(r));
                }
            }
            Ok(1)
        }
        Err(e) => unresolved(&e, as_json),
    }
}

/// Left (or right) report at one root; multiple roots go through the
/// Riccati route, verified against each candidate when any are given.
fn report_at(
    a: &Lpdo,
    root: &RootKind,
    right: bool,
    candidates: &[Expr],
) -> Result<Vec<FactorizationReport>, FactorError> {
    let first = if right {
        extract_right_factor(a, root)
    } else {
        extract_left_factor(a, root)
    };
    match first {
        Err(FactorError::MultipleRoot { .. }) if !right => {
            if candidates.is_empty() {
                return Ok(vec![riccati_obstruction(a, root)?]);
            }
            candidates
                .iter()
                .map(|c| verify_riccati(a, root, c))
                .collect()
        }
        other => other.map(|r| vec![r]),
    }
}

fn cmd_invariants(text: &str, ra: &RootArgs, right: bool, as_json: bool) -> Run {
    let a = read_operator(text)?;
    let candidates: Vec<Expr> = ra
        .riccati
        .iter()
        .map(|r| parse(r))
        .collect::<Result<_, _>>()?;
    let mut targets: Vec<RootKind> = ra
        .roots
        .iter()
        .map(|r| parse_root(r))
        .collect::<Result<_, _>>()?;
    let mut missing = None;
    if targets.is_empty() {
        let rs = roots(&a).map_err(|e| Fail(2, e.to_string()))?;
        if !rs.is_complete() {
            missing = Some(FactorError::UnresolvedRoots {
                symbol: a
                    .principal_symbol()
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                found: rs.roots.clone(),
                unresolved: rs.unresolved,
            });
        }
        targets = rs.roots.into_iter().map(|r| r.kind).collect();
    }
    let mut reports = Vec::new();
    for t in &targets {
        reports.extend(report_at(&a, t, right, &candidates).map_err(|e| Fail(2, e.to_string()))?);
    }
    if as_json {
        print_json(&json!({ "operator": a.to_string(), "reports": reports }));
    } else {
        for (i, r) in reports.iter().enumerate() {
            if i > 0 {
                println!();
            }
            print!("{}", report_text(r));
        }
    }
    match missing {
        Some(e) => Err(Fail(3, e.to_string())),
        None => Ok(0),
    }
}

fn parse_mask(text: &str) -> Result<Vec<Index>, Fail> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (j, k) = p
                .split_once(',')
                .ok_or_else(|| Fail(2, format!("bad mask entry `{p}`; expected j,k")))?;
            Ok((j.trim().parse()?, k.trim().parse()?))
        })
        .collect()
}

fn parse_triples(text: &str) -> Result<LinearCoeffs, Fail> {
    let groups: Vec<&str> = text.split(';').collect();
    if groups.len() != 3 {
        return Err(Fail(2, "expected b1,b2,b3;c1,c2,c3;d1,d2,d3".into()));
    }
    let mut out: Vec<[Rational; 3]> = Vec::new();
    for g in groups {
        let vals: Vec<Rational> = g
            .split(',')
            .map(|v| {
                parse(v)?
                    .as_rational()
                    .ok_or_else(|| Fail(2, format!("`{v}` is not a rational number")))
            })
            .collect::<Result<_, _>>()?;
        let arr: [Rational; 3] = vals
            .try_into()
            .map_err(|_| Fail(2, format!("expected three values in `{g}`")))?;
        out.push(arr);
    }
    let [b, c, d]: [[Rational; 3]; 3] = out.try_into().map_err(|_| Fail(2, "internal".into()))?;
    Ok(LinearCoeffs { b, c, d })
}

fn write_csv(path: Option<&str>, field: &GridField) -> Result<(), Fail> {
    if let Some(p) = path {
        field.write_csv(BufWriter::new(File::create(p)?))?;
    }
    Ok(())
}

fn default_root(a: &Lpdo) -> Result<RootKind, Fail> {
    let rs = roots(a)?;
    match rs.roots.iter().find(|r| r.multiplicity == 1) {
        Some(r) => Ok(r.kind.clone()),
        None if !rs.is_complete() => Err(Fail(
            3,
            "could not determine a simple root; pass --root".into(),
        )),
        None => Err(Fail(
            2,
            "the principal symbol has no simple root; pass --root".into(),
        )),
    }
}

fn cmd_approx(args: &ApproxArgs) -> Run {
    let spec: GridSpec = args.grid.parse()?;
    if let Some(lc) = &args.lin_coeffs {
        if args.eps <= 0.0 || !args.eps.is_finite() {
            return Err(Fail(2, "--eps must be positive".into()));
        }
        let lc = parse_triples(lc)?;
        let chk = r_function_check(&lc, args.eps, &spec);
        if args.out.json {
            #[derive(Serialize)]
            struct CheckOut {
                a00: String,
                r_function: String,
                eps: Float17,
                check: RCheck,
            }
            print_json(&CheckOut {
                a00: lc.a00().to_string(),
                r_function: lc.r_function().to_string(),
                eps: Float17(args.eps),
                check: chk,
            });
        } else {
            println!("R = {}", lc.r_function());
            println!(
                "sup|a00 - R| = {} at ({}, {}); eps = {}: {}",
                fmt17(chk.worst.0),
                fmt17(chk.at[0].0),
                fmt17(chk.at[1].0),
                fmt17(args.eps),
                if chk.holds { "holds" } else { "fails" }
            );
        }
        return Ok(if chk.holds { 0 } else { 1 });
    }
    let text = args.operator.as_deref().ok_or_else(|| {
        Fail(
            2,
            "an operator is required unless --lin-coeffs is given".into(),
        )
    })?;
    let a = read_operator(text)?;
    let mask = match &args.mask {
        Some(m) => parse_mask(m)?,
        None => lower_order_mask(&a),
    };
    let fs: Vec<Expr> = args
        .scale_f
        .iter()
        .map(|f| parse(f))
        .collect::<Result<_, _>>()?;
    let root = match &args.root {
        Some(r) => parse_root(r)?,
        None => default_root(&a)?,
    };

    if fs.len() > 1 {
        let ranked = scan_scalings(&a, &root, &fs, &mask, &spec)?;
        if args.out.json {
            #[derive(Serialize)]
            struct Row {
                f: String,
                summary: FieldSummary,
            }
            #[derive(Serialize)]
            struct ScanOut {
                root: String,
                ranking: Vec<Row>,
            }
            print_json(&ScanOut {
                root: root.to_string(),
                ranking: ranked
                    .iter()
                    .map(|e| Row {
                        f: e.f.to_string(),
                        summary: e.summary,
                    })
                    .collect(),
            });
        } else {
            for (i, e) in ranked.iter().enumerate() {
                println!(
                    "{}. f = {}: sup|inv[0]| = {}",
                    i + 1,
                    e.f,
                    fmt17(e.summary.max_abs)
                );
            }
        }
        return Ok(0);
    }

    let aux = match fs.first() {
        Some(f) => scale_operator(&a, f, &mask)?,
        None => a.clone(),
    };
    let inv = lowest_invariant(&aux, &root)?;
    let field = sample(&inv, &spec);
    write_csv(args.csv.as_deref(), &field)?;
    let summary = field.summary();
    let deltas = coefficient_deltas(&a, &aux, &spec);
    if args.out.json {
        #[derive(Serialize)]
        struct Delta {
            index: Index,
            summary: FieldSummary,
        }
        #[derive(Serialize)]
        struct FieldOut {
            operator: String,
            root: String,
            invariant: String,
            summary: FieldSummary,
            deltas: Vec<Delta>,
        }
        print_json(&FieldOut {
            operator: aux.to_string(),
            root: root.to_string(),
            invariant: inv.to_string(),
            summary,
            deltas: deltas
                .iter()
                .map(|(index, f)| Delta {
                    index: *index,
                    summary: f.summary(),
                })
                .collect(),
        });
    } else {
        println!("operator: {aux}");
        println!("root: {root}");
        println!("inv[0] = {inv}");
        print!("{}", summary_text("inv[0] field", &summary));
        for ((j, k), f) in &deltas {
            print!("{}", summary_text(&format!("a{j}{k} delta"), &f.summary()));
        }
    }
    Ok(0)
}
