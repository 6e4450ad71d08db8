//! Command-line front end: parses an expression, runs the residue pipeline
//! and prints a text or JSON report.
//!
//! Exit codes: 0 summable, 1 not summable, 2 error.

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use serde_json::{json, Map, Value};

use mahler::expr::parse_function;
use mahler::oracle::{oracle, AnsatzBounds, OracleOutcome};
use mahler::residues::{mahler_report, MahlerReport, TreeResidues, VerificationRoute};
use mahler::structure::TreeId;
use mahler::{Error, RadicalMonomial, Scalar};

pub use mahler::expr::{parse, InputExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "mahler", version, about = "Decide Mahler summability of a rational function")]
#[command(group(ArgGroup::new("source").required(true).args(["input", "file"])))]
pub struct Args {
    /// The Mahler radix; the operator is x ↦ x^p.
    #[arg(long, allow_negative_numbers = true)]
    pub p: i64,
    /// The rational function, e.g. "1/(x^6+1)".
    #[arg(long)]
    pub input: Option<String>,
    /// Read the expression from a file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include the certificate g and, when summable, the solution.
    #[arg(long)]
    pub certificate: bool,
    /// Recheck f̄ = f + Δ(g) and f = Δ(solution) on the output.
    #[arg(long)]
    pub verify: bool,
    /// Cross-check the decision against the linear-algebra oracle.
    #[arg(long)]
    pub oracle: bool,
    /// Oracle ansatz: largest pole order.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Oracle ansatz: largest pole height.
    #[arg(long)]
    pub max_height: Option<u32>,
}

struct Outcome {
    report: MahlerReport,
    route: Option<VerificationRoute>,
    oracle: Option<OracleOutcome>,
}

/// Runs the CLI with `argv` (program name first) on the process streams.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&args) {
        Ok(o) => {
            let text = match args.format {
                Format::Text => render_text(&o, &args),
                Format::Json => serde_json::to_string_pretty(&render_json(&o, &args)).unwrap() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            if let Some(orc) = &o.oracle {
                if orc.solution.is_some() != o.report.summable {
                    let _ = writeln!(err, "error: oracle disagrees with the residue decision");
                    return 2;
                }
            }
            if o.report.summable {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(args: &Args) -> Result<Outcome, Error> {
    if args.p < 2 {
        return Err(Error::InvalidArgument("p must be ≥ 2".into()));
    }
    let p = args.p as u64;
    let src = match (&args.input, &args.file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let f = parse_function(src.trim(), p)?;
    let report = mahler_report(&f, p)?;
    let route = if args.verify { Some(report.verify_exact()?) } else { None };
    let oracle = if args.oracle {
        let bounds = AnsatzBounds { max_height: args.max_height, max_order: args.max_order };
        Some(oracle(&f, p, &bounds)?)
    } else {
        None
    };
    Ok(Outcome { report, route, oracle })
}

fn tree_key(id: &TreeId) -> Value {
    match id {
        TreeId::Torsion { r, orbit } => json!({ "torsion": { "r": r, "orbit": orbit } }),
        TreeId::NonTorsion { core } => json!({ "core": core.render() }),
    }
}

/// Multi-term cyclotomic coefficients that are really `q·ζ^k` read better
/// as monomials.
fn scalar_string(c: &Scalar) -> String {
    let s = c.render();
    let small = c.coeffs().iter().flat_map(|z| z.coeffs()).all(|q| q.numer().bits() <= 64 && q.denom().bits() <= 64);
    if s.contains(' ') && small {
        if let Some(m) = RadicalMonomial::from_element(c) {
            return m.render();
        }
    }
    s
}

fn scalar(c: &Scalar) -> Value {
    Value::String(scalar_string(c))
}

fn tree_json(t: &TreeResidues) -> Value {
    let mut residues = Map::new();
    for (k, poles) in &t.residues {
        let m: Map<String, Value> = poles.iter().map(|(a, c)| (a.render(), scalar(c))).collect();
        residues.insert(k.to_string(), Value::Object(m));
    }
    json!({
        "tree": tree_key(&t.id),
        "gamma": t.gamma.render(),
        "h": t.h,
        "e": if t.id.is_torsion() { json!(t.e) } else { Value::Null },
        "residues": residues,
    })
}

fn render_json(o: &Outcome, args: &Args) -> Value {
    let r = &o.report;
    let infinity: Map<String, Value> =
        r.residues_at_infinity.iter().map(|(theta, c)| (theta.to_string(), scalar(c))).collect();
    let oracle = o.oracle.as_ref().map(|orc| {
        json!({
            "summable": orc.solution.is_some(),
            "agrees": orc.solution.is_some() == r.summable,
            "unknowns": orc.unknowns,
            "equations": orc.equations,
            "solution": orc.solution.as_ref().map(|g| g.render()),
        })
    });
    json!({
        "input": r.input.render(),
        "p": r.p,
        "summable": r.summable,
        "residues_at_infinity": infinity,
        "tree_residues": r.tree_residues.iter().map(tree_json).collect::<Vec<_>>(),
        "remainder": r.remainder.render(),
        "certificate": args.certificate.then(|| r.certificate.render()),
        "solution": if args.certificate { r.solution.as_ref().map(|s| s.render()) } else { None },
        "oracle": oracle,
    })
}

fn render_text(o: &Outcome, args: &Args) -> String {
    let r = &o.report;
    let mut s = String::new();
    let mut line = |l: String| {
        s.push_str(&l);
        s.push('\n');
    };
    line(format!("input: {}", r.input.render()));
    line(format!("p: {}", r.p));
    line(format!("summable: {}", if r.summable { "yes" } else { "no" }));
    if r.residues_at_infinity.is_empty() {
        line("residues at infinity: none".into());
    } else {
        line("residues at infinity:".into());
        for (theta, c) in &r.residues_at_infinity {
            line(format!("  trajectory {theta}: {}", scalar_string(c)));
        }
    }
    for t in &r.tree_residues {
        let e = if t.id.is_torsion() { format!(", e = {}", t.e) } else { String::new() };
        line(format!("tree {}: gamma = {}, h = {}{e}", t.id, t.gamma.render(), t.h));
        if t.is_zero() {
            line("  residues: none".into());
        }
        for (k, poles) in &t.residues {
            for (a, c) in poles {
                line(format!("  dres(order {k}) at {}: {}", a.render(), scalar_string(c)));
            }
        }
    }
    line(format!("remainder: {}", r.remainder.render()));
    if args.certificate {
        line(format!("certificate: {}", r.certificate.render()));
        if let Some(sol) = &r.solution {
            line(format!("solution: {}", sol.render()));
        }
    }
    if let Some(route) = o.route {
        let how = match route {
            VerificationRoute::Rational => "as rational functions",
            VerificationRoute::PerTree => "tree by tree",
        };
        line(format!("verified: {how}"));
    }
    if let Some(orc) = &o.oracle {
        let verdict = if orc.solution.is_some() { "summable" } else { "not summable" };
        let agree = if orc.solution.is_some() == r.summable { "agrees" } else { "DISAGREES" };
        line(format!("oracle: {verdict} ({agree}; {} unknowns, {} equations)", orc.unknowns, orc.equations));
    }
    s
}
