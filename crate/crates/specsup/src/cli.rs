//! Command-line surface: construct, count, spectral analysis, polynomial
//! verification, theorem checking, enumeration, and annealing search.
//!
//! Exit codes: 0 success / all hold; 1 predicate failure witnessed;
//! 2 usage error; 3 internal or convergence error.

use crate::count;
use crate::enumerate::{self, read_graph6_stream};
use crate::graph::Graph;
use crate::graph6;
use crate::registry::{self, PolyName};
use crate::report::{body_of, Report};
use crate::search;
use crate::spectral;
use crate::theorems::{self, Mode, PredicateId};
use crate::{canon, construct};
use clap::{Parser, Subcommand};
use std::io::Read;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PREDICATE_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "specsup", version, about = "spectral supersaturation toolkit")]
struct Cli {
    /// Worker thread count (default: SPECSUP_WORKERS or all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Emit a named graph family as graph6.
    Construct {
        /// turan | kplus | kplus2 | friendship | kab2 | y2q | kst2 | kstplus | fig2
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
    },
    /// Count substructures for each graph6 line: CSV "graph6,value".
    Count {
        /// triangles | bowties | booksize | tau3 | triangular-edges
        metric: String,
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Spectral radius (and optional quotient polynomial) per graph6 line.
    Spectral {
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Comma-separated class ids, one per vertex, e.g. 0,0,1,1,2
        #[arg(long)]
        quotient: Option<String>,
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Polynomial registry operations.
    Poly {
        #[command(subcommand)]
        cmd: PolyCmd,
    },
    /// Evaluate predicates on enumerated graphs or a graph6 stream.
    Check {
        /// Predicate id (e.g. P_MANTEL) or "all".
        predicate: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "strict")]
        mode: String,
        #[arg(long = "in")]
        input: Option<String>,
    },
    /// Stream one graph6 line per isomorphism class on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Simulated annealing from a JSON config file ("-" for stdin).
    Search {
        #[arg(long)]
        config: String,
    },
}

#[derive(Subcommand, Debug)]
enum PolyCmd {
    /// Check a registered polynomial against its graph family.
    Verify {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
    },
}

/// Entry point; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap treats --help/--version as "errors" with success exit codes
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let workers = cli
        .workers
        .or_else(|| std::env::var("SPECSUP_WORKERS").ok().and_then(|v| v.parse().ok()));
    let body = || dispatch(cli.cmd);
    let outcome = match workers {
        Some(w) if w > 0 => {
            match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
                Ok(pool) => pool.install(body),
                Err(e) => {
                    eprintln!("specsup: {e}");
                    return EXIT_INTERNAL;
                }
            }
        }
        _ => body(),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("specsup: {e}");
            e.exit_code()
        }
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

fn dispatch(cmd: Cmd) -> Result<i32, CliError> {
    match cmd {
        Cmd::Construct { family, n, s, t, q, b } => construct_cmd(&family, n, s, t, q, b),
        Cmd::Count { metric, input } => count_cmd(&metric, &input),
        Cmd::Spectral { tol, quotient, input } => spectral_cmd(tol, quotient.as_deref(), &input),
        Cmd::Poly { cmd: PolyCmd::Verify { name, n, s, t } } => poly_verify_cmd(&name, n, s, t),
        Cmd::Check { predicate, n, mode, input } => check_cmd(&predicate, n, &mode, input.as_deref()),
        Cmd::Enumerate { n } => enumerate_cmd(n),
        Cmd::Search { config } => search_cmd(&config),
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(internal)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))
    }
}

fn construct_cmd(
    family: &str,
    n: Option<usize>,
    s: Option<usize>,
    t: Option<usize>,
    q: Option<usize>,
    b: Option<usize>,
) -> Result<i32, CliError> {
    let need_n = || n.ok_or_else(|| usage("this family needs --n"));
    let graphs: Vec<Graph> = match family {
        "turan" => vec![construct::turan_bipartite(need_n()?).map_err(usage)?],
        "kplus" => vec![construct::k_plus(need_n()?).map_err(usage)?],
        "kplus2" => vec![construct::k_plus2(need_n()?).map_err(usage)?],
        "friendship" => {
            let n = need_n()?;
            if n < 3 || n % 2 == 0 {
                return Err(usage("friendship needs odd --n = 2k+1 >= 3"));
            }
            vec![construct::friendship((n - 1) / 2).map_err(usage)?]
        }
        "kab2" => {
            let b = b.ok_or_else(|| usage("kab2 needs --b"))?;
            vec![construct::kab_plus2(b).map_err(usage)?]
        }
        "y2q" => {
            let q = q.ok_or_else(|| usage("y2q needs --q"))?;
            vec![construct::y_n2q(need_n()?, q).map_err(usage)?]
        }
        "kst2" => {
            let (s, t) = (
                s.ok_or_else(|| usage("kst2 needs --s"))?,
                t.ok_or_else(|| usage("kst2 needs --t"))?,
            );
            vec![construct::kst_plus2(s, t).map_err(usage)?]
        }
        "kstplus" => {
            let (s, t) = (
                s.ok_or_else(|| usage("kstplus needs --s"))?,
                t.ok_or_else(|| usage("kstplus needs --t"))?,
            );
            vec![construct::kst_plus(s, t).map_err(usage)?]
        }
        "fig2" => construct::fig2_family(need_n()?).map_err(usage)?,
        other => return Err(usage(format!("unknown family {other:?}"))),
    };
    for g in &graphs {
        println!("{}", graph6::encode(g).map_err(internal)?);
    }
    Ok(EXIT_OK)
}

fn count_cmd(metric: &str, input: &str) -> Result<i32, CliError> {
    let text = read_input(input)?;
    let graphs = read_graph6_stream(&text).map_err(usage)?;
    println!("graph6,value");
    for g in &graphs {
        let value: usize = match metric {
            "triangles" => count::triangle_stats(g).total,
            "bowties" => count::count_bowties(g),
            "booksize" => count::booksize(g),
            "tau3" => count::triangle_cover_number(g).map_err(internal)?,
            "triangular-edges" => count::triangular_edge_count(g),
            other => return Err(usage(format!("unknown metric {other:?}"))),
        };
        println!("{},{}", graph6::encode(g).map_err(internal)?, value);
    }
    Ok(EXIT_OK)
}

fn spectral_cmd(tol: f64, quotient: Option<&str>, input: &str) -> Result<i32, CliError> {
    let start = Instant::now();
    let text = read_input(input)?;
    let graphs = read_graph6_stream(&text).map_err(usage)?;
    let classes: Option<Vec<usize>> = match quotient {
        None => None,
        Some(spec) => Some(
            spec.split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| usage(format!("bad --quotient: {e}")))?,
        ),
    };
    #[derive(serde::Serialize)]
    struct Record {
        graph6: String,
        lambda: f64,
        residual: f64,
        iterations: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        quotient_matrix: Option<Vec<Vec<i64>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        char_poly: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        largest_root: Option<f64>,
    }
    let mut records = Vec::new();
    for g in &graphs {
        let r = spectral::spectral_radius(g, tol).map_err(internal)?;
        let mut rec = Record {
            graph6: graph6::encode(g).map_err(internal)?,
            lambda: r.lambda,
            residual: r.residual,
            iterations: r.iterations,
            quotient_matrix: None,
            char_poly: None,
            largest_root: None,
        };
        if let Some(classes) = &classes {
            if classes.len() != g.n() {
                return Err(usage(format!(
                    "--quotient has {} entries for a graph on {} vertices",
                    classes.len(),
                    g.n()
                )));
            }
            let q = spectral::equitable_quotient(g, classes).map_err(usage)?;
            let p = spectral::char_poly(&q);
            rec.largest_root = p.largest_real_root(None).ok();
            rec.char_poly = Some(format!("{p:?}"));
            rec.quotient_matrix = Some(q.b);
        }
        records.push(rec);
    }
    let report = Report::new(
        format!("spectral --tol {tol:e}"),
        body_of(&records),
        start.elapsed().as_millis(),
    );
    println!("{}", report.to_json());
    Ok(EXIT_OK)
}

fn poly_verify_cmd(
    name: &str,
    n: Option<u64>,
    s: Option<u64>,
    t: Option<u64>,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let pn = PolyName::parse(name).map_err(usage)?;
    let verification = registry::verify_polynomial(pn, n, s, t).map_err(internal)?;
    let ok = verification.discrepancies.is_empty()
        && verification.quotient_matches_exactly != Some(false)
        && verification.root_lambda_gap.map(|d| d <= 1e-8).unwrap_or(true);
    let report = Report::new(
        format!("poly verify --name {name}"),
        body_of(&verification),
        start.elapsed().as_millis(),
    );
    println!("{}", report.to_json());
    Ok(if ok { EXIT_OK } else { EXIT_PREDICATE_FAILURE })
}

fn check_cmd(
    predicate: &str,
    n: Option<usize>,
    mode: &str,
    input: Option<&str>,
) -> Result<i32, CliError> {
    let start = Instant::now();
    let mode = match mode {
        "strict" => Mode::Strict,
        "exploratory" => Mode::Exploratory,
        other => return Err(usage(format!("unknown mode {other:?}"))),
    };
    let predicates: Vec<PredicateId> = if predicate == "all" {
        theorems::ALL_PREDICATES.to_vec()
    } else {
        vec![PredicateId::parse(predicate).map_err(usage)?]
    };
    let graphs: Vec<Graph> = match (n, input) {
        (Some(n), None) => enumerate::generate_all(n).map_err(usage)?,
        (None, Some(path)) => {
            let text = read_input(path)?;
            read_graph6_stream(&text).map_err(usage)?
        }
        _ => return Err(usage("check needs exactly one of --n or --in")),
    };
    let rep = enumerate::exhaustive_verify(&predicates, &graphs, mode).map_err(internal)?;
    let any_fail = rep.total_fails > 0;
    for p in &rep.predicates {
        for w in &p.witnesses {
            eprintln!("{}", w.graph6);
        }
    }
    let mode_str = if mode == Mode::Strict { "strict" } else { "exploratory" };
    let report = Report::new(
        format!("check {predicate} --mode {mode_str}"),
        body_of(&rep),
        start.elapsed().as_millis(),
    );
    println!("{}", report.to_json());
    Ok(if any_fail { EXIT_PREDICATE_FAILURE } else { EXIT_OK })
}

fn enumerate_cmd(n: usize) -> Result<i32, CliError> {
    let graphs = enumerate::generate_all(n).map_err(usage)?;
    let mut out = String::new();
    for g in &graphs {
        out.push_str(&graph6::encode(g).map_err(internal)?);
        out.push('\n');
    }
    print!("{out}");
    Ok(EXIT_OK)
}

fn search_cmd(config: &str) -> Result<i32, CliError> {
    let start = Instant::now();
    let text = read_input(config)?;
    let cfg: search::SearchConfig =
        serde_json::from_str(&text).map_err(|e| usage(format!("bad config: {e}")))?;
    let result = match search::anneal(&cfg) {
        Ok(r) => r,
        Err(e @ search::SearchError::BadConfig(_)) => return Err(usage(e)),
        Err(e) => return Err(internal(e)),
    };
    let report = Report::new("search".into(), body_of(&result), start.elapsed().as_millis());
    println!("{}", report.to_json());
    Ok(EXIT_OK)
}

/// Canonical-form comparison helper exposed for integration tests.
pub fn isomorphic_g6(a: &str, b: &str) -> bool {
    match (graph6::decode(a), graph6::decode(b)) {
        (Ok(x), Ok(y)) => canon::are_isomorphic(&x, &y),
        _ => false,
    }
}
