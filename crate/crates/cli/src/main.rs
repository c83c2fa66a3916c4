use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use zagreb::families::{self, BridgeJoinSpec, CubicKind};
use zagreb::indices::index_report;
use zagreb::io::{read_graphs, read_jsonl, write_atomic, write_jsonl, GraphFormat, RunReport};
use zagreb::search::{count_distinct, run_search, Objective, SearchConfig};
use zagreb::theorem::{
    classify_conjecture, corollary_conditions, verify_certificate, verify_table1, CounterexampleCertificate,
    TheoremError,
};
use zagreb::Graph;

#[derive(Parser)]
#[command(
    name = "zagreb",
    version,
    about = "Compare M1/n with M2/m, build counterexample families, search and certify"
)]
struct Cli {
    /// Input file; `-` or absent reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::G6)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    G6,
    Edges,
}

impl From<Format> for GraphFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::G6 => GraphFormat::G6,
            Format::Edges => GraphFormat::Edges,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// n, m, M1, M2, gap and Θ for every input graph.
    Compute,
    /// Classify every input graph against M1/n ≤ M2/m.
    Check,
    /// Build a named graph and print it as graph6.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
    /// Check every table entry against direct evaluation for δ = 1..=delta_max.
    VerifyTable {
        #[arg(long, default_value_t = 1000)]
        delta_max: u64,
    },
    /// Smallest violating join of Ξ_{2k+1} with a cubic graph, per k.
    ScanProp2 {
        #[arg(long, default_value_t = 8)]
        k_min: usize,
        #[arg(long, default_value_t = 30)]
        k_max: usize,
    },
    /// Search for violating graphs.
    Search(SearchArgs),
    /// Verify certificates (JSON lines) from the input.
    Certify,
}

#[derive(Clone, Copy, ValueEnum)]
enum CubicArg {
    Complete4,
    Prism,
    MoebiusLadder,
    Circulant,
    Random,
}

#[derive(Subcommand)]
enum FamilyCommand {
    Xi {
        k: usize,
    },
    Star {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Kbipartite {
        a: usize,
        b: usize,
    },
    Cubic {
        #[arg(value_enum)]
        kind: CubicArg,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jump: usize,
    },
    /// Ξ_{2k+1} joined by one edge to a cubic graph.
    BridgeJoin {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = CubicArg::MoebiusLadder)]
        cubic: CubicArg,
        #[arg(long)]
        cubic_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// r copies of K_{2,5} and l copies of K_4.
    Disjoint {
        r: usize,
        l: usize,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [2, 5])]
    window: Vec<usize>,
    /// Largest order searched.
    #[arg(long, default_value_t = 11)]
    order: usize,
    #[arg(long, default_value_t = 2)]
    order_min: usize,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Count)]
    objective: ObjectiveArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Swap steps per restart.
    #[arg(long, default_value_t = 20_000)]
    budget: u64,
    #[arg(long, default_value_t = 4)]
    restarts: u32,
    #[arg(long)]
    connected: bool,
    /// Forbid class {I,J}; repeatable.
    #[arg(long, num_args = 2, value_names = ["I", "J"], action = clap::ArgAction::Append)]
    forbid: Vec<usize>,
    /// Drop the m_{2,5} > 0, m_{3,3} > 0 requirement in window [2,5].
    #[arg(long)]
    no_corollary_filter: bool,
    #[arg(long, default_value_t = 60)]
    exhaustive_limit: usize,
    #[arg(long, default_value_t = 1000)]
    max_results: usize,
    /// Count isomorphism classes at exactly `--order` instead.
    #[arg(long)]
    count: bool,
    /// Write certificates as JSON lines here, plus `<out>.manifest.json`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MinOrder,
    MaxGap,
    Count,
}

enum Failure {
    /// Bad input or arguments: exit 2.
    Usage(String),
    /// A check ran and failed: exit 1, report still printed.
    Verification(RunReport, String),
}

type Outcome = Result<(Value, Value, String), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(usage)?;
        }
    }
    Ok(text)
}

fn input_graphs(cli: &Cli) -> Result<Vec<Graph>, Failure> {
    let text = read_input(cli.input.as_deref())?;
    let graphs = read_graphs(&text, cli.format.into()).map_err(usage)?;
    if graphs.is_empty() {
        return Err(usage("no graphs in input"));
    }
    Ok(graphs)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cubic_kind(kind: CubicArg, order: usize, seed: u64, jump: usize) -> CubicKind {
    match kind {
        CubicArg::Complete4 => CubicKind::Complete4,
        CubicArg::Prism => CubicKind::Prism { order },
        CubicArg::MoebiusLadder => CubicKind::MoebiusLadder { order },
        CubicArg::Circulant => CubicKind::Circulant { order, jump },
        CubicArg::Random => CubicKind::RandomPairing { order, seed },
    }
}

fn compute(cli: &Cli) -> Outcome {
    let mut reports = Vec::new();
    for (i, g) in input_graphs(cli)?.iter().enumerate() {
        reports.push(index_report(g).map_err(|e| usage(format!("graph {i}: {e}")))?);
    }
    let summary = reports
        .iter()
        .map(|r| format!("n={} m={} M1={} M2={} gap={}", r.n, r.m, r.m1, r.m2, r.gap))
        .collect::<Vec<_>>()
        .join("\n");
    Ok((json!({}), to_json(&reports), summary))
}

fn check(cli: &Cli) -> Outcome {
    let mut verdicts = Vec::new();
    let mut lines = Vec::new();
    let mut contradiction = None;
    for (i, g) in input_graphs(cli)?.iter().enumerate() {
        match classify_conjecture(g) {
            Ok(v) => {
                // null when Δ − δ > 3, where the conditions say nothing
                let corollary = match corollary_conditions(g) {
                    Ok(c) => to_json(&c),
                    Err(TheoremError::DegreeWindowExceeded { .. }) => Value::Null,
                    Err(TheoremError::Contradiction(msg)) => {
                        contradiction = Some(format!("graph {i}: {msg}"));
                        Value::Null
                    }
                    Err(e) => return Err(usage(format!("graph {i}: {e}"))),
                };
                lines.push(format!("graph {i}: {:?}, gap={}", v.status, v.report.gap));
                verdicts.push(json!({ "verdict": to_json(&v), "corollary": corollary }));
            }
            Err(TheoremError::Contradiction(msg)) => {
                lines.push(format!("graph {i}: contradiction: {msg}"));
                verdicts.push(json!({ "contradiction": msg }));
                contradiction = Some(format!("graph {i}: {msg}"));
            }
            Err(e) => return Err(usage(format!("graph {i}: {e}"))),
        }
    }
    if let Some(msg) = contradiction {
        let report = RunReport {
            command: "check".into(),
            config: json!({}),
            elapsed_ms: 0,
            result: Value::Array(verdicts),
        };
        return Err(Failure::Verification(report, msg));
    }
    Ok((json!({}), Value::Array(verdicts), lines.join("\n")))
}

fn family(cmd: &FamilyCommand) -> Outcome {
    let (name, g, extra) = match *cmd {
        FamilyCommand::Xi { k } => (format!("xi({k})"), families::xi(k), Value::Null),
        FamilyCommand::Star { n } => (format!("star({n})"), families::star(n), Value::Null),
        FamilyCommand::Cycle { n } => (format!("cycle({n})"), families::cycle(n), Value::Null),
        FamilyCommand::Path { n } => (format!("path({n})"), families::path(n), Value::Null),
        FamilyCommand::Complete { n } => (format!("complete({n})"), families::complete(n), Value::Null),
        FamilyCommand::Kbipartite { a, b } => {
            (format!("kbipartite({a},{b})"), families::complete_bipartite(a, b), Value::Null)
        }
        FamilyCommand::Cubic { kind, n, seed, jump } => {
            let kind = cubic_kind(kind, n, seed, jump);
            (format!("{kind:?}"), families::cubic(kind), Value::Null)
        }
        FamilyCommand::BridgeJoin { k, cubic, cubic_order, seed } => {
            let g1 = families::xi(k).map_err(usage)?;
            let g2 = families::cubic(cubic_kind(cubic, cubic_order, seed, 1)).map_err(usage)?;
            let (m1, m2) = (g1.size() as u64, g2.size() as u64);
            let extra = json!({
                "xi_size": m1,
                "cubic_size": m2,
                "lemma_gap": to_json(&Wrapped(families::lemma1_gap(m1, m2))),
                "lemma_condition": families::lemma1_condition(m1, m2),
            });
            let joined = families::bridge_join(BridgeJoinSpec::with_defaults(&g1, &g2));
            (format!("bridge_join(xi({k}), cubic order {cubic_order})"), joined, extra)
        }
        FamilyCommand::Disjoint { r, l } => {
            (format!("{r}K(2,5) + {l}K4"), families::disjoint_counterexample(r, l), Value::Null)
        }
    };
    let g = g.map_err(usage)?;
    let g6 = zagreb::io::graph6_encode(&g).map_err(usage)?;
    let report = index_report(&g).ok();
    let summary = format!("{name}: n={} m={}\n{g6}", g.order(), g.size());
    Ok((
        json!({ "family": name }),
        json!({ "graph6": g6, "n": g.order(), "m": g.size(), "indices": to_json(&report), "construction": extra }),
        summary,
    ))
}

#[derive(serde::Serialize)]
struct Wrapped(#[serde(with = "zagreb::rational")] zagreb::Rational);

fn search_config(a: &SearchArgs) -> Result<SearchConfig, Failure> {
    let forbidden = a.forbid.chunks(2).map(|p| zagreb::edge_class(p[0], p[1])).collect();
    let cfg = SearchConfig {
        window: (a.window[0], a.window[1]),
        order_min: if a.count { a.order } else { a.order_min },
        order_max: a.order,
        objective: match a.objective {
            ObjectiveArg::MinOrder => Objective::MinimizeOrder,
            ObjectiveArg::MaxGap => Objective::MaximizeGapAtOrder,
            ObjectiveArg::Count => Objective::CountAtOrder,
        },
        connected: a.connected,
        forbidden_classes: forbidden,
        corollary_filter: !a.no_corollary_filter,
        swap_budget: a.budget,
        restarts: a.restarts,
        seed: a.seed,
        exhaustive_limit: a.exhaustive_limit,
        max_results: a.max_results,
        ..SearchConfig::default()
    };
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

fn search(a: &SearchArgs, started: Instant) -> Outcome {
    let cfg = search_config(a)?;
    let (result, certificates, summary) = if a.count {
        let c = count_distinct(a.order, &cfg).map_err(usage)?;
        let summary = format!(
            "order {}: {} distinct verified counterexamples ({}), {} histograms",
            c.order, c.lower_bound, c.label, c.histograms
        );
        (to_json(&c), c.certificates, summary)
    } else {
        let out = run_search(&cfg).map_err(usage)?;
        let summary = format!(
            "{} violating histograms, {} verified non-isomorphic certificates, {} realization failures, {} not made connected",
            out.histograms.len(),
            out.certificates.len(),
            out.realization_failures,
            out.connectivity_failures
        );
        let certs = out.certificates.clone();
        (to_json(&out), certs, summary)
    };
    if let Some(path) = &a.out {
        let body = write_jsonl(&certificates).map_err(usage)?;
        write_atomic(path, body.as_bytes()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let manifest = json!({
            "config": to_json(&cfg),
            "seed": cfg.seed,
            "swap_budget": cfg.swap_budget,
            "restarts": cfg.restarts,
            "certificates": certificates.len(),
            "wall_time_ms": started.elapsed().as_millis() as u64,
        });
        let mut mpath = path.clone().into_os_string();
        mpath.push(".manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        write_atomic(Path::new(&mpath), text.as_bytes())
            .map_err(|e| usage(format!("{}: {e}", Path::new(&mpath).display())))?;
    }
    Ok((to_json(&cfg), result, summary))
}

fn certify(cli: &Cli) -> Outcome {
    let text = read_input(cli.input.as_deref())?;
    let certs: Vec<CounterexampleCertificate> =
        read_jsonl(&text).map_err(|(line, e)| usage(format!("line {line}: {e}")))?;
    if certs.is_empty() {
        return Err(usage("no certificates in input"));
    }
    let mut verdicts = Vec::new();
    let mut failed = 0;
    for (i, cert) in certs.iter().enumerate() {
        match verify_certificate(cert) {
            Ok(r) => verdicts.push(json!({ "index": i, "valid": true, "gap": r.gap })),
            Err(e) => {
                failed += 1;
                verdicts.push(json!({ "index": i, "valid": false, "error": e.to_string() }));
            }
        }
    }
    let summary = format!("{}/{} certificates verified", certs.len() - failed, certs.len());
    if failed > 0 {
        let report = RunReport {
            command: "certify".into(),
            config: json!({}),
            elapsed_ms: 0,
            result: Value::Array(verdicts),
        };
        return Err(Failure::Verification(report, summary));
    }
    Ok((json!({}), Value::Array(verdicts), summary))
}

fn run(cli: &Cli, started: Instant) -> Outcome {
    match &cli.command {
        Command::Compute => compute(cli),
        Command::Check => check(cli),
        Command::Family { family: f } => family(f),
        Command::VerifyTable { delta_max } => {
            if *delta_max == 0 {
                return Err(usage("--delta-max must be at least 1"));
            }
            let v = verify_table1(*delta_max);
            let summary = v.summary();
            let config = json!({ "delta_max": delta_max });
            if !v.is_clean() {
                let report =
                    RunReport { command: "verify-table".into(), config, elapsed_ms: 0, result: to_json(&v) };
                return Err(Failure::Verification(report, summary));
            }
            Ok((config, to_json(&v), summary))
        }
        Command::ScanProp2 { k_min, k_max } => {
            let scan = families::prop2_scan(*k_min, *k_max).map_err(usage)?;
            let summary = format!(
                "minimum order {} at k={} with cubic order {}",
                scan.min_order, scan.min_k, scan.min_cubic_order
            );
            Ok((json!({ "k_min": k_min, "k_max": k_max }), to_json(&scan), summary))
        }
        Command::Search(a) => search(a, started),
        Command::Certify => certify(cli),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Compute => "compute",
        Command::Check => "check",
        Command::Family { .. } => "family",
        Command::VerifyTable { .. } => "verify-table",
        Command::ScanProp2 { .. } => "scan-prop2",
        Command::Search(_) => "search",
        Command::Certify => "certify",
    }
}

fn emit(report: &RunReport) {
    println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli, started) {
        Ok((config, result, summary)) => {
            emit(&RunReport {
                command: command_name(&cli.command).into(),
                config,
                elapsed_ms: started.elapsed().as_millis() as u64,
                result,
            });
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(mut report, summary)) => {
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            emit(&report);
            eprintln!("{summary}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
