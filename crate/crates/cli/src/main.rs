//! `tourlink` command-line front end.
//!
//! Exit codes: 0 success, 1 verdict false, 2 usage or unreadable input,
//! 3 internal failure (including exhausted generation retries).

mod experiment;

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tourlink::constructions::{
    build_construction_31, build_construction_32, certify_connectivity, certify_not_linked_31, certify_not_linked_32,
    verify_certificate, Certificate, Construction31Params, Construction32Params, PartMap,
};
use tourlink::family::WSize;
use tourlink::flow::{is_k_connected, vertex_connectivity};
use tourlink::linker::{link, Fallback, LinkerConfig};
use tourlink::oracle::{is_k_linked, LinkageStatus, LinkedMode, DEFAULT_BUDGET};
use tourlink::{Error, Tournament, Vertex};

#[derive(Parser)]
#[command(name = "tourlink", version, about = "Linkage experiments on tournaments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a tournament (and a part map for the constructions).
    Gen(GenArgs),
    /// Check connectivity or linkedness of a tournament file.
    Check(CheckArgs),
    /// Link designated pairs with the constructive pipeline.
    Link(LinkArgs),
    /// Certify that a construction's designated instance is not linked.
    Certify(CertifyArgs),
    /// Run a parameter grid described by a JSON spec file.
    Experiment(ExperimentArgs),
    /// Replay a certificate against a tournament file.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    C31,
    C32,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckWhat {
    Connectivity,
    KConnected,
    Linked,
}

#[derive(Clone, Copy, ValueEnum)]
enum CertKind {
    C31,
    C32,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FallbackArg {
    Exact,
    None,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Tournament file; the part map goes next to it unless `--parts` is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parts: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    what: CheckWhat,
    file: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    /// Check this many seeded random instances instead of all of them.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct LinkArgs {
    file: PathBuf,
    /// Pairs as `x:y,x:y,...`.
    #[arg(long, conflicts_with = "parts")]
    pairs: Option<String>,
    /// Take the designated pairs from a part map.
    #[arg(long)]
    parts: Option<PathBuf>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    ns_size: Option<usize>,
    #[arg(long)]
    w_size: Option<usize>,
    #[arg(long)]
    free_threshold: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value = "exact")]
    fallback: FallbackArg,
    /// Include per-stage diagnostics.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CertifyArgs {
    kind: CertKind,
    file: PathBuf,
    #[arg(long)]
    parts: PathBuf,
    /// Budget of the exact cross-check; 0 skips it.
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ExperimentArgs {
    spec: PathBuf,
    /// Output prefix: writes `<out>.csv` and `<out>.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long)]
    cert: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Generation { .. } | Error::Infeasible { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

pub(crate) type CmdResult = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Check(a) => cmd_check(a),
        Cmd::Link(a) => cmd_link(a),
        Cmd::Certify(a) => cmd_certify(a),
        Cmd::Experiment(a) => experiment::run(&a.spec, a.out.as_deref(), a.format == Format::Json),
        Cmd::Verify(a) => cmd_verify(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &FsPath, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn load_tournament(path: &FsPath) -> Result<Tournament, Failure> {
    Tournament::from_text(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_parts(path: &FsPath) -> Result<PartMap, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| {
        Failure::Usage(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn need<T>(v: Option<T>, flag: &str, cmd: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("{cmd} needs --{flag}")))
}

/// Writes `value` to `out.out` or standard output; `text` renders the text format.
fn emit(out: &Output, value: &Value, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let body = match out.format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Text => text(),
    };
    match &out.out {
        Some(p) => write(p, &body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn parts_path(out: &FsPath) -> PathBuf {
    out.with_extension("parts.json")
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let seed = need(a.seed, "seed", "gen")?;
    let n = need(a.n, "n", "gen")?;
    let (tour, parts) = match a.kind {
        GenKind::Random => {
            if n == 0 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            (Tournament::random(n, seed), None)
        }
        GenKind::C31 => {
            let p = Construction31Params::new(need(a.k, "k", "gen c31")?, need(a.m, "m", "gen c31")?, n, seed);
            let c = build_construction_31(&p)?;
            (c.tournament, Some(c.parts))
        }
        GenKind::C32 => {
            let p = Construction32Params::new(need(a.k, "k", "gen c32")?, n, seed);
            let c = build_construction_32(&p)?;
            (c.tournament, Some(c.parts))
        }
    };
    let text = tour.to_text();
    match &a.out {
        Some(p) => write(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(parts) = parts {
        let path = match (&a.parts, &a.out) {
            (Some(p), _) => p.clone(),
            (None, Some(o)) => parts_path(o),
            (None, None) => return Err(Failure::Usage("constructions need --out or --parts for the part map".into())),
        };
        write(&path, &(serde_json::to_string_pretty(&parts).expect("part maps serialize") + "\n"))?;
    }
    Ok(true)
}

fn cmd_check(a: CheckArgs) -> CmdResult {
    let tour = load_tournament(&a.file)?;
    let start = Instant::now();
    let (verdict, mut report, line) = match a.what {
        CheckWhat::Connectivity => {
            let c = vertex_connectivity(&tour);
            let verdict = a.k.is_none_or(|k| c.kappa >= k);
            let line = format!("kappa {}", c.kappa);
            (verdict, json!({ "kappa": c.kappa, "separator": c.separator, "pair": c.pair }), line)
        }
        CheckWhat::KConnected => {
            let k = need(a.k, "k", "check k-connected")?;
            let v = is_k_connected(&tour, k);
            let cert = certify_connectivity(&tour, k);
            let line = match &v.reason {
                None => format!("{k}-connected: true"),
                Some(r) => format!("{k}-connected: false ({r})"),
            };
            (v.holds, json!({ "k": k, "result": v, "certificate": cert }), line)
        }
        CheckWhat::Linked => {
            let k = need(a.k, "k", "check linked")?;
            let mode = match a.samples {
                Some(trials) => LinkedMode::Sampled {
                    trials,
                    seed: need(a.seed, "seed", "sampled check linked")?,
                },
                None => LinkedMode::Exhaustive,
            };
            let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
            let v = is_k_linked(&tour, k, mode, budget)?;
            let line = format!("{k}-linked: {}", status_word(v.status));
            let linked = v.status == LinkageStatus::Linked;
            (linked, json!({ "k": k, "budget": budget, "seed": a.seed, "result": v }), line)
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    report["verdict"] = json!(verdict);
    report["wall_ms"] = json!(wall_ms);
    emit(&a.output, &report, || line + "\n")?;
    Ok(verdict)
}

fn status_word(s: LinkageStatus) -> &'static str {
    match s {
        LinkageStatus::Linked => "linked",
        LinkageStatus::NotLinked => "not-linked",
        LinkageStatus::Unknown => "unknown",
    }
}

pub(crate) fn parse_pairs(spec: &str) -> Result<Vec<(Vertex, Vertex)>, Failure> {
    spec.split(',')
        .map(|item| {
            let bad = || Failure::Usage(format!("malformed pair {item:?}, expected x:y"));
            let (x, y) = item.trim().split_once(':').ok_or_else(bad)?;
            Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn cmd_link(a: LinkArgs) -> CmdResult {
    let tour = load_tournament(&a.file)?;
    let pairs = match (&a.pairs, &a.parts) {
        (Some(s), _) => parse_pairs(s)?,
        (None, Some(p)) => load_parts(p)?.pairs,
        (None, None) => return Err(Failure::Usage("link needs --pairs or --parts".into())),
    };
    let k = pairs.len();
    let mut cfg = LinkerConfig::desk(k.max(1));
    if let Some(ell) = a.ell {
        if ell < 2 {
            return Err(Failure::Usage("--ell must be at least 2".into()));
        }
        cfg.family.ell = ell;
    }
    if let Some(s) = a.ns_size {
        if s == 0 {
            return Err(Failure::Usage("--ns-size must be positive".into()));
        }
        cfg.family.ns_size = s;
    }
    if let Some(w) = a.w_size {
        if w == 0 {
            return Err(Failure::Usage("--w-size must be positive".into()));
        }
        cfg.family.w_size = WSize::Fixed(w);
    }
    if let Some(t) = a.free_threshold {
        cfg.free_threshold = t;
    }
    if let Some(b) = a.budget {
        cfg.budget = b;
    }
    cfg.fallback = match a.fallback {
        FallbackArg::Exact => Fallback::Exact,
        FallbackArg::None => Fallback::None,
    };
    let (xs, ys): (Vec<Vertex>, Vec<Vertex>) = pairs.iter().copied().unzip();
    let start = Instant::now();
    let rep = link(&tour, &xs, &ys, &cfg)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut report = json!({
        "pairs": pairs,
        "status": rep.verdict.status,
        "paths": rep.verdict.paths,
        "nodes_explored": rep.verdict.nodes_explored,
        "method": rep.trace.method,
        "failure": rep.trace.failure,
        "budget": cfg.budget,
        "wall_ms": wall_ms,
    });
    if a.trace {
        report["trace"] = json!(rep.trace);
        report["config"] = json!(cfg);
    }
    emit(&a.output, &report, || {
        let mut s = format!("{}\n", status_word(rep.verdict.status));
        for p in rep.verdict.paths.iter().flatten() {
            let vs: Vec<String> = p.vertices().iter().map(ToString::to_string).collect();
            s += &vs.join(" -> ");
            s.push('\n');
        }
        if let Some(f) = &rep.trace.failure {
            s += &format!("constructive stage failed: {f}\n");
        }
        s
    })?;
    Ok(true)
}

fn cmd_certify(a: CertifyArgs) -> CmdResult {
    let tour = load_tournament(&a.file)?;
    let parts = load_parts(&a.parts)?;
    let cert = match a.kind {
        CertKind::C31 => {
            let budget = a.budget.unwrap_or(DEFAULT_BUDGET);
            certify_not_linked_31(&tour, &parts, (budget > 0).then_some(budget))
        }
        CertKind::C32 => certify_not_linked_32(&tour, &parts),
    };
    for f in failures(&cert) {
        eprintln!("check failed: {f}");
    }
    let value = serde_json::to_value(&cert).expect("certificates serialize");
    emit(&a.output, &value, || format!("{}: {}\n", cert.kind(), cert.verdict))?;
    Ok(cert.verdict)
}

fn failures(cert: &Certificate) -> &[String] {
    use tourlink::constructions::CertificateBody as B;
    match &cert.body {
        B::NotLinked31(p) => &p.failures,
        B::NotLinked32(p) => &p.failures,
        _ => &[],
    }
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let tour = load_tournament(&a.file)?;
    let cert = Certificate::from_json(&read(&a.cert)?).map_err(|e| Failure::Usage(format!("{}: {e}", a.cert.display())))?;
    let ok = verify_certificate(&tour, &cert);
    let report = json!({ "kind": cert.kind(), "accepted": ok });
    emit(&a.output, &report, || format!("{}: {}\n", cert.kind(), if ok { "accepted" } else { "rejected" }))?;
    Ok(ok)
}
