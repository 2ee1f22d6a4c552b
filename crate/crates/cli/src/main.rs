mod args;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cdgraph::admissibility::{self, AdmissibilityResult, AdmissibilityStatus};
use cdgraph::families::{FamilyId, FamilyKind};
use cdgraph::format;
use cdgraph::hypothesis::{verify_hypothesis, ClauseStatus};
use cdgraph::oracle::{KbConfig, KnowledgeBase, Oracle, Rule, RuleSet, Verdict, VerdictKind};
use cdgraph::proof::{prove_with, Conclusion};
use cdgraph::{Error, Graph};
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Family, Format, RunArgs};

const CACHE_FILE: &str = "verdicts.json";

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 4,
            Failure::Core(e) => match e {
                Error::Malformed(_)
                | Error::Json(_)
                | Error::DuplicateLabel(_)
                | Error::UnknownLabel(_)
                | Error::SelfLoop(_)
                | Error::TooManyVertices(_)
                | Error::VertexCountMismatch(..) => 3,
                Error::CapExceeded { .. } => 5,
                Error::Io(_) => 6,
                _ => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Machine output plus the exit code it implies.
struct Output {
    body: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(4),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.body.as_bytes()).is_err() {
                return ExitCode::from(6);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    if let Some(jobs) = cli.run.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let oracle = build_oracle(&cli.run)?;
    let cache = cache_path(&cli.run);
    if let Some(path) = &cache {
        let n = oracle.load_cache(path)?;
        eprintln!("cache: {n} entries from {}", path.display());
    }
    let mut opts = admissibility::Options::default();
    if let Some(cap) = cli.run.cap {
        opts.cap = cap;
    }
    let out = dispatch(&cli.command, cli.run.format, &oracle, opts)?;
    if let Some(path) = &cache {
        oracle.save_cache(path)?;
        let s = oracle.stats();
        eprintln!("cache: {} hits, {} misses, {} replay failures", s.hits, s.misses, s.replay_failures);
    }
    Ok(out)
}

fn build_oracle(run: &RunArgs) -> Result<Oracle, Failure> {
    let mut cfg = match &run.kb {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(Error::Io)?;
            serde_json::from_str::<KbConfig>(&text).map_err(|e| Error::Malformed(e.to_string()))?
        }
        None => KbConfig::default(),
    };
    cfg.enable_optional |= run.enable_optional_kb;
    let kb = KnowledgeBase::from_config(&cfg)?;
    let mut rules = RuleSet::default();
    for name in &run.disable_rules {
        rules = rules.without(name.parse::<Rule>()?);
    }
    Ok(Oracle::new(kb, rules).with_paranoid(run.paranoid))
}

fn cache_path(run: &RunArgs) -> Option<PathBuf> {
    if run.no_cache {
        return None;
    }
    run.cache.as_ref().map(|d| d.join(CACHE_FILE))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(Error::Io)?;
        s
    } else {
        fs::read_to_string(path).map_err(Error::Io)?
    };
    Ok(format::from_json(&text)?)
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Usage(format!("{cmd} does not support --format {}", format!("{f:?}").to_lowercase()))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn dispatch(cmd: &Command, fmt: Option<Format>, oracle: &Oracle, opts: admissibility::Options) -> Result<Output, Failure> {
    match cmd {
        Command::Gen { family, k, n } => {
            let id = match family {
                Family::Kt => FamilyId::kt(*k, *n),
                Family::L => FamilyId::left(*k, *n),
                Family::R => FamilyId::right(*k, *n),
            };
            let g = id.build()?;
            let body = match fmt.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", format::to_json(&g)),
                Format::Dot => format::to_dot(&g, &graph_name(*family, *k, *n)),
                f => return Err(unsupported("gen", f)),
            };
            Ok(Output { body, code: 0 })
        }
        Command::Check { graph } => {
            let g = read_graph(graph)?;
            let v = oracle.classify(&g);
            let body = match fmt.unwrap_or(Format::Text) {
                Format::Json => json(&v),
                Format::Text => check_text(&v),
                f => return Err(unsupported("check", f)),
            };
            let code = match v.kind() {
                VerdictKind::Occurs => 0,
                VerdictKind::NotOccurs => 1,
                VerdictKind::Unknown => 2,
            };
            Ok(Output { body, code })
        }
        Command::Admissible { graph, vertex, weak } => {
            let g = read_graph(graph)?;
            let run = |p: usize| {
                if *weak {
                    admissibility::admissible_with(&g, p, oracle, opts)
                } else {
                    admissibility::strongly_admissible_with(&g, p, oracle, opts)
                }
            };
            let results: Vec<AdmissibilityResult> = match vertex {
                Some(l) => vec![run(g.require_index(l)?)?],
                None => g
                    .vertices()
                    .iter()
                    .filter(|&v| g.degree(v) > 0)
                    .map(run)
                    .collect::<cdgraph::Result<_>>()?,
            };
            let body = match fmt.unwrap_or(Format::Text) {
                Format::Json => json(&results),
                Format::Text => admissible_text(&results),
                f => return Err(unsupported("admissible", f)),
            };
            let code = results.iter().map(|r| admissibility_code(r.status)).max().unwrap_or(0);
            Ok(Output { body, code })
        }
        Command::Hypothesis { graph, vertex } => {
            let g = read_graph(graph)?;
            let r = verify_hypothesis(&g, g.require_index(vertex)?, oracle)?;
            let body = match fmt.unwrap_or(Format::Text) {
                Format::Json => json(&r),
                Format::Md => r.to_markdown(),
                Format::Text => {
                    let mut s = format!("hypothesis at {}: {:?}\n", r.p, r.status);
                    for (name, st) in r.statuses() {
                        s.push_str(&format!("  clause ({name}): {st:?}\n"));
                    }
                    s
                }
                f => return Err(unsupported("hypothesis", f)),
            };
            let code = match r.status {
                ClauseStatus::Verified => 0,
                ClauseStatus::Failed => 1,
                ClauseStatus::Undetermined => 2,
            };
            Ok(Output { body, code })
        }
        Command::Prove { family, k, n } => {
            let kind = match family {
                Family::Kt => FamilyKind::GammaKT,
                Family::L => FamilyKind::GammaL,
                Family::R => FamilyKind::GammaR,
            };
            let r = prove_with(kind, *k, *n, oracle, opts)?;
            let body = match fmt.unwrap_or(Format::Md) {
                Format::Json => json(&r),
                Format::Md => r.to_markdown(),
                Format::Text => {
                    let mut s = format!("Γ^L({k},{n}): {}\n", r.conclusion);
                    for st in &r.steps {
                        s.push_str(&format!("  {:>2} {:<28} {:?}\n", st.id, st.rule, st.status));
                    }
                    s
                }
                f => return Err(unsupported("prove", f)),
            };
            let code = match r.conclusion {
                Conclusion::Occurs => 0,
                Conclusion::NotOccurs => 1,
                Conclusion::Undetermined => 2,
            };
            Ok(Output { body, code })
        }
    }
}

fn graph_name(f: Family, k: usize, n: usize) -> String {
    match f {
        Family::Kt => format!("Gamma_{k}_{n}"),
        Family::L => format!("GammaL_{k}_{n}"),
        Family::R => format!("GammaR_{k}_{n}"),
    }
}

fn check_text(v: &Verdict) -> String {
    let mut s = format!("{}\n", v.kind());
    if let Some(c) = v.certificate() {
        s.push_str(&json(c));
    }
    s
}

fn admissibility_code(s: AdmissibilityStatus) -> u8 {
    match s {
        AdmissibilityStatus::Established => 0,
        AdmissibilityStatus::Refuted => 1,
        AdmissibilityStatus::Undetermined => 2,
    }
}

fn admissible_text(results: &[AdmissibilityResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&format!(
            "{:<6} {:<7} {:<12} checked={} pruned={}\n",
            r.vertex,
            if r.strong { "strong" } else { "weak" },
            format!("{:?}", r.status),
            r.checked,
            r.pruned
        ));
        if let Some(w) = &r.refuting {
            s.push_str(&format!("       refuted by {:?} removing {:?}\n", w.stage, w.removed_edges));
        }
    }
    s
}
