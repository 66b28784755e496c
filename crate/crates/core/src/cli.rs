//! The `rtrie` command-line front end.
//!
//! Every tree command builds a trie from `--input` in file order and then
//! runs on it within the same process; there is no on-disk tree format.
//!
//! Exit codes: 0 success, 1 query miss, 2 usage error or invariant
//! violations, 3 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::priority::{PrioritySource, DEFAULT_CEILING};
use crate::shape::Link;
use crate::stats::{self, BenchConfig, OpMix, Order, Workload};
use crate::trie::{InsertOutcome, InvariantReport, NodeRef, RTrie};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_IO: i32 = 3;

const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Build,
    Query,
    Prefix,
    Verify,
    Stats,
    Bench,
    ExportDot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OrderArg {
    Random,
    Lexicographic,
    Reverse,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Order {
        match o {
            OrderArg::Random => Order::Random,
            OrderArg::Lexicographic => Order::Lexicographic,
            OrderArg::Reverse => Order::Reverse,
        }
    }
}

/// Randomized ternary search trie toolkit.
#[derive(Debug, Parser)]
#[command(name = "rtrie", version, about)]
pub struct CliConfig {
    #[arg(value_enum)]
    pub command: Command,

    /// Newline-delimited corpus, one string per line.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, env = "RTRIE_SEED", default_value_t = 42)]
    pub seed: u64,

    /// Priority ceiling.
    #[arg(long = "r", default_value_t = DEFAULT_CEILING, value_parser = clap::value_parser!(u32).range(1..))]
    pub r: u32,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[arg(long)]
    pub prefix: Option<OsString>,

    #[arg(long)]
    pub query: Option<OsString>,

    /// Output file for export-dot; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = 10_000)]
    count: usize,

    /// Alphabet size for generated strings.
    #[arg(long, default_value_t = 26)]
    alpha: usize,

    #[arg(long, default_value_t = 5)]
    len_min: usize,

    #[arg(long, default_value_t = 15)]
    len_max: usize,

    #[arg(long, value_enum, default_value_t = OrderArg::Random)]
    order: OrderArg,

    /// Timed repetitions for bench.
    #[arg(long, default_value_t = 5)]
    runs: usize,

    /// Skip deletion in bench.
    #[arg(long)]
    no_delete: bool,
}

impl CliConfig {
    fn workload(&self) -> Workload {
        Workload {
            alphabet_size: self.alpha,
            len_min: self.len_min,
            len_max: self.len_max,
            count: self.count,
            order: self.order.into(),
            seed: self.seed,
        }
    }
}

/// Lines of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub strings: Vec<Vec<u8>>,
    pub lines: usize,
    pub empty_lines: usize,
}

/// Splits on `\n`, strips one trailing `\r` per line and drops empty lines.
pub fn parse_corpus(bytes: &[u8]) -> Corpus {
    let mut corpus = Corpus::default();
    if bytes.is_empty() {
        return corpus;
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    for line in body.split(|&b| b == b'\n') {
        corpus.lines += 1;
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        if line.is_empty() {
            corpus.empty_lines += 1;
        } else {
            corpus.strings.push(line.to_vec());
        }
    }
    corpus
}

pub fn read_corpus(path: &Path) -> io::Result<Corpus> {
    std::fs::read(path).map(|b| parse_corpus(&b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub n: usize,
    pub lines: usize,
    pub duplicates: usize,
    pub empty_lines: usize,
    pub nodes: usize,
}

/// Inserts the corpus in file order.
pub fn build<P: PrioritySource>(
    trie: &mut RTrie<P>,
    corpus: &Corpus,
) -> crate::Result<BuildSummary> {
    let mut duplicates = 0;
    for s in &corpus.strings {
        if trie.insert(s)? == InsertOutcome::AlreadyPresent {
            duplicates += 1;
        }
    }
    Ok(BuildSummary {
        n: trie.len(),
        lines: corpus.lines,
        duplicates,
        empty_lines: corpus.empty_lines,
        nodes: trie.node_count(),
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    execute_config(&config, out, err)
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs an already parsed configuration.
pub fn execute_config(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_IO
        }
    }
}

fn execute(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if config.command == Command::Bench {
        return cmd_bench(config, out);
    }
    // Validate query arguments before touching the corpus.
    let needle = match config.command {
        Command::Query => Some(required_bytes(&config.query, "--query")?),
        Command::Prefix => Some(
            config
                .prefix
                .as_ref()
                .map(|p| p.as_encoded_bytes().to_vec())
                .unwrap_or_default(),
        ),
        _ => None,
    };

    let input = config
        .input
        .as_ref()
        .ok_or_else(|| Failure::Usage("--input PATH is required".into()))?;
    let corpus = read_corpus(input)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", input.display())))?;
    if corpus.empty_lines > 0 {
        writeln!(err, "warning: skipped {} empty line(s)", corpus.empty_lines)?;
    }
    if corpus.strings.is_empty() {
        writeln!(err, "warning: {} contains no strings", input.display())?;
    }
    let mut trie = RTrie::new(config.r, config.seed)?;
    let summary = build(&mut trie, &corpus)?;

    match config.command {
        Command::Build => cmd_build(config, input, &summary, out),
        Command::Query => cmd_query(config, &trie, &needle.unwrap_or_default(), out),
        Command::Prefix => cmd_prefix(config, &trie, &needle.unwrap_or_default(), out),
        Command::Verify => Ok(cmd_verify(
            config.format,
            config.seed,
            config.r,
            &trie,
            out,
        )?),
        Command::Stats => cmd_stats(config, &trie, out),
        Command::ExportDot => cmd_export_dot(config, &trie, out, err),
        Command::Bench => unreachable!("handled above"),
    }
}

fn required_bytes(arg: &Option<OsString>, flag: &str) -> Result<Vec<u8>, Failure> {
    match arg {
        None => Err(Failure::Usage(format!("{flag} STR is required"))),
        Some(s) if s.is_empty() => Err(Failure::Usage(format!("{flag} must not be empty"))),
        Some(s) => Ok(s.as_encoded_bytes().to_vec()),
    }
}

fn lossy(s: &[u8]) -> String {
    String::from_utf8_lossy(s).into_owned()
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn cmd_build(config: &CliConfig, input: &Path, s: &BuildSummary, out: &mut dyn Write) -> Outcome {
    match config.format {
        Format::Text => writeln!(
            out,
            "built {} strings from {} (lines {}, duplicates {}, empty {}, nodes {}) seed={} r={}",
            s.n,
            input.display(),
            s.lines,
            s.duplicates,
            s.empty_lines,
            s.nodes,
            config.seed,
            config.r
        )?,
        Format::Json => emit_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "build",
                "seed": config.seed,
                "r": config.r,
                "n": s.n,
                "lines": s.lines,
                "duplicates": s.duplicates,
                "empty_lines": s.empty_lines,
                "nodes": s.nodes,
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_query<P>(config: &CliConfig, trie: &RTrie<P>, q: &[u8], out: &mut dyn Write) -> Outcome {
    let path = trie.search_path(q)?;
    match config.format {
        Format::Text => writeln!(out, "{}", if path.found { "found" } else { "not found" })?,
        Format::Json => emit_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "query",
                "seed": config.seed,
                "r": config.r,
                "query": lossy(q),
                "found": path.found,
                "sidesteps": path.sidesteps,
                "depth": path.depth,
            }),
        )?,
    }
    Ok(if path.found { EXIT_OK } else { EXIT_NOT_FOUND })
}

fn cmd_prefix<P>(config: &CliConfig, trie: &RTrie<P>, p: &[u8], out: &mut dyn Write) -> Outcome {
    match config.format {
        Format::Text => {
            for s in trie.prefix_iter(p) {
                out.write_all(&s)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Json => {
            let matches: Vec<String> = trie.prefix_iter(p).map(|s| lossy(&s)).collect();
            emit_json(
                out,
                &json!({
                    "schema": SCHEMA,
                    "command": "prefix",
                    "seed": config.seed,
                    "r": config.r,
                    "prefix": lossy(p),
                    "count": matches.len(),
                    "matches": matches,
                }),
            )?
        }
    }
    Ok(EXIT_OK)
}

/// Runs the invariant checker and reports; exit 2 when anything is broken.
pub fn cmd_verify<P>(
    format: Format,
    seed: u64,
    r: u32,
    trie: &RTrie<P>,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let report: InvariantReport = trie.check_invariants();
    match format {
        Format::Text => {
            if report.is_ok() {
                writeln!(
                    out,
                    "ok: {} strings, {} nodes, no violations",
                    trie.len(),
                    trie.node_count()
                )?;
            } else {
                write!(out, "{report}")?;
            }
        }
        Format::Json => emit_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "verify",
                "seed": seed,
                "r": r,
                "ok": report.is_ok(),
                "n": trie.len(),
                "violations": report.violations,
            }),
        )?,
    }
    Ok(if report.is_ok() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    })
}

fn cmd_stats<P>(config: &CliConfig, trie: &RTrie<P>, out: &mut dyn Write) -> Outcome {
    let profile = stats::profile(trie, trie.iter())?;
    let digest = trie.shape_digest();
    match config.format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "seed: {}", config.seed);
            let _ = writeln!(s, "r: {}", config.r);
            let _ = writeln!(s, "n: {}", profile.n);
            let _ = writeln!(s, "nodes: {}", trie.node_count());
            let _ = writeln!(s, "rotations: {}", trie.rotations());
            let _ = writeln!(s, "max_sidesteps: {}", profile.max_sidesteps);
            let _ = writeln!(s, "mean_sidesteps: {:.4}", profile.mean_sidesteps);
            let _ = writeln!(s, "max_depth: {}", profile.max_depth);
            let _ = writeln!(s, "mean_depth: {:.4}", profile.mean_depth);
            let _ = writeln!(s, "shape_sha256: {}", digest.fingerprint());
            out.write_all(s.as_bytes())?;
        }
        Format::Json => emit_json(
            out,
            &json!({
                "schema": SCHEMA,
                "command": "stats",
                "seed": config.seed,
                "r": config.r,
                "n": profile.n,
                "nodes": trie.node_count(),
                "rotations": trie.rotations(),
                "max_sidesteps": profile.max_sidesteps,
                "mean_sidesteps": profile.mean_sidesteps,
                "max_depth": profile.max_depth,
                "mean_depth": profile.mean_depth,
                "shape_sha256": digest.fingerprint(),
            }),
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_bench(config: &CliConfig, out: &mut dyn Write) -> Outcome {
    let bench = BenchConfig {
        workload: config.workload(),
        mix: OpMix {
            search: true,
            delete: !config.no_delete,
        },
        ceiling: config.r,
        runs: config.runs,
    };
    let report = stats::bench_run(&bench)?;
    match config.format {
        Format::Text => {
            writeln!(
                out,
                "seed: {} r: {} count: {} runs: {}",
                config.seed, config.r, report.count, report.runs
            )?;
            for (name, phase) in [
                ("insert", report.insert),
                ("search", report.search),
                ("delete", report.delete),
            ] {
                writeln!(
                    out,
                    "{name:<7} ops {:>8}  median {:>12} ns  {:>14.0} ops/s",
                    phase.ops, phase.median_ns, phase.ops_per_sec
                )?;
            }
            writeln!(
                out,
                "insert rotations {} (descent sidesteps {}, bound violations {})",
                report.insert_rotations, report.insert_sidesteps, report.insert_bound_violations
            )?;
            writeln!(out, "delete rotations {}", report.delete_rotations)?;
            writeln!(
                out,
                "max_sidesteps {} mean_sidesteps {:.4} final_len {}",
                report.max_sidesteps, report.mean_sidesteps, report.final_len
            )?;
        }
        Format::Json => {
            let mut value = serde_json::to_value(&report).map_err(io::Error::from)?;
            let obj = value
                .as_object_mut()
                .expect("report serializes to an object");
            obj.insert("schema".into(), json!(SCHEMA));
            obj.insert("command".into(), json!("bench"));
            obj.insert("seed".into(), json!(config.seed));
            obj.insert("r".into(), json!(config.r));
            obj.insert(
                "workload".into(),
                serde_json::to_value(&bench.workload).map_err(io::Error::from)?,
            );
            emit_json(out, &value)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_export_dot<P>(
    config: &CliConfig,
    trie: &RTrie<P>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let dot = to_dot(trie);
    match &config.out {
        Some(path) => {
            std::fs::write(path, &dot)
                .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            writeln!(
                err,
                "wrote {} nodes to {}",
                trie.node_count(),
                path.display()
            )?;
        }
        None => out.write_all(dot.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn dot_char(b: u8) -> String {
    match b {
        b'"' => "\\\"".into(),
        b'\\' => "\\\\".into(),
        0x21..=0x7e => (b as char).to_string(),
        _ => format!("\\\\x{b:02x}"),
    }
}

type DotFrame<'a, P> = (NodeRef<'a, P>, Option<(usize, Link)>);

/// Renders the trie as a Graphviz digraph. Nodes are numbered in preorder
/// and labeled `char / prio / strPrio`; terminal nodes get a double border.
pub fn to_dot<P>(trie: &RTrie<P>) -> String {
    let mut s = String::from("digraph rtrie {\n  node [shape=box, fontname=\"monospace\"];\n");
    let mut next = 0usize;
    let mut stack: Vec<DotFrame<'_, P>> = trie.root().into_iter().map(|n| (n, None)).collect();
    while let Some((node, parent)) = stack.pop() {
        let id = next;
        next += 1;
        let _ = write!(
            s,
            "  n{id} [label=\"{} / {} / {}\"",
            dot_char(node.byte()),
            node.prio(),
            node.str_prio()
        );
        if node.is_terminal() {
            s.push_str(", peripheries=2");
        }
        s.push_str("];\n");
        if let Some((p, link)) = parent {
            let _ = writeln!(s, "  n{p} -> n{id} [label=\"{}\"];", link.label());
        }
        for link in [Link::Right, Link::Mid, Link::Left] {
            if let Some(child) = node.child(link) {
                stack.push((child, Some((id, link))));
            }
        }
    }
    s.push_str("}\n");
    s
}
