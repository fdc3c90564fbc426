//! `cdim`: centraliser dimension, lattices, vertex extensions and words of
//! graph groups from the command line.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use cdim_core::centraliser::{block_decomposition, centraliser_of_element, root};
use cdim_core::extension::{ExtensionContext, DEFAULT_CAP};
use cdim_core::scan::{self, Check, Summary, DEFAULT_SAMPLES, DEFAULT_SEED};
use cdim_core::{
    build_lattice, classify_extension, parse_graph, CommutationGraph, Error, Family, GraphFormat, NormalForm,
};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "cdim", version, about = "Centraliser dimension of graph groups")]
struct Cli {
    /// Input graph format.
    #[arg(long, global = true, default_value = "edges")]
    format: String,
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Centraliser dimension.
    Cdim { file: PathBuf },
    /// A longest centraliser chain with its generator witness.
    Chain { file: PathBuf },
    /// Hasse diagram of the canonical lattice in DOT.
    Lattice {
        file: PathBuf,
        /// Write the DOT here instead of stdout.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Change in dimension when a vertex is deleted.
    Delta {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        /// Show witnesses and the locked/tied data behind the clause.
        #[arg(long)]
        explain: bool,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Word operations. Words are tokens `name` or `name^-1`.
    Word {
        #[command(subcommand)]
        op: WordOp,
    },
    /// Check a property over small graphs.
    Scan {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random graphs per size above the exhaustive range.
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Write a graph from a named family.
    Family {
        kind: String,
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum WordOp {
    Normalize { file: PathBuf, word: String },
    Equal { file: PathBuf, u: String, v: String },
    Centralizer { file: PathBuf, word: String },
    Root { file: PathBuf, word: String },
    Blocks { file: PathBuf, word: String },
    Cyclic { file: PathBuf, word: String },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 4,
            Failure::Lib(Error::Capacity(_)) => 3,
            Failure::Lib(
                Error::Parse { .. }
                | Error::SelfLoop(_)
                | Error::DuplicateVertex(_)
                | Error::InvalidName(_)
                | Error::UnknownVertex(_)
                | Error::UnknownFormat(_)
                | Error::EmptyGraph
                | Error::BadToken(_),
            ) => 2,
            Failure::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "{e}"),
        }
    }
}

type Outcome = Result<(), Failure>;

/// What a command produced: text for humans, a JSON result for `--json`.
struct Output {
    command: &'static str,
    digest: String,
    text: String,
    result: Value,
    warnings: Vec<String>,
}

impl Output {
    fn emit(self, as_json: bool) {
        if as_json {
            let envelope = json!({
                "command": self.command,
                "input_digest": self.digest,
                "result": self.result,
                "warnings": self.warnings,
            });
            println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
        } else {
            for w in &self.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", self.text);
        }
    }
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

struct Input {
    graph: CommutationGraph,
    digest: String,
}

fn load(path: &Path, format: GraphFormat) -> Result<Input, Failure> {
    let bytes = read_input(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Lib(Error::Parse { line: 0, message: "input is not UTF-8".into() }))?;
    Ok(Input { graph: parse_graph(&text, format)?, digest: digest(&bytes) })
}

fn word(graph: &Arc<CommutationGraph>, text: &str) -> Result<NormalForm, Failure> {
    Ok(NormalForm::parse(graph, text)?)
}

fn cmd_cdim(input: Input) -> Output {
    let g = &input.graph;
    let lattice = build_lattice(g);
    let d = lattice.height();
    let edges: Vec<[&str; 2]> = g.edges().into_iter().map(|(u, v)| [g.name(u), g.name(v)]).collect();
    Output {
        command: "cdim",
        digest: input.digest,
        text: format!("cdim = {d}\n"),
        result: json!({
            "vertices": g.names(),
            "edges": edges,
            "cdim": d,
            "center": g.set_names(g.center_bits()),
        }),
        warnings: Vec::new(),
    }
}

fn cmd_chain(input: Input) -> Output {
    let g = &input.graph;
    let chain = build_lattice(g).max_chain();
    let witness: Vec<&str> = chain.witness.iter().map(|&v| g.name(v)).collect();
    let mut text = format!("cdim = {}\nwitness: {}\n", chain.witness.len(), witness.join(" "));
    for s in &chain.sets {
        text.push_str(&format!("  {}\n", g.format_set(*s)));
    }
    let sets: Vec<Vec<String>> = chain.sets.iter().map(|s| g.set_names(*s)).collect();
    Output {
        command: "chain",
        digest: input.digest,
        text,
        result: json!({ "cdim": chain.witness.len(), "witness": witness, "chain": sets }),
        warnings: Vec::new(),
    }
}

fn cmd_lattice(input: Input, dot: Option<&Path>) -> Result<Output, Failure> {
    let g = &input.graph;
    let lattice = build_lattice(g);
    let rendered = lattice.to_dot();
    let mut text = String::new();
    match dot {
        Some(path) => {
            write_output(path, &rendered)?;
            text.push_str(&format!(
                "{} elements, {} covering edges, height {}\nwrote {}\n",
                lattice.len(),
                lattice.edge_count(),
                lattice.height(),
                path.display()
            ));
        }
        None => text.push_str(&rendered),
    }
    let nodes: Vec<Vec<String>> = lattice.carriers().iter().map(|s| g.set_names(*s)).collect();
    let edges: Vec<[usize; 2]> =
        (0..lattice.len()).flat_map(|i| lattice.lower_covers(i).iter().map(move |&j| [i, j])).collect();
    Ok(Output {
        command: "lattice",
        digest: input.digest,
        text,
        result: json!({ "nodes": nodes, "edges": edges, "height": lattice.height() }),
        warnings: Vec::new(),
    })
}

fn cmd_delta(input: Input, vertex: &str, explain: bool, cap: usize) -> Result<Output, Failure> {
    let g = &input.graph;
    let x = g.vertex(vertex)?;
    let ctx = ExtensionContext::new(g, x)?;
    let gx = ctx.gx();
    let r = classify_extension(g, x, cap)?;
    let mut warnings = Vec::new();
    if !r.witnesses_complete {
        warnings.push(format!("witness search stopped at {cap} systems; clause evidence may be incomplete"));
    }
    if !r.consistent {
        warnings.push(format!(
            "literal clauses predict delta {} but delta is {}; with T2 permitted they predict {}",
            r.evidence.predicted_delta(),
            r.delta,
            r.evidence_t2_permitted.predicted_delta()
        ));
    }
    let clause = serde_json::to_value(r.clause).unwrap();
    let clause_name = clause.as_str().unwrap_or_default().to_string();
    let mut text = format!(
        "delta = {} (cdim {} -> {} without {vertex})\nclause: {clause_name}\nquick checks: {}\n",
        r.delta,
        r.cdim_g,
        r.cdim_gx,
        display_list(&r.quick_checks.labels())
    );
    let mut result = json!({
        "vertex": vertex,
        "cdim_g": r.cdim_g,
        "cdim_gx": r.cdim_gx,
        "delta": r.delta,
        "clause": clause,
        "evidence": r.evidence,
        "evidence_t2_permitted": r.evidence_t2_permitted,
        "consistent": r.consistent,
        "consistent_t2_permitted": r.consistent_t2_permitted,
        "quick_checks": r.quick_checks.labels(),
        "quick_check_2b_set": r.quick_checks.c2b.map(|s| g.set_names(s)),
    });
    if explain {
        text.push_str(&format!("Y = {}, W = {}\n", gx.format_set(ctx.y()), gx.format_set(ctx.w())));
        let mut witnesses = Vec::new();
        for w in &r.witnesses {
            let seq: Vec<&str> = w.system.sequence.iter().map(|&v| gx.name(v)).collect();
            let wclause = serde_json::to_value(w.clause).unwrap();
            let lock = w.report.locked.map(|l| json!({ "l": l.l, "keys": gx.set_names(l.keys) }));
            let tie = w.report.tied.map(|t| json!({ "k": t.k, "types": t.types.labels() }));
            text.push_str(&format!(
                "witness ({}): {}",
                wclause.as_str().unwrap_or_default(),
                if seq.is_empty() { "(empty)".to_string() } else { seq.join(" ") }
            ));
            if let Some(l) = w.report.locked {
                text.push_str(&format!("; locked at l={} keys {}", l.l, gx.format_set(l.keys)));
            }
            if let Some(t) = w.report.tied {
                text.push_str(&format!("; tied at k={} {}", t.k, t.types.labels().join("+")));
            }
            text.push('\n');
            witnesses.push(json!({ "clause": wclause, "system": seq, "locked": lock, "tied": tie }));
        }
        result["witnesses"] = Value::from(witnesses);
        result["y"] = json!(gx.set_names(ctx.y()));
        result["w"] = json!(gx.set_names(ctx.w()));
    }
    Ok(Output { command: "delta", digest: input.digest, text, result, warnings })
}

fn display_list(items: &[&str]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(", ")
    }
}

fn cmd_word(op: WordOp, format: GraphFormat) -> Result<Output, Failure> {
    let (file, words): (&Path, Vec<&str>) = match &op {
        WordOp::Normalize { file, word }
        | WordOp::Centralizer { file, word }
        | WordOp::Root { file, word }
        | WordOp::Blocks { file, word }
        | WordOp::Cyclic { file, word } => (file, vec![word.as_str()]),
        WordOp::Equal { file, u, v } => (file, vec![u.as_str(), v.as_str()]),
    };
    let input = load(file, format)?;
    let graph = Arc::new(input.graph);
    let w = word(&graph, words[0])?;
    let (text, result) = match &op {
        WordOp::Normalize { .. } => (format!("{w}\n"), json!({ "normal_form": w.to_string(), "length": w.len() })),
        WordOp::Equal { .. } => {
            let v = word(&graph, words[1])?;
            let eq = w == v;
            (format!("{eq}\n"), json!({ "equal": eq, "u": w.to_string(), "v": v.to_string() }))
        }
        WordOp::Centralizer { .. } => {
            let s = centraliser_of_element(&w).summary();
            let text = if s.whole_group {
                "whole group\n".to_string()
            } else {
                let parts: Vec<String> = s.roots.iter().zip(&s.exponents).map(|(r, e)| format!("[{r}]^{e}")).collect();
                format!(
                    "conjugator: {}\nroots: {}\nabelianizing: {{{}}}\n",
                    s.conjugator,
                    parts.join(", "),
                    s.abelianizing.join(",")
                )
            };
            (text, serde_json::to_value(&s).unwrap())
        }
        WordOp::Root { .. } => {
            let (r, m) = root(&w)?;
            (format!("{r} ^ {m}\n"), json!({ "root": r.to_string(), "exponent": m }))
        }
        WordOp::Blocks { .. } => {
            let d = block_decomposition(&w);
            let blocks: Vec<String> = d.blocks.iter().map(|b| b.to_string()).collect();
            let mut text = format!("conjugator: {}\n", d.conjugator);
            for b in &blocks {
                text.push_str(&format!("block: {b}\n"));
            }
            (text, json!({ "conjugator": d.conjugator.to_string(), "blocks": blocks }))
        }
        WordOp::Cyclic { .. } => {
            let (u, v) = w.cyclic_reduce();
            let perms: Vec<String> = v.cyclic_permutations()?.iter().map(|p| p.to_string()).collect();
            let mut text = format!("conjugator: {u}\ncyclically minimal: {v}\n");
            for p in &perms {
                text.push_str(&format!("permutation: {p}\n"));
            }
            (
                text,
                json!({
                    "conjugator": u.to_string(),
                    "cyclically_minimal": v.to_string(),
                    "input_was_minimal": w.is_cyclically_minimal(),
                    "permutations": perms,
                }),
            )
        }
    };
    Ok(Output { command: "word", digest: input.digest, text, result, warnings: Vec::new() })
}

fn cmd_scan(max_n: usize, check: &str, seed: u64, samples: usize) -> Result<Output, Failure> {
    let check: Check = check.parse()?;
    let graphs = scan::scan_graphs(max_n, seed, samples)?;
    // par_iter on a Vec keeps input order in collect.
    let outcomes = graphs.par_iter().map(|g| scan::check_graph(check, g)).collect::<Result<Vec<_>, Error>>()?;
    let summary = Summary::collect(graphs.iter().zip(outcomes));
    let mut text = format!(
        "check {} up to n = {max_n}, seed {seed}\n{} graphs, {} counterexamples\n",
        check.name(),
        summary.graphs,
        summary.counterexamples.len()
    );
    for (d, count) in &summary.histogram {
        text.push_str(&format!("  cdim {d}: {count}\n"));
    }
    for (g, why) in summary.counterexamples.iter().take(10) {
        text.push_str(&format!("counterexample: {why}\n{}", g.to_edge_list()));
    }
    let args = format!("scan --max-n {max_n} --check {} --seed {seed} --samples {samples}", check.name());
    let counterexamples: Vec<Value> =
        summary.counterexamples.iter().map(|(g, why)| json!({ "graph": g.to_edge_list(), "violation": why })).collect();
    let histogram: serde_json::Map<String, Value> =
        summary.histogram.iter().map(|(d, c)| (d.to_string(), json!(c))).collect();
    Ok(Output {
        command: "scan",
        digest: digest(args.as_bytes()),
        text,
        result: json!({
            "check": check.name(),
            "max_n": max_n,
            "seed": seed,
            "samples": samples,
            "graphs": summary.graphs,
            "counterexamples": counterexamples,
            "histogram": histogram,
        }),
        warnings: Vec::new(),
    })
}

fn cmd_family(kind: &str, n: usize, out: Option<&Path>) -> Result<Output, Failure> {
    let family: Family = kind.parse()?;
    let g = CommutationGraph::family(family, n)?;
    let body = g.to_edge_list();
    let text = match out {
        Some(path) => {
            write_output(path, &body)?;
            format!("wrote {} ({} vertices, {} edges)\n", path.display(), g.len(), g.edge_count())
        }
        None => body.clone(),
    };
    Ok(Output {
        command: "family",
        digest: digest(body.as_bytes()),
        text,
        result: json!({ "kind": kind, "n": n, "edges": g.edge_count(), "graph": body }),
        warnings: Vec::new(),
    })
}

fn run(cli: Cli) -> Result<Output, Failure> {
    let format: GraphFormat = cli.format.parse()?;
    match cli.command {
        Command::Cdim { file } => Ok(cmd_cdim(load(&file, format)?)),
        Command::Chain { file } => Ok(cmd_chain(load(&file, format)?)),
        Command::Lattice { file, dot } => cmd_lattice(load(&file, format)?, dot.as_deref()),
        Command::Delta { file, vertex, explain, cap } => cmd_delta(load(&file, format)?, &vertex, explain, cap),
        Command::Word { op } => cmd_word(op, format),
        Command::Scan { max_n, check, seed, samples } => cmd_scan(max_n, &check, seed, samples),
        Command::Family { kind, n, out } => cmd_family(&kind, n, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok(out) => {
            out.emit(as_json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
