// Copyright 2026 The qforest Authors
// SPDX-License-Identifier: Apache-2.0

//! `qforest`: decide forest and bipartiteness properties, print spectra,
//! generate parity gadgets and export graphs as DOT.
//!
//! Exit status: 0 when the property holds, 10 when it fails, 2 on malformed
//! input or arguments, 1 on any other error.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qforest::ancillary::{bipartite_double, undouble_label, AncillarySpec};
use qforest::gadget::{parity_gadget, parse_bits, GadgetVariant};
use qforest::linalg;
use qforest::search::{Constants, DeciderMode, Problem, ProblemDecider, Witness};
use qforest::sim::DenseOperator;
use qforest::span::{DeltaSpectrum, STProgram};
use qforest::{AdjacencyArray, DecisionReport, Graph, Verdict};

const EXIT_FAILS: u8 = 10;
const EXIT_MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(name = "qforest", version, about = "Simulated quantum forest and bipartiteness testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the input graph is a forest or bipartite.
    Decide(DecideArgs),
    /// Spectrum of the s-t connectivity span program on n vertices.
    Spectrum(SpectrumArgs),
    /// Write a parity-gadget adjacency array.
    Gadget(GadgetArgs),
    /// DOT text of G, its lifted graph H, or the bipartite double H'.
    ExportDot(ExportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Property {
    Forest,
    Bipartite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Matrix,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Sampled,
}

#[derive(Args)]
struct DecideArgs {
    property: Property,
    /// Edge list (`n m` header, then `u v` lines) or adjacency-array JSON; `-` reads stdin.
    input: PathBuf,
    /// Input model; inferred from the input format when omitted.
    #[arg(long, env = "QFOREST_MODEL")]
    model: Option<Model>,
    #[arg(long, env = "QFOREST_SEED", default_value_t = 0)]
    seed: u64,
    /// Target error probability, in (0, 1/2).
    #[arg(long, env = "QFOREST_EPSILON", default_value_t = 0.05)]
    epsilon: f64,
    /// Override a pipeline constant, e.g. `--const lambda=1.25`.
    #[arg(long = "const", value_name = "KEY=VAL", env = "QFOREST_CONST", value_delimiter = ',')]
    consts: Vec<String>,
    /// Exact acceptance marginals or literal majority repetitions.
    #[arg(long, env = "QFOREST_MODE", value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, env = "QFOREST_FORMAT", value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    /// Also write `Delta` as a dense operator text file.
    #[arg(long, value_name = "PATH")]
    dump: Option<PathBuf>,
    #[arg(long, env = "QFOREST_FORMAT", value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Variant {
    CycleTest,
    BipartiteTest,
}

#[derive(Args)]
struct GadgetArgs {
    /// Bit string such as `1011`.
    #[arg(long, conflicts_with_all = ["p", "parity"])]
    bits: Option<String>,
    /// Length of a canonical bit string with the given parity.
    #[arg(long, requires = "parity")]
    p: Option<usize>,
    #[arg(long, requires = "p")]
    parity: Option<Parity>,
    #[arg(long, value_enum, default_value_t = Variant::CycleTest)]
    variant: Variant,
    /// Write a plain edge list instead of the adjacency-array document.
    #[arg(long)]
    edge_list: bool,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    G,
    H,
    HPrime,
}

#[derive(Args)]
struct ExportArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Which::G)]
    graph: Which,
    /// Anchor vertex of the lift.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Residues per vertex in the lift: 3 for cycles, 2 for odd cycles.
    #[arg(long, default_value_t = 3)]
    s_mod: usize,
}

/// Error with its exit status.
struct Failure {
    status: u8,
    error: anyhow::Error,
}

fn malformed(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: EXIT_MALFORMED,
        error: error.into(),
    }
}

fn other(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        status: 1,
        error: error.into(),
    }
}

/// Core errors that describe bad user input rather than a failed run.
fn classify(e: qforest::Error) -> Failure {
    use qforest::Error as E;
    match e {
        E::Parse { .. }
        | E::Malformed(_)
        | E::InvalidEdge(..)
        | E::VertexOutOfRange { .. }
        | E::SlotOutOfRange { .. }
        | E::InvalidParameter(_) => malformed(e),
        _ => other(e),
    }
}

enum Input {
    Edges(Graph),
    Array(AdjacencyArray),
}

impl Input {
    fn graph(&self) -> Result<Graph, Failure> {
        match self {
            Input::Edges(g) => Ok(g.clone()),
            Input::Array(a) => a.to_graph().map_err(classify),
        }
    }
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(malformed)?;
    } else {
        text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(malformed)?;
    }
    if text.trim_start().starts_with('{') {
        let arr = AdjacencyArray::from_json(&text).map_err(classify)?;
        arr.validate().map_err(classify)?;
        Ok(Input::Array(arr))
    } else {
        Graph::parse_edge_list(&text).map(Input::Edges).map_err(classify)
    }
}

fn constants(overrides: &[String]) -> Result<Constants, Failure> {
    let mut c = Constants::default();
    for item in overrides.iter().filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| malformed(anyhow!("constant override `{item}` is not KEY=VAL")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| malformed(anyhow!("constant {k}: `{v}` is not a number")))?;
        c.set(k.trim(), v).map_err(classify)?;
    }
    Ok(c)
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(text: &str) -> Result<(), Failure> {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(other(e)),
        _ => Ok(()),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Forest => "forest".into(),
        Verdict::Bipartite => "bipartite".into(),
        Verdict::HasCycle { k } => format!("has a cycle (found through vertex {k})"),
        Verdict::OddCycle { k } => format!("has an odd cycle (found through vertex {k})"),
    }
}

fn human_report(r: &DecisionReport) -> String {
    let mut out = String::new();
    let problem = match r.problem {
        Problem::Forest => "forest",
        Problem::Bipartite => "bipartite",
    };
    let _ = writeln!(out, "{:<18}{problem}", "problem");
    let _ = writeln!(out, "{:<18}{}", "model", r.model);
    let _ = writeln!(out, "{:<18}{}", "vertices", r.n);
    let _ = writeln!(out, "{:<18}{}", "verdict", verdict_text(&r.verdict));
    match &r.witness {
        Some(Witness::Cycle { cycle }) => {
            let vs: Vec<String> = cycle.vertices.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{:<18}cycle {}", "witness", vs.join("-"));
        }
        Some(Witness::TwoColoring { colors }) => {
            let cs: String = colors.iter().skip(1).map(|c| char::from(b'0' + c)).collect();
            let _ = writeln!(out, "{:<18}2-colouring {cs}", "witness");
        }
        None => {}
    }
    if r.early_reject {
        let _ = writeln!(out, "{:<18}yes (at least n edges)", "early reject");
    }
    let c = &r.counters;
    let _ = writeln!(out, "{:<18}{}", "seed", c.seed);
    let _ = writeln!(out, "{:<18}{}", "queries", c.queries);
    let _ = writeln!(out, "{:<18}{}", "grover iterations", c.grover_iterations);
    let _ = writeln!(out, "{:<18}{}", "walk steps", c.walk_steps);
    let _ = writeln!(out, "{:<18}{}", "base calls", c.base_calls);
    if !r.trace.is_empty() {
        let _ = writeln!(out, "\n{:>3} {:>6} {:>7} {:>10} {:>7} {:>6}", "i", "d", "budget", "iterations", "rounds", "found");
        for t in &r.trace {
            let found = t.found.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:>3} {:>6} {:>7} {:>10} {:>7} {:>6}",
                t.i, t.d, t.budget, t.iterations, t.rounds, found
            );
        }
    }
    out
}

fn cmd_decide(a: &DecideArgs) -> Result<u8, Failure> {
    if !(a.epsilon > 0.0 && a.epsilon < 0.5) {
        return Err(malformed(anyhow!("epsilon {} must lie in (0, 1/2)", a.epsilon)));
    }
    let consts = constants(&a.consts)?;
    let input = read_input(&a.input)?;
    match (a.model, &input) {
        (Some(Model::Matrix), Input::Array(_)) => {
            return Err(malformed(anyhow!("--model matrix needs an edge list, got an adjacency-array document")));
        }
        (Some(Model::Array), Input::Edges(_)) => {
            return Err(malformed(anyhow!("--model array needs an adjacency-array document, got an edge list")));
        }
        _ => {}
    }
    let problem = match a.property {
        Property::Forest => Problem::Forest,
        Property::Bipartite => Problem::Bipartite,
    };
    let decider = match (&input, problem) {
        (Input::Array(arr), Problem::Forest) => ProblemDecider::array(arr, &consts, a.epsilon),
        (Input::Array(_), Problem::Bipartite) => {
            return Err(malformed(anyhow!("bipartiteness is decided in the matrix model; pass an edge list")));
        }
        (Input::Edges(g), p) => ProblemDecider::matrix(g, p, &consts, a.epsilon),
    }
    .map_err(classify)?;
    let mode = match a.mode {
        Mode::Exact => DeciderMode::Exact,
        Mode::Sampled => DeciderMode::Sampled,
    };
    let report = decider.with_mode(mode).run(a.seed).map_err(classify)?;
    match a.format {
        Format::Json => emit(&(serde_json::to_string_pretty(&report).map_err(other)? + "\n"))?,
        Format::Human => emit(&human_report(&report))?,
    }
    Ok(if report.verdict.holds() { 0 } else { EXIT_FAILS })
}

#[derive(Serialize)]
struct SpectrumDoc {
    n: usize,
    alpha: f64,
    /// `(eigenvalue, multiplicity)`.
    groups: Vec<(f64, usize)>,
    gap: f64,
    expected_nonzero: f64,
    smallest_nonzero_singular: f64,
    factorization_residual: f64,
    eigenvalues: Vec<f64>,
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<u8, Failure> {
    if !(3..=12).contains(&a.n) {
        return Err(malformed(anyhow!("n = {} outside 3..=12", a.n)));
    }
    let p = STProgram::new(a.n, 1, a.n, a.alpha).map_err(classify)?;
    let s: DeltaSpectrum = p.delta_spectrum().map_err(classify)?;
    let doc = SpectrumDoc {
        n: s.n,
        alpha: s.alpha,
        groups: s.grouped(1e-9),
        gap: s.gap(),
        expected_nonzero: s.expected_nonzero,
        smallest_nonzero_singular: s.smallest_nonzero_singular,
        factorization_residual: s.factorization_residual,
        eigenvalues: s.eigenvalues.clone(),
    };
    if let Some(path) = &a.dump {
        let mp = p.m_prime();
        let delta = linalg::to_complex(&(&mp * mp.transpose()));
        let labels = (1..=a.n).map(|v| v.to_string()).collect();
        let op = DenseOperator::new(labels, delta).map_err(other)?;
        std::fs::write(path, op.to_text())
            .with_context(|| format!("writing {}", path.display()))
            .map_err(other)?;
    }
    match a.format {
        Format::Json => emit(&(serde_json::to_string_pretty(&doc).map_err(other)? + "\n"))?,
        Format::Human => {
            let mut out = format!("Delta spectrum for n = {}, alpha = {}\n", doc.n, doc.alpha);
            let _ = writeln!(out, "{:>22} {:>12}", "eigenvalue", "multiplicity");
            for (v, k) in &doc.groups {
                let _ = writeln!(out, "{v:>22.15} {k:>12}");
            }
            let _ = writeln!(out, "gap                        {:.15}", doc.gap);
            let _ = writeln!(out, "n/(2(n-1))                 {:.15}", doc.expected_nonzero);
            let _ = writeln!(out, "min nonzero singular(M')   {:.15}", doc.smallest_nonzero_singular);
            let _ = writeln!(out, "max |A^T B - M'|           {:.3e}", doc.factorization_residual);
            emit(&out)?;
        }
    }
    Ok(0)
}

/// Canonical string of length `p`: a single leading one for odd parity, all
/// zeros (or `11` when `p = 2`) for even.
fn canonical_bits(p: usize, parity: Parity) -> Vec<bool> {
    let mut x = vec![false; p];
    match parity {
        Parity::Odd => x[0] = true,
        Parity::Even if p == 2 => x = vec![true, true],
        Parity::Even => {}
    }
    x
}

fn cmd_gadget(a: &GadgetArgs) -> Result<u8, Failure> {
    let x = match (&a.bits, a.p, a.parity) {
        (Some(b), _, _) => parse_bits(b).map_err(classify)?,
        (None, Some(p), Some(par)) if p > 0 => canonical_bits(p, par),
        _ => return Err(malformed(anyhow!("give --bits, or --p with --parity"))),
    };
    let variant = match a.variant {
        Variant::CycleTest => GadgetVariant::CycleTest,
        Variant::BipartiteTest => GadgetVariant::BipartiteTest,
    };
    let arr = parity_gadget(&x, variant).map_err(classify)?;
    let doc = if a.edge_list {
        arr.to_graph().map_err(classify)?.to_edge_list()
    } else {
        arr.to_json() + "\n"
    };
    match &a.output {
        Some(path) => std::fs::write(path, doc)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(other)?,
        None => emit(&doc)?,
    }
    Ok(0)
}

fn cmd_export_dot(a: &ExportArgs) -> Result<u8, Failure> {
    let g = read_input(&a.input)?.graph()?;
    let dot = match a.graph {
        Which::G => g.to_dot("G", |v| v.to_string()),
        Which::H | Which::HPrime => {
            let spec = AncillarySpec::matrix(&g, a.s_mod, a.k, None).map_err(classify)?;
            let h = spec.build_explicit().map_err(classify)?;
            if a.graph == Which::H {
                h.to_dot("H", |v| spec.vertex_at(v).name())
            } else {
                let (d, _, _) = bipartite_double(&h, 1, 2);
                d.to_dot("Hprime", |v| {
                    let (u, side) = undouble_label(v);
                    format!("{}/{side}", spec.vertex_at(u).name())
                })
            }
        }
    };
    emit(&dot)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decide(a) => cmd_decide(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Gadget(a) => cmd_gadget(a),
        Command::ExportDot(a) => cmd_export_dot(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.status)
        }
    }
}
