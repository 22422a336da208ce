//! Command-line surface.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wautom_core::construct::Registry;
use wautom_core::control::{Budget, CancelToken};
use wautom_core::cts::{cts_bisimilarity, BisimilarityMatrix, ConditionLattice, CtsError};
use wautom_core::semiring::{SemiringError, SemiringRef};
use wautom_core::wa::{
    equiv_complete, equiv_upto, language_weight, universality, EquivVerdict, Status, UniversalityVerdict, WaError,
    WeightedAutomaton,
};

use crate::bench::{bench, render_table, BenchConfig};
use crate::dot::export_dot;
use crate::model::{load_model, print_model, CtsModel, Model, ModelError};
use crate::random::{gen_random, RandomSpec};
use crate::workspace::{Workspace, WorkspaceError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_CAPABILITY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "wautom", version, about = "Equivalence, universality and conditional bisimilarity checks")]
pub struct Cli {
    /// Workspace directory holding model files and `wautom.toml`.
    #[arg(long, global = true, default_value = ".")]
    pub workspace: PathBuf,
    /// Maximum worklist steps per analysis.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_STEPS)]
    pub budget: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Language-equivalence partition of all states.
    EquivComplete { model: PathBuf },
    /// Equivalence of two initial row vectors, pruned up to congruence.
    EquivUpto {
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Whether every word weighs at most the threshold (tropical naturals).
    Universality {
        model: PathBuf,
        #[arg(long)]
        initial: String,
        #[arg(long)]
        threshold: u64,
    },
    /// Conditional bisimilarity matrix of a CTS.
    CtsBisim {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Downset)]
        backend: BackendArg,
    },
    /// Weight of one word from one state.
    Weight {
        model: PathBuf,
        #[arg(long)]
        state: String,
        /// Symbols back to back (`ab`), or `.`-separated; `ε` or empty for the empty word.
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Validates a model and prints it in canonical form.
    Check { model: PathBuf },
    /// Writes a seeded random weighted automaton.
    GenRandom(GenArgs),
    /// Runtime percentiles of equiv-complete on random automata.
    Bench(BenchArgs),
    /// GraphViz rendering of a model.
    ExportDot { model: PathBuf },
    /// Manage user-defined semirings.
    #[command(subcommand)]
    Semiring(SemiringCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Downset,
    Bdd,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub semiring: String,
    #[arg(long)]
    pub states: usize,
    #[arg(long = "p-tr", default_value_t = 0.5)]
    pub p_tr: f64,
    #[arg(long, default_value_t = 2)]
    pub alphabet_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub semiring: String,
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 15, 20])]
    pub states: Vec<usize>,
    #[arg(long = "p-tr", default_value_t = 0.5)]
    pub p_tr: f64,
    #[arg(long, default_value_t = 2)]
    pub alphabet_size: usize,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [50.0, 85.0, 90.0, 95.0, 99.0])]
    pub percentiles: Vec<f64>,
    /// Per-run timeout in milliseconds.
    #[arg(long, default_value_t = 60_000)]
    pub timeout_ms: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum SemiringCommand {
    /// Built-in and workspace semirings.
    List,
    /// Downset lattice of a poset file (`@conditions`/`@le`).
    DefineLattice { name: String, poset: PathBuf },
    DefineZmod { name: String, modulus: u64 },
    DefineProduct { name: String, left: String, right: String },
    /// Removes a definition that no model or definition refers to.
    Delete { name: String },
}

/// Everything that ends a command early, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Capability(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Capability(_) => EXIT_CAPABILITY,
            _ => EXIT_INVALID,
        }
    }
}

impl From<WaError> for CliError {
    fn from(e: WaError) -> Self {
        match e {
            WaError::CapabilityMismatch { .. } => CliError::Capability(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<CtsError> for CliError {
    fn from(e: CtsError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SemiringError> for CliError {
    fn from(e: SemiringError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

pub struct Context {
    /// Set by the interrupt handler.
    pub interrupt: CancelToken,
}

struct Output {
    text: String,
    json: serde_json::Value,
    code: i32,
}

impl Output {
    fn new(text: String, json: impl Serialize, code: i32) -> Self {
        Output { text, json: serde_json::to_value(json).expect("reports serialize"), code }
    }
}

/// Runs one command, writing the report to `out` and errors to `err`.
pub fn run(cli: &Cli, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, ctx) {
        Ok(o) => {
            let _ = if cli.json { writeln!(out, "{}", o.json) } else { write!(out, "{}", o.text) };
            o.code
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn budget(cli: &Cli, ctx: &Context) -> Budget {
    Budget::new(cli.budget).with_cancel(ctx.interrupt.clone())
}

fn registry(cli: &Cli) -> Result<Registry, CliError> {
    Ok(Workspace::open(&cli.workspace)?.registry()?)
}

/// Model paths are taken relative to the workspace unless they exist as given.
fn resolve_path(cli: &Cli, p: &Path) -> PathBuf {
    if p.is_absolute() || p.exists() {
        p.to_path_buf()
    } else {
        cli.workspace.join(p)
    }
}

fn load(cli: &Cli, p: &Path) -> Result<Model, CliError> {
    Ok(load_model(&resolve_path(cli, p), &registry(cli)?)?)
}

fn load_wa(cli: &Cli, p: &Path) -> Result<WeightedAutomaton, CliError> {
    match load(cli, p)? {
        Model::Wa(a) => Ok(a),
        Model::Cts(_) => Err(CliError::Invalid(format!("{}: expected a weighted automaton, found a CTS", p.display()))),
    }
}

fn execute(cli: &Cli, ctx: &Context) -> Result<Output, CliError> {
    match &cli.command {
        Command::EquivComplete { model } => cmd_equiv_complete(cli, ctx, model),
        Command::EquivUpto { model, left, right } => cmd_equiv_upto(cli, ctx, model, left, right),
        Command::Universality { model, initial, threshold } => cmd_universality(cli, ctx, model, initial, *threshold),
        Command::CtsBisim { model, backend } => cmd_cts_bisim(cli, model, *backend),
        Command::Weight { model, state, word } => {
            let aut = load_wa(cli, model)?;
            let w = language_weight(&aut, state, word)?;
            let text = aut.semiring().format(&w);
            Ok(Output::new(format!("{text}\n"), serde_json::json!({ "weight": text }), EXIT_OK))
        }
        Command::Check { model } => {
            let m = load(cli, model)?;
            let text = print_model(&m);
            Ok(Output::new(text.clone(), serde_json::json!({ "model": text }), EXIT_OK))
        }
        Command::GenRandom(args) => cmd_gen_random(cli, args),
        Command::Bench(args) => cmd_bench(cli, ctx, args),
        Command::ExportDot { model } => {
            let dot = export_dot(&load(cli, model)?);
            Ok(Output::new(dot.clone(), serde_json::json!({ "dot": dot }), EXIT_OK))
        }
        Command::Semiring(sub) => cmd_semiring(cli, sub),
    }
}

fn block_text(aut: &WeightedAutomaton, block: &[usize]) -> String {
    let names: Vec<&str> = block.iter().map(|&x| aut.states()[x].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

#[derive(Serialize)]
struct BasisJson {
    word: String,
    vector: Vec<String>,
}

fn cmd_equiv_complete(cli: &Cli, ctx: &Context, model: &Path) -> Result<Output, CliError> {
    let aut = load_wa(cli, model)?;
    let sr = aut.semiring().clone();
    let report = equiv_complete(&aut, &budget(cli, ctx))?;
    let (status, code) = match report.status {
        Status::Completed => ("completed", EXIT_OK),
        Status::BudgetExhausted => ("budget exhausted", EXIT_BUDGET),
    };
    let blocks: Vec<String> = report.partition.iter().map(|b| block_text(&aut, b)).collect();
    let mut text = format!("status: {status}\nwords explored: {}\nbasis ({}):\n", report.words_explored, report.basis.len());
    for b in &report.basis {
        text.push_str(&format!("  {}  {}\n", aut.format_word(&b.word), aut.format_vector(&b.vector)));
    }
    let label = if code == EXIT_OK { "partition" } else { "partial partition" };
    text.push_str(&format!("{label}: {}\n", blocks.join(" ")));
    let json = serde_json::json!({
        "status": status,
        "words_explored": report.words_explored,
        "basis": report.basis.iter().map(|b| BasisJson {
            word: aut.format_word(&b.word),
            vector: b.vector.iter().map(|e| sr.format(e)).collect(),
        }).collect::<Vec<_>>(),
        "partition": report.partition.iter().map(|b| b.iter().map(|&x| aut.states()[x].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "eliminations": report.solve_stats.eliminations,
    });
    Ok(Output::new(text, json, code))
}

fn parse_vector(aut: &WeightedAutomaton, text: &str, flag: &str) -> Result<Vec<wautom_core::semiring::Element>, CliError> {
    aut.parse_state_vector(text).map_err(|e| CliError::Invalid(format!("--{flag}: {e}")))
}

fn cmd_equiv_upto(cli: &Cli, ctx: &Context, model: &Path, left: &str, right: &str) -> Result<Output, CliError> {
    let aut = load_wa(cli, model)?;
    let sr = aut.semiring().clone();
    let v1 = parse_vector(&aut, left, "left")?;
    let v2 = parse_vector(&aut, right, "right")?;
    let report = equiv_upto(&aut, &v1, &v2, &budget(cli, ctx))?;
    let (text, json, code) = match &report.verdict {
        EquivVerdict::Equivalent { relation } => (
            format!("EQUIVALENT\nrelation size: {}\n", relation.len()),
            serde_json::json!({ "verdict": "equivalent", "relation_size": relation.len(), "steps": report.steps }),
            EXIT_OK,
        ),
        EquivVerdict::NotEquivalent { witness, left, right } => {
            let w = aut.format_word(witness);
            let (l, r) = (sr.format(left), sr.format(right));
            (
                format!("NOT EQUIVALENT\nwitness: {w}\nleft: {l}\nright: {r}\n"),
                serde_json::json!({ "verdict": "not equivalent", "witness": w, "left": l, "right": r, "steps": report.steps }),
                EXIT_OK,
            )
        }
        EquivVerdict::BudgetExhausted => (
            "BUDGET EXHAUSTED\n".to_string(),
            serde_json::json!({ "verdict": "budget exhausted", "steps": report.steps }),
            EXIT_BUDGET,
        ),
    };
    Ok(Output::new(format!("{text}steps: {}\n", report.steps), json, code))
}

fn cmd_universality(cli: &Cli, ctx: &Context, model: &Path, initial: &str, t: u64) -> Result<Output, CliError> {
    let aut = load_wa(cli, model)?;
    let sr = aut.semiring().clone();
    let v0 = parse_vector(&aut, initial, "initial")?;
    let report = universality(&aut, &v0, t, &budget(cli, ctx))?;
    let explored = report.vectors_explored;
    let (text, json, code) = match &report.verdict {
        UniversalityVerdict::Universal => (
            "UNIVERSAL\n".to_string(),
            serde_json::json!({ "verdict": "universal", "vectors_explored": explored }),
            EXIT_OK,
        ),
        UniversalityVerdict::NotUniversal { witness, .. } => {
            let w = aut.format_word(witness);
            let weight = sr.format(&aut.row_weight(&v0, witness));
            (
                format!("NOT UNIVERSAL\nwitness: {w}\nweight: {weight}\n"),
                serde_json::json!({ "verdict": "not universal", "witness": w, "weight": weight, "vectors_explored": explored }),
                EXIT_OK,
            )
        }
        UniversalityVerdict::BudgetExhausted => (
            "BUDGET EXHAUSTED\n".to_string(),
            serde_json::json!({ "verdict": "budget exhausted", "vectors_explored": explored }),
            EXIT_BUDGET,
        ),
    };
    Ok(Output::new(format!("{text}vectors explored: {explored}\n"), json, code))
}

fn bisim_output<L: ConditionLattice>(m: &CtsModel, lat: &mut L) -> Result<Output, CliError> {
    let cts = m.build(lat)?;
    let BisimilarityMatrix { entries, iterations } = cts_bisimilarity(&cts, lat)?;
    let mut text = format!("backend: {}\niterations: {iterations}\n", lat.backend());
    let mut pairs = Vec::new();
    for x in 0..cts.len() {
        for y in x + 1..cts.len() {
            let set = lat.format(&entries[x][y]);
            text.push_str(&format!("{} ~ {} : {set}\n", m.states[x], m.states[y]));
            pairs.push(serde_json::json!({ "left": m.states[x], "right": m.states[y], "conditions": set }));
        }
    }
    let matrix: Vec<Vec<String>> = entries.iter().map(|row| row.iter().map(|e| lat.format(e)).collect()).collect();
    let json = serde_json::json!({
        "backend": lat.backend().to_string(),
        "iterations": iterations,
        "states": m.states,
        "matrix": matrix,
        "pairs": pairs,
    });
    Ok(Output::new(text, json, EXIT_OK))
}

fn cmd_cts_bisim(cli: &Cli, model: &Path, backend: BackendArg) -> Result<Output, CliError> {
    let m = match load(cli, model)? {
        Model::Cts(m) => m,
        Model::Wa(_) => return Err(CliError::Invalid(format!("{}: expected a CTS, found a weighted automaton", model.display()))),
    };
    match backend {
        BackendArg::Downset => {
            let mut lat = m.explicit_lattice().map_err(|e| CliError::Capability(format!("downset backend: {e}")))?;
            bisim_output(&m, &mut lat)
        }
        BackendArg::Bdd => {
            let mut lat = m.bdd_lattice().ok_or_else(|| {
                CliError::Capability("the bdd backend needs a feature model (@features/@upgrades)".to_string())
            })?;
            bisim_output(&m, &mut lat)
        }
    }
}

fn resolve_semiring(cli: &Cli, name: &str) -> Result<SemiringRef, CliError> {
    Ok(registry(cli)?.resolve(name)?)
}

fn cmd_gen_random(cli: &Cli, args: &GenArgs) -> Result<Output, CliError> {
    if !(0.0..=1.0).contains(&args.p_tr) || args.alphabet_size == 0 {
        return Err(CliError::Invalid("--p-tr must lie in [0,1] and --alphabet-size be at least 1".to_string()));
    }
    let sr = resolve_semiring(cli, &args.semiring)?;
    let spec = RandomSpec {
        states: args.states,
        transition_probability: args.p_tr,
        alphabet_size: args.alphabet_size,
        seed: args.seed,
    };
    let text = print_model(&Model::Wa(gen_random(&spec, sr)));
    match &args.out {
        Some(path) => {
            let path = resolve_path(cli, path);
            std::fs::write(&path, &text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let msg = format!("wrote {}\n", path.display());
            Ok(Output::new(msg, serde_json::json!({ "path": path.display().to_string() }), EXIT_OK))
        }
        None => Ok(Output::new(text.clone(), serde_json::json!({ "model": text }), EXIT_OK)),
    }
}

fn cmd_bench(cli: &Cli, ctx: &Context, args: &BenchArgs) -> Result<Output, CliError> {
    if !(0.0..=1.0).contains(&args.p_tr) || args.alphabet_size == 0 || args.runs == 0 {
        return Err(CliError::Invalid("--p-tr must lie in [0,1]; --alphabet-size and --runs must be positive".into()));
    }
    if args.percentiles.iter().any(|p| !(0.0..=100.0).contains(p)) {
        return Err(CliError::Invalid("percentiles must lie in [0,100]".into()));
    }
    let sr = resolve_semiring(cli, &args.semiring)?;
    let config = BenchConfig {
        states: args.states.clone(),
        transition_probability: args.p_tr,
        alphabet_size: args.alphabet_size,
        runs: args.runs,
        percentiles: args.percentiles.clone(),
        timeout: Duration::from_millis(args.timeout_ms),
        seed: args.seed,
    };
    let report = bench(sr, &config, &ctx.interrupt)?;
    let code = if report.interrupted { EXIT_BUDGET } else { EXIT_OK };
    Ok(Output::new(render_table(&report), &report, code))
}

fn cmd_semiring(cli: &Cli, sub: &SemiringCommand) -> Result<Output, CliError> {
    let mut ws = Workspace::open(&cli.workspace)?;
    let done = |msg: String| Ok(Output::new(format!("{msg}\n"), serde_json::json!({ "message": msg }), EXIT_OK));
    match sub {
        SemiringCommand::List => {
            ws.refresh_references()?;
            let reg = ws.registry()?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for name in Registry::with_builtins().names() {
                let caps = reg.resolve(name)?.capabilities();
                text.push_str(&format!("{name}  built-in  {}\n", caps_text(&caps)));
                rows.push(serde_json::json!({ "name": name, "builtin": true, "capabilities": caps_text(&caps) }));
            }
            for def in &ws.manifest().semirings {
                let caps = reg.resolve(&def.name)?.capabilities();
                text.push_str(&format!(
                    "{}  {:?}  {}  references: {}\n",
                    def.name,
                    def.kind,
                    caps_text(&caps),
                    def.references
                ));
                rows.push(serde_json::json!({
                    "name": def.name, "builtin": false, "capabilities": caps_text(&caps), "references": def.references,
                }));
            }
            text.push_str("parametric: latticez(lo,hi) zmod(q) product(s1,s2) fractions(d)\n");
            Ok(Output::new(text, rows, EXIT_OK))
        }
        SemiringCommand::DefineLattice { name, poset } => {
            let path = resolve_path(cli, poset);
            let text =
                std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            let sr = ws.define_lattice(name, &text)?;
            done(format!("defined {name}: {}", sr.name()))
        }
        SemiringCommand::DefineZmod { name, modulus } => {
            ws.define_zmod(name, *modulus)?;
            done(format!("defined {name}: zmod({modulus})"))
        }
        SemiringCommand::DefineProduct { name, left, right } => {
            ws.define_product(name, left, right)?;
            done(format!("defined {name}: product({left},{right})"))
        }
        SemiringCommand::Delete { name } => {
            ws.delete(name)?;
            done(format!("deleted {name}"))
        }
    }
}

fn caps_text(c: &wautom_core::semiring::Capabilities) -> String {
    let flags = [
        (c.is_ring, "ring"),
        (c.is_field, "field"),
        (c.is_lattice, "lattice"),
        (c.is_l_monoid, "l-monoid"),
        (c.has_residuation, "residuated"),
        (c.is_finite, "finite"),
        (c.is_tropical_nat, "tropical"),
    ];
    let on: Vec<&str> = flags.iter().filter(|f| f.0).map(|f| f.1).collect();
    if on.is_empty() {
        "-".to_string()
    } else {
        on.join(",")
    }
}
