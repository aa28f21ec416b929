use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use trifree::bounds::{verify, BoundError, BoundReport, VerifyOptions, DEFAULT_K};
use trifree::coloring::{count_3_colorings, CountError, CountOptions, DEFAULT_BUDGET};
use trifree::generators::{perturbed_tower_with_log, Family, GeneratorError, GeneratorSpec};
use trifree::laminar::{dilworth_decompose, extract, LaminarError, LaminarOutcome};
use trifree::plane_graph::{Adjacency, Cycle, GraphError, PlaneGraph};
use trifree::transition::{
    annulus_matrix, chain_matrices, compose, random_chain, verify_product_bound, Classification, PotentialVector,
    TransitionError,
};

const LONG_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (", env!("TRIFREE_BUILD"), ")");

#[derive(Parser)]
#[command(name = "trifree", version, long_version = LONG_VERSION)]
#[command(about = "Count and bound 3-colorings of triangle-free plane graphs")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads used for counting.
    #[arg(long, global = true, default_value_t = 1, value_parser = parse_threads)]
    threads: usize,
    /// Cap on counting search nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in the JSON graph format.
    Generate {
        #[arg(long)]
        family: Family,
        /// Tower height or garden size.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random subdivisions (perturbed towers).
        #[arg(long, default_value_t = 0)]
        ops: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count proper 3-colorings exactly.
    Count { file: PathBuf },
    /// Find a reducible vertex or a laminar family of pentagons.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
    },
    /// Transition matrix between two nested pentagons, or along the
    /// extracted chain when no pentagons are given.
    Transition {
        file: PathBuf,
        /// Outer pentagon as comma-separated vertex names.
        #[arg(long, requires = "inner")]
        outer: Option<String>,
        /// Inner pentagon as comma-separated vertex names.
        #[arg(long, requires = "outer")]
        inner: Option<String>,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
    },
    /// Check the product bound on seeded random dominant/doubling chains.
    MatrixLemma {
        /// Chain length.
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Count colorings and check every lower bound on each input graph.
    VerifyBounds {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_K)]
        k: usize,
    },
}

fn parse_threads(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(t) if (1..=256).contains(&t) => Ok(t),
        _ => Err(format!("expected a thread count in 1..=256, got {s:?}")),
    }
}

enum Failure {
    /// Exit 1.
    Bound,
    /// Exit 2.
    Input { message: String, report: Value },
    /// Exit 3.
    Budget(String),
}

impl Failure {
    fn input(e: impl Display) -> Self {
        let message = e.to_string();
        Failure::Input { report: json!({ "error": "input", "message": message }), message }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input { message: e.to_string(), report: e.report() }
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        match e {
            CountError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            e => Failure::input(e),
        }
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Graph(g) => g.into(),
            e => Failure::input(e),
        }
    }
}

impl From<LaminarError> for Failure {
    fn from(e: LaminarError) -> Self {
        match e {
            LaminarError::Graph(g) => g.into(),
            e => Failure::input(e),
        }
    }
}

impl From<TransitionError> for Failure {
    fn from(e: TransitionError) -> Self {
        match e {
            TransitionError::Count(c) => c.into(),
            TransitionError::Graph(g) => g.into(),
            e => Failure::input(e),
        }
    }
}

impl From<BoundError> for Failure {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::Count(c) => c.into(),
            BoundError::Graph(g) => g.into(),
            BoundError::Laminar(l) => l.into(),
            BoundError::Transition(t) => t.into(),
        }
    }
}

/// Writes a line to stdout, ignoring a closed pipe.
fn out(text: impl Display) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

struct Ctx {
    json: bool,
    count: CountOptions,
}

impl Ctx {
    fn emit(&self, value: &Value, text: impl FnOnce() -> String) {
        if self.json {
            out(serde_json::to_string_pretty(value).expect("json"));
        } else {
            out(text());
        }
    }
}

fn load(path: &Path) -> Result<PlaneGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok(PlaneGraph::from_json(&text)?)
}

fn graph_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn parse_cycle(g: &PlaneGraph, list: &str) -> Result<Cycle, Failure> {
    let seq = list
        .split(',')
        .map(|name| g.vertex(name.trim()).ok_or_else(|| GraphError::UnknownVertex { vertex: name.trim().to_owned() }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cycle::new(g, seq)?)
}

fn generate(ctx: &Ctx, spec: GeneratorSpec, path: Option<&Path>) -> Result<(), Failure> {
    spec.validate()?;
    let (g, log) = match spec.family {
        Family::Perturbed => perturbed_tower_with_log(spec.k, spec.seed, spec.ops),
        _ => (spec.build()?, Vec::new()),
    };
    let Some(path) = path else {
        out(g.to_json());
        return Ok(());
    };
    fs::write(path, g.to_json() + "\n").map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let report = json!({
        "id": spec.id(),
        "family": spec.family.as_str(),
        "k": spec.k,
        "seed": spec.seed,
        "ops": spec.ops,
        "subdivisions": log,
        "n": g.vertex_count(),
        "edges": g.edge_count(),
        "out": path.display().to_string(),
    });
    ctx.emit(&report, || {
        format!("{}: {} vertices, {} edges -> {}", spec.id(), g.vertex_count(), g.edge_count(), path.display())
    });
    Ok(())
}

fn count(ctx: &Ctx, file: &Path) -> Result<(), Failure> {
    let g = load(file)?;
    let r = count_3_colorings(&g, ctx.count)?;
    let count = r.count.to_string();
    let value = match u64::try_from(r.count) {
        Ok(c) => json!(c),
        Err(_) => json!(count),
    };
    let report = json!({ "graph": graph_id(file), "count": value, "budget_used": r.budget_used });
    ctx.emit(&report, || format!("{}: {count} colorings ({} nodes)", graph_id(file), r.budget_used));
    Ok(())
}

fn analyze(ctx: &Ctx, file: &Path, k: usize) -> Result<(), Failure> {
    let g = load(file)?;
    let report = match extract(&g, k)? {
        LaminarOutcome::Reducible { vertex } => json!({
            "outcome": "reducible",
            "vertex": g.name(vertex),
            "family": [],
            "chain": [],
            "antichain": [],
            "k": k,
        }),
        LaminarOutcome::Family { family, .. } => {
            let (chain, antichain) = dilworth_decompose(&g, &family)?;
            json!({
                "outcome": "family",
                "vertex": null,
                "family": family.names(&g),
                "chain": chain.names(&g),
                "antichain": antichain.names(&g),
                "k": k,
            })
        }
    };
    ctx.emit(&report, || match report["outcome"].as_str() {
        Some("reducible") => format!("{}: reducible vertex {} (k = {k})", graph_id(file), report["vertex"]),
        _ => format!(
            "{}: laminar family of {} pentagons, chain {}, antichain {} (k = {k})",
            graph_id(file),
            report["family"].as_array().map_or(0, Vec::len),
            report["chain"].as_array().map_or(0, Vec::len),
            report["antichain"].as_array().map_or(0, Vec::len),
        ),
    });
    Ok(())
}

fn matrix_text(report: &Value) -> String {
    let mut out = format!("{} -> {} ({})", report["rows"], report["cols"], report["classification"]);
    for row in report["entries"].as_array().into_iter().flatten() {
        out.push_str(&format!("\n  {row}"));
    }
    out
}

fn transition(ctx: &Ctx, file: &Path, pair: Option<(&str, &str)>, k: usize) -> Result<(), Failure> {
    let g = load(file)?;
    if let Some((outer, inner)) = pair {
        let (outer, inner) = (parse_cycle(&g, outer)?, parse_cycle(&g, inner)?);
        let m = annulus_matrix(&g, &outer, &inner, ctx.count)?;
        let report = m.matrix.report(&g, Some(m.raw_count));
        ctx.emit(&report, || matrix_text(&report));
        return Ok(());
    }
    let chain = match extract(&g, k)? {
        LaminarOutcome::Family { family, .. } => dilworth_decompose(&g, &family)?.0.cycles,
        LaminarOutcome::Reducible { .. } => Vec::new(),
    };
    let layers = chain_matrices(&g, &chain, ctx.count)?;
    let mats: Vec<_> = layers.iter().map(|l| l.matrix.clone()).collect();
    let composed = match compose(&mats) {
        Ok(m) => m.report(&g, None),
        Err(_) => Value::Null,
    };
    let report = json!({
        "graph": graph_id(file),
        "k": k,
        "chain": chain.iter().map(|c| g.clockwise(c).map(|vs| vs.iter().map(|&v| g.name(v)).collect::<Vec<_>>())).collect::<Result<Vec<_>, _>>()?,
        "layers": layers.iter().map(|l| l.matrix.report(&g, Some(l.raw_count))).collect::<Vec<_>>(),
        "composed": composed,
    });
    ctx.emit(&report, || {
        let mut out = format!("{}: chain of {} pentagons", graph_id(file), chain.len());
        for layer in report["layers"].as_array().into_iter().flatten() {
            out.push('\n');
            out.push_str(&matrix_text(layer));
        }
        out
    });
    Ok(())
}

fn matrix_lemma(ctx: &Ctx, n: usize, seed: u64, trials: usize) -> Result<(), Failure> {
    if n == 0 || n > 10_000 {
        return Err(Failure::input(format!("chain length {n} out of range (1..=10000)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut dominant, mut doubling, mut violations) = (0usize, 0usize, 0usize);
    let mut first_failure = Value::Null;
    for trial in 0..trials {
        let chain = random_chain(&mut rng, n);
        for m in &chain {
            match m.classify() {
                Classification::Doubling | Classification::Both => doubling += 1,
                Classification::Dominant => dominant += 1,
                Classification::Neither => {}
            }
        }
        let r = verify_product_bound(&chain);
        if !r.passed() {
            violations += 1;
            if first_failure.is_null() {
                first_failure = json!({ "trial": trial, "step": r.first_violation, "bound_holds": r.bound_holds });
            }
        }
    }
    let ones = PotentialVector::ones().potential();
    let passed = violations == 0 && ones == 40u32.into();
    let report = json!({
        "seed": seed,
        "n": n,
        "trials": trials,
        "potential_of_ones": ones.to_string(),
        "dominant_steps": dominant,
        "doubling_steps": doubling,
        "violations": violations,
        "first_failure": first_failure,
        "result": if passed { "PASS" } else { "FAIL" },
    });
    ctx.emit(&report, || {
        format!(
            "{}: {trials} chains of length {n} (seed {seed}), {violations} violations",
            if passed { "PASS" } else { "FAIL" }
        )
    });
    if passed {
        Ok(())
    } else {
        Err(Failure::Bound)
    }
}

fn verify_bounds(ctx: &Ctx, files: &[PathBuf], k: usize) -> Result<(), Failure> {
    let opts = VerifyOptions { k, count: ctx.count };
    let mut reports: Vec<BoundReport> = Vec::with_capacity(files.len());
    for file in files {
        let g = load(file)?;
        reports.push(verify(&g, &graph_id(file), opts)?);
    }
    let all = reports.iter().all(|r| r.passed);
    let value = serde_json::to_value(&reports).expect("report serialises");
    ctx.emit(&value, || {
        reports
            .iter()
            .map(|r| {
                format!(
                    "{}: {} n={} count={} outcome={} chain={} antichain={}",
                    r.graph_id,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.n,
                    r.exact_count,
                    r.outcome,
                    r.chain.len(),
                    r.antichain.len(),
                )
            })
            .collect::<Vec<_>>()
            .join("\n")
    });
    if all {
        Ok(())
    } else {
        Err(Failure::Bound)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx { json: cli.json, count: CountOptions { budget: cli.budget, threads: cli.threads } };
    match cli.command {
        Command::Generate { family, k, seed, ops, out } => {
            generate(&ctx, GeneratorSpec::new(family, k, seed, ops), out.as_deref())
        }
        Command::Count { file } => count(&ctx, &file),
        Command::Analyze { file, k } => analyze(&ctx, &file, k),
        Command::Transition { file, outer, inner, k } => {
            transition(&ctx, &file, outer.as_deref().zip(inner.as_deref()), k)
        }
        Command::MatrixLemma { n, seed, trials } => matrix_lemma(&ctx, n, seed, trials),
        Command::VerifyBounds { files, k } => verify_bounds(&ctx, &files, k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Bound) => ExitCode::from(1),
        Err(Failure::Input { message, report }) => {
            eprintln!("error: {message}");
            if json {
                out(report);
            }
            ExitCode::from(2)
        }
        Err(Failure::Budget(message)) => {
            eprintln!("error: {message}");
            if json {
                out(json!({ "error": "budget", "message": message }));
            }
            ExitCode::from(3)
        }
    }
}
