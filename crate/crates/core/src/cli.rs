//! Command-line front end: `compute`, `verify`, `generate` and `bench`.
//!
//! Exit codes: 0 ok, 1 input error, 2 invariant or bound violation,
//! 3 oracle mismatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{run_esim, CheckLevel, EngineConfig, RunOutput};
use crate::instrument::{
    assert_block_bound, assert_remove_disjointness, assert_smaller_half_bound, ceil_log2, RunStats,
};
use crate::kripke::{
    generate_chain, generate_clique, generate_random_ks, generate_tree, parse_ks, KripkeStructure,
    StateId,
};
use crate::oracle::{compare_with_oracle, ORACLE_MAX_STATES};
use crate::prcore::SimulationResult;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "simpart",
    version,
    about = "Simulation preorder and simulation equivalence on Kripke structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the simulation partition and its order.
    Compute(ComputeArgs),
    /// Compare the engine with the brute-force oracle.
    Verify(VerifyArgs),
    /// Print a generated structure in the text format.
    Generate(GenerateArgs),
    /// Run every structure in a directory and check the counter laws.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Off,
    Cheap,
    Full,
}

impl From<Check> for CheckLevel {
    fn from(c: Check) -> Self {
        match c {
            Check::Off => CheckLevel::Off,
            Check::Cheap => CheckLevel::Cheap,
            Check::Full => CheckLevel::Full,
        }
    }
}

#[derive(Args, Debug)]
struct ComputeArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include run counters in the report.
    #[arg(long)]
    stats: bool,
    #[arg(long, value_enum, default_value_t = Check::Off)]
    check: Check,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    /// Number of random structures to check.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 8)]
    max_states: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Flip one order entry before comparing, to see the harness fail.
    #[arg(long, hide = true)]
    mutate: bool,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GenerateKind,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum GenerateKind {
    /// `n` states, each labelled with one of `labels` atoms, every ordered
    /// pair an edge with probability `p`.
    Random { n: usize, labels: usize, p: f64 },
    /// `0 -> 1 -> ... -> n-1`.
    Chain { n: usize },
    /// Complete `branching`-ary tree of the given depth, edges towards the
    /// leaves.
    Tree { depth: usize, branching: usize },
    /// All edges between distinct states.
    Clique { n: usize },
}

#[derive(Args, Debug)]
struct BenchArgs {
    dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

/// The report printed by `compute`.
#[derive(Debug, Serialize)]
pub struct OutputReport {
    /// Blocks ordered by smallest member.
    pub partition: Vec<Vec<StateId>>,
    /// Non-diagonal pairs `(i, j)` with block `i` below block `j`.
    pub order: Vec<(usize, usize)>,
    pub stats: Option<RunStats>,
}

impl OutputReport {
    pub fn new(result: &SimulationResult, stats: Option<RunStats>) -> Self {
        OutputReport {
            partition: result.partition.clone(),
            order: result.order_pairs(),
            stats,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, block) in self.partition.iter().enumerate() {
            let members: Vec<String> = block.iter().map(|x| x.to_string()).collect();
            writeln!(s, "block {i}: {{{}}}", members.join(", ")).unwrap();
        }
        for (i, j) in &self.order {
            writeln!(s, "order: {i} ⊴ {j}").unwrap();
        }
        if let Some(stats) = &self.stats {
            s.push_str(&stats.to_key_value());
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Runs the CLI on the process arguments.
pub fn main() -> i32 {
    run_with(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Compute(a) => compute(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Generate(a) => generate(&a, out),
        Command::Bench(a) => bench(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "simpart: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .map_err(|e| fail(EXIT_INPUT, format!("cannot write output: {e}")))
}

fn load(path: &Path) -> Result<KripkeStructure, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot open {}: {e}", path.display())))?;
    parse_ks(&text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn run(ks: &KripkeStructure, cfg: EngineConfig) -> Result<RunOutput, Failure> {
    run_esim(ks, cfg).map_err(|e| fail(EXIT_VIOLATION, e.to_string()))
}

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let ks = load(&a.file)?;
    let cfg = EngineConfig {
        check_level: a.check.into(),
        stats_enabled: a.stats,
    };
    let output = run(&ks, cfg)?;
    let report = OutputReport::new(&output.result, a.stats.then_some(output.stats));
    let text = match a.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

/// Parameters of the `i`-th structure of a random verification corpus.
pub fn random_instance(i: usize, max_states: usize, seed: u64) -> KripkeStructure {
    const PROBS: [f64; 3] = [0.1, 0.3, 0.6];
    let inst_seed = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
    let n = 1 + i % max_states;
    let p = PROBS[(i / max_states) % 3];
    let labels = 1 + (i / (3 * max_states)) % 3;
    generate_random_ks(n, labels, p, inst_seed)
}

enum Verdict {
    Pass,
    Mismatch(StateId, StateId, bool),
    Violation(String),
}

fn verify_one(ks: &KripkeStructure, mutate: bool) -> Verdict {
    let mut result = match run_esim(
        ks,
        EngineConfig {
            check_level: CheckLevel::Cheap,
            stats_enabled: false,
        },
    ) {
        Ok(o) => o.result,
        Err(e) => return Verdict::Violation(e.to_string()),
    };
    if mutate {
        let n = result.num_blocks();
        let leq = result.leq_mut();
        let (i, j) = if n > 1 { (0, 1) } else { (0, 0) };
        leq[i][j] = !leq[i][j];
    }
    match compare_with_oracle(ks, &result) {
        None => Verdict::Pass,
        Some((s, t)) => Verdict::Mismatch(s, t, result.simulated_by(s, t)),
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let instances: Vec<(String, KripkeStructure)> = match (&a.file, a.random) {
        (Some(path), _) => vec![(path.display().to_string(), load(path)?)],
        (None, Some(count)) => {
            if a.max_states == 0 || a.max_states > ORACLE_MAX_STATES {
                return Err(fail(
                    EXIT_INPUT,
                    format!("--max-states must lie in 1..={ORACLE_MAX_STATES}"),
                ));
            }
            (0..count)
                .map(|i| {
                    (
                        format!("instance {i}"),
                        random_instance(i, a.max_states, a.seed),
                    )
                })
                .collect()
        }
        (None, None) => return Err(fail(EXIT_INPUT, "give a file or --random <count>")),
    };
    if let Some((name, ks)) = instances
        .iter()
        .find(|(_, ks)| ks.num_states() > ORACLE_MAX_STATES)
    {
        return Err(fail(
            EXIT_INPUT,
            format!(
                "{name} has {} states; the oracle accepts at most {ORACLE_MAX_STATES}",
                ks.num_states()
            ),
        ));
    }
    let verdicts: Vec<Verdict> = instances
        .par_iter()
        .map(|(_, ks)| verify_one(ks, a.mutate))
        .collect();

    let mut text = String::new();
    let mut code = EXIT_OK;
    let mut passed = 0;
    for ((name, _), v) in instances.iter().zip(&verdicts) {
        match v {
            Verdict::Pass => passed += 1,
            Verdict::Mismatch(s, t, engine) => {
                let (e, o) = if *engine {
                    ("holds", "does not")
                } else {
                    ("does not hold", "does")
                };
                writeln!(
                    text,
                    "{name}: mismatch at ({s}, {t}): engine says {s} ≤ {t} {e}, oracle says it {o}"
                )
                .unwrap();
                code = EXIT_MISMATCH;
            }
            Verdict::Violation(msg) => {
                writeln!(text, "{name}: {msg}").unwrap();
                if code == EXIT_OK {
                    code = EXIT_VIOLATION;
                }
            }
        }
    }
    writeln!(text, "verified {passed}/{} instances", instances.len()).unwrap();
    write_out(out, &text)?;
    Ok(code)
}

/// Number of states of a complete tree, if it fits a state id.
fn tree_size(depth: usize, branching: usize) -> Option<usize> {
    let (mut n, mut level) = (1usize, 1usize);
    for _ in 0..depth {
        level = level.checked_mul(branching)?;
        n = n.checked_add(level)?;
    }
    (n <= u32::MAX as usize).then_some(n)
}

fn generate(a: &GenerateArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let need_states = |n: usize| {
        if n == 0 || n > u32::MAX as usize {
            Err(fail(EXIT_INPUT, format!("state count {n} is out of range")))
        } else {
            Ok(())
        }
    };
    let ks = match a.kind {
        GenerateKind::Random { n, labels, p } => {
            need_states(n)?;
            if labels == 0 {
                return Err(fail(EXIT_INPUT, "need at least one label"));
            }
            if !(0.0..=1.0).contains(&p) {
                return Err(fail(
                    EXIT_INPUT,
                    format!("edge probability {p} is outside [0, 1]"),
                ));
            }
            generate_random_ks(n, labels, p, a.seed)
        }
        GenerateKind::Chain { n } => {
            need_states(n)?;
            generate_chain(n)
        }
        GenerateKind::Tree { depth, branching } => {
            if tree_size(depth, branching).is_none() {
                return Err(fail(EXIT_INPUT, "tree is too large"));
            }
            generate_tree(depth, branching)
        }
        GenerateKind::Clique { n } => {
            need_states(n)?;
            generate_clique(n)
        }
    };
    write_out(out, &ks.to_text())?;
    Ok(EXIT_OK)
}

/// One row of the `bench` table.
#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub states: usize,
    pub transitions: usize,
    pub initial_blocks: usize,
    pub sim_blocks: usize,
    pub splits: u64,
    pub new_blocks: u64,
    pub block_law: bool,
    pub max_scans: u32,
    pub scan_bound: u32,
    pub smaller_half_law: bool,
    pub remove_disjoint: bool,
    pub null_once: bool,
    pub millis: f64,
}

impl BenchRow {
    pub fn passes(&self) -> bool {
        self.block_law && self.smaller_half_law && self.remove_disjoint && self.null_once
    }
}

/// Runs one structure with counters on and evaluates the laws.
pub fn bench_row(name: String, ks: &KripkeStructure) -> Result<BenchRow, String> {
    let start = Instant::now();
    let o = run_esim(ks, EngineConfig::checked(CheckLevel::Off)).map_err(|e| e.to_string())?;
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let n = ks.num_states();
    Ok(BenchRow {
        name,
        states: n,
        transitions: ks.num_transitions(),
        initial_blocks: o.initial_blocks,
        sim_blocks: o.result.num_blocks(),
        splits: o.stats.splits_total,
        new_blocks: o.stats.new_blocks_total,
        block_law: assert_block_bound(&o.stats, o.initial_blocks, o.result.num_blocks()),
        max_scans: o.stats.max_smaller_half_scans(),
        scan_bound: ceil_log2(n),
        smaller_half_law: assert_smaller_half_bound(&o.stats, n),
        remove_disjoint: assert_remove_disjointness(&o.remove_trace),
        null_once: o.stats.findprefiner_null_returns <= 1,
        millis,
    })
}

const BENCH_HEADER: &str =
    "name\tstates\ttransitions\tP_l\tP_sim\tsplits\tnew_blocks\tblock_law\tmax_scans\tlog2_bound\thalf_law\tdisjoint\tnull_once\tms";

fn bench(a: &BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let entries = std::fs::read_dir(&a.dir)
        .map_err(|e| fail(EXIT_INPUT, format!("cannot open {}: {e}", a.dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    let mut corpus = Vec::with_capacity(paths.len());
    for p in &paths {
        let name = p
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        corpus.push((name, load(p)?));
    }
    let mut rows = Vec::with_capacity(corpus.len());
    for (name, ks) in corpus {
        rows.push(bench_row(name, &ks).map_err(|e| fail(EXIT_VIOLATION, e))?);
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Text => {
            let mut s = String::from(BENCH_HEADER);
            s.push('\n');
            for r in &rows {
                writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
                    r.name,
                    r.states,
                    r.transitions,
                    r.initial_blocks,
                    r.sim_blocks,
                    r.splits,
                    r.new_blocks,
                    pass(r.block_law),
                    r.max_scans,
                    r.scan_bound,
                    pass(r.smaller_half_law),
                    pass(r.remove_disjoint),
                    pass(r.null_once),
                    r.millis
                )
                .unwrap();
            }
            s
        }
    };
    write_out(out, &text)?;
    Ok(if rows.iter().all(BenchRow::passes) {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}
