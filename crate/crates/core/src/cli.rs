//! Command-line front end: `learn`, `infer`, `score` and `generate-rps`.
//!
//! Exit codes: 0 success, 1 input or validation failure, 2 hypothesis
//! generation produced nothing to search over.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::hypgen::{generate_length_one, GenConfig};
use crate::inference::{query_probability, KnowledgeBase, DEFAULT_DEPTH_BOUND};
use crate::logic::{Atom, Theory};
use crate::metrics::Score;
use crate::program::{parse_clauses, parse_examples, parse_program, validate, ProbExample, Program};
use crate::rps::{self, Rounds};
use crate::search::{skill_learn, EvalMetric, LearnReport, PruneMode, RankMetric, SearchConfig, SearchError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_GENERATION_EMPTY: i32 = 2;

/// First line of the trailing section that holds timestamps, worker count
/// and timings; everything above it is reproducible from the manifest.
pub const RUN_SECTION: &str = "[run]";

#[derive(Parser, Debug)]
#[command(name = "skill", version, about = "Stochastic inductive logic learner")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Learn a theory from background knowledge and examples.
    Learn(LearnArgs),
    /// Print query probabilities under a program and theory.
    Infer(InferArgs),
    /// Score a theory against examples.
    Score(ScoreArgs),
    /// Write a synthetic rock-paper-scissors dataset.
    #[command(name = "generate-rps", alias = "rps-datagen")]
    GenerateRps(RpsArgs),
}

#[derive(Args, Debug, Clone)]
pub struct LearnArgs {
    #[arg(long)]
    pub pbk: PathBuf,
    #[arg(long)]
    pub pex: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub max_theory_length: usize,
    #[arg(long, default_value_t = 20)]
    pub psize: usize,
    #[arg(long, default_value_t = 200)]
    pub ssize: usize,
    #[arg(long, default_value = "pacc")]
    pub rank_metric: RankMetric,
    #[arg(long, default_value = "pacc")]
    pub eval_metric: EvalMetric,
    #[arg(long, default_value = "both")]
    pub prune: PruneMode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DEPTH_BOUND)]
    pub depth_bound: usize,
    #[arg(long, default_value_t = 3)]
    pub max_body_literals: usize,
    #[arg(long, default_value_t = 2)]
    pub max_var_depth: usize,
    /// Do not fill `#type` markers with constants.
    #[arg(long)]
    pub no_constants: bool,
    /// Write the generated single-clause hypotheses here, one per line.
    #[arg(long)]
    pub dump_hyps: Option<PathBuf>,
    /// Worker threads for scoring; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// Report the square root of the mean squared loss as rmse.
    #[arg(long)]
    pub sqrt_rmse: bool,
}

#[derive(Args, Debug, Clone)]
pub struct InferArgs {
    #[arg(long)]
    pub pbk: PathBuf,
    /// Theory file (clauses); omit for the background knowledge alone.
    #[arg(long)]
    pub theory: Option<PathBuf>,
    /// A ground query atom; repeatable.
    #[arg(long = "query")]
    pub queries: Vec<String>,
    /// Take queries from an examples file.
    #[arg(long)]
    pub pex: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_DEPTH_BOUND)]
    pub depth_bound: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ScoreArgs {
    #[arg(long)]
    pub pbk: PathBuf,
    #[arg(long)]
    pub theory: Option<PathBuf>,
    #[arg(long)]
    pub pex: PathBuf,
    #[arg(long, default_value_t = DEFAULT_DEPTH_BOUND)]
    pub depth_bound: usize,
    #[arg(long)]
    pub sqrt_rmse: bool,
}

#[derive(Args, Debug, Clone)]
pub struct RpsArgs {
    #[arg(long, default_value_t = 3)]
    pub players: usize,
    #[arg(long, default_value_t = 10, conflicts_with = "total_rounds")]
    pub rounds_per_pair: usize,
    #[arg(long)]
    pub total_rounds: Option<usize>,
    /// Emit analytic win probabilities instead of simulated frequencies.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_pbk: PathBuf,
    #[arg(long)]
    pub out_pex: PathBuf,
}

/// Everything needed to replay a learn run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub pbk: String,
    pub pex: String,
    pub generation: GenConfig,
    pub search: SearchConfig,
    pub sqrt_rmse: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load_program(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))
}

fn load_examples(path: &Path) -> Result<Vec<ProbExample>, Failure> {
    parse_examples(&read(path)?).map_err(|e| Failure::invalid(format!("{}:{e}", path.display())))
}

fn load_theory(path: Option<&Path>) -> Result<Theory, Failure> {
    match path {
        None => Ok(Theory::empty()),
        Some(p) => {
            let cs = parse_clauses(&read(p)?).map_err(|e| Failure::invalid(format!("{}:{e}", p.display())))?;
            Ok(Theory::from_clauses(&cs))
        }
    }
}

fn compile(p: &Program) -> Result<KnowledgeBase, Failure> {
    KnowledgeBase::new(p).map_err(|e| Failure::invalid(e.to_string()))
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Formats with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.1}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::invalid(format!("cannot start workers: {e}")))
}

/// Renders the text report. The `[run]` section at the end carries the
/// only non-reproducible lines.
pub fn render_report(manifest: &RunManifest, report: &LearnReport, run: &RunInfo) -> String {
    let mut s = String::from("# skill learn report\n\n[manifest]\n");
    let g = &manifest.generation;
    let c = &manifest.search;
    let lines = [
        ("tool_version", manifest.tool_version.clone()),
        ("pbk", manifest.pbk.clone()),
        ("pex", manifest.pex.clone()),
        ("max_theory_length", c.max_theory_length.to_string()),
        ("psize", c.psize.to_string()),
        ("ssize", c.ssize.to_string()),
        ("rank_metric", c.rank_metric.to_string()),
        ("eval_metric", c.eval_metric.to_string()),
        ("prune", c.prune_mode.to_string()),
        ("seed", c.seed.to_string()),
        ("depth_bound", c.depth_bound.to_string()),
        ("max_body_literals", g.max_body_literals.to_string()),
        ("max_var_depth", g.max_var_depth.to_string()),
        ("allow_constants", g.allow_constants.to_string()),
        ("sqrt_rmse", manifest.sqrt_rmse.to_string()),
        ("rng", report.rng_algorithm.clone()),
    ];
    for (k, v) in lines {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s.push('\n');
    report.render_body(&mut s, manifest.sqrt_rmse);
    s.push('\n');
    s.push_str(RUN_SECTION);
    s.push('\n');
    s.push_str(&format!("started_unix = {:.3}\n", run.started_unix));
    s.push_str(&format!("finished_unix = {:.3}\n", run.finished_unix));
    s.push_str(&format!("workers = {}\n", run.workers));
    report.render_timing(&mut s);
    s
}

/// The reproducible part of a rendered report.
pub fn report_body(report: &str) -> &str {
    match report.find(&format!("\n{RUN_SECTION}\n")) {
        Some(i) => &report[..i + 1],
        None => report,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunInfo {
    pub started_unix: f64,
    pub finished_unix: f64,
    pub workers: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    manifest: &'a RunManifest,
    report: &'a LearnReport,
    timing: &'a crate::search::TimingReport,
    run: &'a RunInfo,
}

fn cmd_learn(args: &LearnArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let started_unix = unix_now();
    let prog = load_program(&args.pbk)?;
    let examples = load_examples(&args.pex)?;
    let diags = validate(&prog, &examples);
    if !diags.is_empty() {
        let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
        return Err(Failure::invalid(text.join("\n")));
    }
    let gen_cfg = GenConfig {
        max_body_literals: args.max_body_literals,
        max_var_depth: args.max_var_depth,
        allow_constants: !args.no_constants,
    };
    let search_cfg = SearchConfig {
        max_theory_length: args.max_theory_length,
        psize: args.psize,
        ssize: args.ssize,
        rank_metric: args.rank_metric,
        eval_metric: args.eval_metric,
        prune_mode: args.prune,
        seed: args.seed,
        depth_bound: args.depth_bound,
    };
    let workers = pool(args.workers)?;
    if let Some(path) = &args.dump_hyps {
        let kb = compile(&prog)?;
        let g = workers
            .install(|| generate_length_one(&kb, &prog, &examples, &gen_cfg, search_cfg.depth_bound))
            .map_err(|e| Failure::invalid(e.to_string()))?;
        let text: String = g.clauses.iter().map(|c| format!("{c}\n")).collect();
        write_file(path, &text)?;
    }
    let outcome = workers.install(|| skill_learn(&prog, &examples, &gen_cfg, &search_cfg)).map_err(|e| match e {
        SearchError::GenerationEmpty => Failure { code: EXIT_GENERATION_EMPTY, message: e.to_string() },
        other => Failure::invalid(other.to_string()),
    })?;
    if outcome.report.truncated_theories > 0 {
        let _ = writeln!(
            err,
            "warning: {} theories hit the depth bound {}; their probabilities are lower bounds",
            outcome.report.truncated_theories, search_cfg.depth_bound
        );
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        pbk: args.pbk.display().to_string(),
        pex: args.pex.display().to_string(),
        generation: gen_cfg,
        search: search_cfg,
        sqrt_rmse: args.sqrt_rmse,
    };
    let run = RunInfo { started_unix, finished_unix: unix_now(), workers: workers.current_num_threads() };
    let text = if args.json {
        let j = JsonReport { manifest: &manifest, report: &outcome.report, timing: &outcome.report.timing, run: &run };
        serde_json::to_string_pretty(&j).map_err(|e| Failure::invalid(e.to_string()))? + "\n"
    } else {
        render_report(&manifest, &outcome.report, &run)
    };
    match &args.report {
        Some(path) => {
            write_file(path, &text)?;
            for c in outcome.best.theory.clauses() {
                let _ = writeln!(out, "{c}");
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(())
}

fn parse_query(text: &str) -> Result<Atom, Failure> {
    let trimmed = text.trim().trim_end_matches('.');
    let mut cs = parse_clauses(&format!("{trimmed}.")).map_err(|e| Failure::invalid(format!("query `{text}`: {e}")))?;
    match (cs.len(), cs.pop()) {
        (1, Some(c)) if c.body.is_empty() && c.head.is_ground() => Ok(c.head),
        _ => Err(Failure::invalid(format!("query `{text}` must be a single ground atom"))),
    }
}

fn cmd_infer(args: &InferArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let prog = load_program(&args.pbk)?;
    let theory = load_theory(args.theory.as_deref())?;
    let mut queries = Vec::new();
    for q in &args.queries {
        queries.push(parse_query(q)?);
    }
    if let Some(p) = &args.pex {
        queries.extend(load_examples(p)?.into_iter().map(|e| e.atom));
    }
    if queries.is_empty() {
        return Err(Failure::invalid("no queries given (use --query or --pex)"));
    }
    let kb = compile(&prog)?;
    for q in &queries {
        let r = query_probability(&kb, &theory, q, args.depth_bound);
        let _ = writeln!(out, "{q}\t{}", format_significant(r.probability, 12));
        if r.truncated {
            let _ = writeln!(
                err,
                "warning: proof search for {q} truncated at depth {}; value is a lower bound",
                args.depth_bound
            );
        }
    }
    Ok(())
}

fn cmd_score(args: &ScoreArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let prog = load_program(&args.pbk)?;
    let theory = load_theory(args.theory.as_deref())?;
    let examples = load_examples(&args.pex)?;
    if examples.is_empty() {
        return Err(Failure::invalid("no examples"));
    }
    let kb = compile(&prog)?;
    let scored = crate::search::score_theory(&kb, &examples, theory, args.depth_bound)
        .map_err(|e| Failure::invalid(e.to_string()))?;
    if scored.truncated {
        let _ = writeln!(err, "warning: some proof searches were truncated at depth {}", args.depth_bound);
    }
    let Score { rmse, pacc, confusion } = scored.score;
    let rmse = if args.sqrt_rmse { rmse.sqrt() } else { rmse };
    let _ = writeln!(out, "rmse\t{}", format_significant(rmse, 12));
    let _ = writeln!(out, "pacc\t{}", format_significant(pacc, 12));
    let _ = writeln!(out, "tp\t{}", format_significant(confusion.tp, 12));
    let _ = writeln!(out, "tn\t{}", format_significant(confusion.tn, 12));
    let _ = writeln!(out, "fp\t{}", format_significant(confusion.fp, 12));
    let _ = writeln!(out, "fn\t{}", format_significant(confusion.fn_, 12));
    Ok(())
}

fn cmd_generate_rps(args: &RpsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let rounds = match args.total_rounds {
        Some(n) => Rounds::Total(n),
        None => Rounds::PerPair(args.rounds_per_pair),
    };
    let data =
        rps::generate(args.players, rounds, args.exact, args.seed).map_err(|e| Failure::invalid(e.to_string()))?;
    write_file(&args.out_pbk, &data.pbk)?;
    write_file(&args.out_pex, &data.pex)?;
    let _ = writeln!(
        out,
        "wrote {} players to {} and {} examples to {}",
        data.profiles.len(),
        args.out_pbk.display(),
        data.examples.len(),
        args.out_pex.display()
    );
    Ok(())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Learn(a) => cmd_learn(a, out, err),
        Command::Infer(a) => cmd_infer(a, out, err),
        Command::Score(a) => cmd_score(a, out, err),
        Command::GenerateRps(a) => cmd_generate_rps(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
