//! The `probabs` command.
//!
//! Exit codes: 0 success, 1 diagnostics (unreadable file, parse or
//! validation error, unsupported model shape), 2 internal error, 3 the
//! checked abstraction is not information-preserving.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use probabs_core::abstraction::{
    check_data_independent, check_info_preserving, cubes, wp_abs, AbstractionError, IpReport, Partition,
    PredicateSet, Witness,
};
use probabs_core::lang::{
    parse_expectation, parse_model, parse_predicate, parse_query, validate_model, Model, Opt, Pred, QueryKind, Severity,
    StmtKind,
};
use probabs_core::mdp::{
    expected_reward_with, extract_mdp, pbounded, pbounded_curve, quotient_mdp, Mdp, MdpError, RewardStructure,
    DEFAULT_ACTION_CAP, DEFAULT_MAX_SWEEPS, DEFAULT_RESIDUAL,
};
use probabs_core::rabin::{
    abstract_mdp, check_invariants, run_queries, simulate, truncated_mdp, truncated_reward_bounds, Convention,
    Init, RabinError, Scheduler, DEFAULT_STATE_LIMIT,
};
use probabs_core::rational::{one, to_f64};
use probabs_core::semantics::{
    enumerate_states, eval_pred, Expectation, SemanticsError, StateSpace, Transformer, DEFAULT_FUEL,
};
use probabs_core::Rational;
use serde_json::{json, Value as Json};

use crate::config::{Format, RunConfig};
use crate::json;
use crate::preds::parse_preds;
use crate::prism;
use crate::table::{convention_name, curve_csv, rounds_table, sig12, values_csv};

#[derive(Debug, Parser)]
#[command(name = "probabs", version, about = "Expectation transformers, predicate abstraction and MDP model checking for pGCL")]
pub struct Cli {
    /// Output format. Defaults to csv for curves and json otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Bound on Kleene iterations per loop.
    #[arg(long, global = true, default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
    /// Residual at which floating value iteration stops.
    #[arg(long, global = true, default_value_t = DEFAULT_RESIDUAL)]
    pub residual: f64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weakest pre-expectation of the model's program.
    Wp(WpArgs),
    /// Information-preservation checks.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Model-check a loop-form model, one loop iteration per MDP step.
    Mc(McArgs),
    /// Rabin's choice-coordination case study.
    #[command(subcommand)]
    Rabin(RabinCommand),
    /// Write the MDP of a loop-form model as JSON, and optionally as PRISM explicit files.
    ExportMdp(ExportArgs),
}

#[derive(Debug, Args)]
pub struct WpArgs {
    pub model: PathBuf,
    /// Post-expectation, e.g. "[x = 1]" or "1/2 * [x < 2] + [y = 0]".
    pub expectation: String,
    /// Cube the result with respect to the predicates in this file.
    #[arg(long = "abstract", value_name = "PREDS")]
    pub abstract_: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Is the abstraction induced by a predicates file information-preserving?
    /// For `do G -> body od` the loop body is checked.
    Ip { model: PathBuf, preds: PathBuf },
    /// Is the program data independent (preserves every `x = y` and `x < y`)?
    Di { model: PathBuf },
}

#[derive(Debug, Args)]
pub struct McArgs {
    pub model: PathBuf,
    /// `Pmin=? [true U<=T (pred)]`, `Pmax=? [...]`, `Rmin=? [F (pred)]` or `Rmax=? [F (pred)]`.
    pub query: String,
    /// Check the quotient by the cubes of these predicates instead.
    #[arg(long, value_name = "PREDS")]
    pub quotient: Option<PathBuf>,
    /// Sweep horizons 0..=T of a bounded query and emit `T,pmin,pmax`.
    /// pmin is the least Pmin over the initial states, pmax the largest Pmax.
    #[arg(long, value_name = "T")]
    pub curve: Option<u64>,
    /// Restrict the initial states to those satisfying this predicate.
    #[arg(long, value_name = "PRED")]
    pub init: Option<String>,
    #[arg(long, default_value_t = DEFAULT_ACTION_CAP)]
    pub action_cap: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: u64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub model: PathBuf,
    #[arg(long, value_name = "PREDS")]
    pub quotient: Option<PathBuf>,
    /// Also write `PREFIX.tra` and `PREFIX.lab`.
    #[arg(long, value_name = "PREFIX")]
    pub prism: Option<PathBuf>,
    /// Write the JSON document here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ACTION_CAP)]
    pub action_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Step,
    Sweep,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Step => Convention::Step,
            ConventionArg::Sweep => Convention::Sweep,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Conventions {
    Step,
    Sweep,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchedulerArg {
    Uniform,
    RoundRobin,
    Adversarial,
    /// Cycle through the three schedulers, one per trace.
    Mixed,
}

#[derive(Debug, Args)]
pub struct Population {
    /// Number of tourists; every split between the two places is an initial state.
    #[arg(long, required_unless_present = "split", conflicts_with = "split")]
    pub n: Option<u32>,
    /// A single initial split `A,B`.
    #[arg(long, value_parser = parse_split)]
    pub split: Option<(u32, u32)>,
    /// What one unit of reward counts: one served tourist, or one round.
    #[arg(long, value_enum, default_value = "step")]
    pub convention: ConventionArg,
    #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
    pub state_limit: usize,
}

impl Population {
    fn init(&self) -> Init {
        match (self.split, self.n) {
            (Some((a, b)), _) => Init::Split(a, b),
            (None, n) => Init::AllSplits(n.unwrap_or(0)),
        }
    }

    fn record(&self, cfg: RunConfig) -> RunConfig {
        let cfg = match (self.split, self.n) {
            (Some((a, b)), _) => cfg.option("split", format!("{a},{b}")),
            (None, n) => cfg.option("n", n.unwrap_or(0)),
        };
        cfg.option("convention", convention_name(self.convention.into())).option("state_limit", self.state_limit)
    }
}

fn parse_split(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

#[derive(Debug, Subcommand)]
pub enum RabinCommand {
    /// Simulate the concrete algorithm and check its invariants on every trace.
    Simulate {
        #[command(flatten)]
        pop: Population,
        #[arg(long, default_value_t = 1)]
        traces: u64,
        #[arg(long, value_enum, default_value = "mixed")]
        scheduler: SchedulerArg,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
        /// Write every visited state as one JSON line.
        #[arg(long, value_name = "FILE")]
        trace_out: Option<PathBuf>,
    },
    /// Concrete MDP with numbers capped; bounded queries are exact for cap >= 3T+3.
    Truncated {
        #[command(flatten)]
        pop: Population,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
        /// Largest representable number; defaults to 3T+3.
        #[arg(long)]
        cap: Option<u32>,
        /// Also compute expected rounds, counting overflow as free termination
        /// (lower bounds on the concrete values).
        #[arg(long)]
        rewards: bool,
    },
    /// Finite abstraction that keeps boards and notepads only relative to each other.
    Abstract {
        #[command(flatten)]
        pop: Population,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
        /// Write the abstract MDP as JSON.
        #[arg(long, value_name = "FILE")]
        export: Option<PathBuf>,
    },
    /// Termination curve and expected-rounds table, with a truncated cross-check.
    #[command(name = "queries", alias = "paper-queries")]
    Queries {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 20)]
        t_max: u64,
        #[arg(long, value_enum, default_value = "both")]
        convention: Conventions,
        /// Board cap of the truncated model used for the reward cross-check.
        #[arg(long, default_value_t = 33)]
        cap: u32,
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
}

/// Why a command did not produce a result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Diagnostic(String),
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Diagnostic(_) => 1,
            Failure::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Diagnostic(m) | Failure::Internal(m) => m,
        }
    }
}

fn diag(msg: impl Into<String>) -> Failure {
    Failure::Diagnostic(msg.into())
}

impl From<RabinError> for Failure {
    fn from(e: RabinError) -> Self {
        match e {
            RabinError::StateLimit(_) | RabinError::CapTooSmall(_) => diag(e.to_string()),
            RabinError::Invariant(_) | RabinError::Mdp(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        diag(e.to_string())
    }
}

impl From<AbstractionError> for Failure {
    fn from(e: AbstractionError) -> Self {
        diag(e.to_string())
    }
}

impl From<MdpError> for Failure {
    fn from(e: MdpError) -> Self {
        diag(e.to_string())
    }
}

/// A finished run: what to print and the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub warnings: Vec<String>,
    pub code: i32,
}

struct Ctx {
    format: Option<Format>,
    fuel: u64,
    residual: f64,
    seed: u64,
    warnings: Vec<String>,
}

impl Ctx {
    fn config(&self, command: &str, default: Format) -> RunConfig {
        RunConfig::new(command, self.format.unwrap_or(default), self.fuel, self.residual, self.seed)
    }

    fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| diag(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

fn load_model(ctx: &mut Ctx, path: &Path) -> Result<(Model, StateSpace), Failure> {
    let text = read(path)?;
    let model = parse_model(&text).map_err(|e| diag(format!("{}:{e}", path.display())))?;
    let mut errors = Vec::new();
    for d in validate_model(&model) {
        let line = format!("{}:{d}", path.display());
        match d.severity {
            Severity::Error => errors.push(line),
            Severity::Warning => ctx.warn(line),
        }
    }
    if !errors.is_empty() {
        return Err(diag(errors.join("\n")));
    }
    let space = enumerate_states(&model.decls).map_err(|e| diag(format!("{}: {e}", path.display())))?;
    Ok((model, space))
}

fn load_preds(path: &Path) -> Result<PredicateSet, Failure> {
    parse_preds(&read(path)?).map_err(|e| diag(format!("{}: {e}", path.display())))
}

fn bits(pred: &Pred, space: &StateSpace) -> Result<Vec<bool>, Failure> {
    (0..space.len())
        .map(|s| eval_pred(pred, space, &space.valuation(s)).map_err(|e| diag(format!("`{pred}` at {}: {e}", space.describe(s)))))
        .collect()
}

fn render(cfg: &RunConfig, result: Json) -> String {
    let mut s = serde_json::to_string_pretty(&json::document(cfg, result)).expect("serializable");
    s.push('\n');
    s
}

fn no_csv(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.format == Format::Csv {
        return Err(diag(format!("`{}` has no csv output", cfg.command)));
    }
    Ok(())
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Outcome, Failure> {
    let mut ctx = Ctx { format: cli.format, fuel: cli.fuel, residual: cli.residual, seed: cli.seed, warnings: Vec::new() };
    let (stdout, code) = match cli.command {
        Command::Wp(a) => cmd_wp(&mut ctx, a)?,
        Command::Check(c) => cmd_check(&mut ctx, c)?,
        Command::Mc(a) => cmd_mc(&mut ctx, a)?,
        Command::Rabin(r) => cmd_rabin(&mut ctx, r)?,
        Command::ExportMdp(a) => cmd_export(&mut ctx, a)?,
    };
    Ok(Outcome { stdout, warnings: ctx.warnings, code })
}

/// Parses `args`, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            print!("{}", out.stdout);
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

fn cmd_wp(ctx: &mut Ctx, a: WpArgs) -> Result<(String, i32), Failure> {
    let mut cfg = ctx.config("wp", Format::Json).input(&a.model).option("expectation", &a.expectation);
    let (model, space) = load_model(ctx, &a.model)?;
    let expr = parse_expectation(&a.expectation).map_err(|e| diag(format!("expectation: {e}")))?;
    let post = Expectation::eval(&expr, &space).map_err(|e| diag(format!("expectation: {e}")))?;
    let t = Transformer::new(&space).with_fuel(ctx.fuel);
    let mut result = json!({ "program": model.program.to_string(), "post": expr.to_string() });
    let values = match &a.abstract_ {
        Some(p) => {
            cfg = cfg.input(p);
            let phi = load_preds(p)?;
            let part = cubes(&phi, &space).map_err(|e| diag(format!("{}: {e}", p.display())))?;
            result["predicates"] = json!(phi.iter().map(|p| p.text.clone()).collect::<Vec<_>>());
            wp_abs(&t, &model.program, &post, &part)?
        }
        None => t.wp(&model.program, &post)?,
    };
    result["abstract"] = json!(a.abstract_.is_some());
    result["values"] = json::expectation(&space, &values);
    let out = match cfg.format {
        Format::Json => render(&cfg, result),
        Format::Csv => values_csv((0..space.len()).map(|s| (space.describe(s), values[s].to_string())), ["state", "value"]),
        Format::Text => (0..space.len()).fold(String::new(), |mut o, s| {
            writeln!(o, "{}: {}", space.describe(s), values[s]).unwrap();
            o
        }),
    };
    Ok((out, 0))
}

fn ip_text(r: &IpReport) -> String {
    let mut o = String::new();
    writeln!(o, "verdict: {}", if r.verdict.is_preserving() { "preserving" } else { "not preserving" }).unwrap();
    writeln!(o, "cubes: {}", r.cube_count).unwrap();
    for (i, c) in r.components.iter().enumerate() {
        let v = if c.verdict.is_preserving() { "preserving" } else { "not preserving" };
        writeln!(o, "component {i}: {v}: {}", c.program).unwrap();
    }
    if let Some((i, w)) = r.witness() {
        match w {
            Witness::Predicate { text, .. } => writeln!(o, "witness: component {i}, wp of [{text}] is not cubed").unwrap(),
            Witness::Cube { signature, .. } => {
                let sig: String = signature.iter().map(|&b| if b { 'T' } else { 'F' }).collect();
                writeln!(o, "witness: component {i}, wp of cube {sig} is not cubed").unwrap()
            }
        }
        for d in w.differing() {
            writeln!(o, "  {}: wp = {}, cubed = {}", d.valuation, d.wp, d.cubed).unwrap();
        }
    }
    o
}

fn cmd_check(ctx: &mut Ctx, c: CheckCommand) -> Result<(String, i32), Failure> {
    let (model_path, preds_path) = match &c {
        CheckCommand::Ip { model, preds } => (model, Some(preds)),
        CheckCommand::Di { model } => (model, None),
    };
    let name = if preds_path.is_some() { "check ip" } else { "check di" };
    let mut cfg = ctx.config(name, Format::Json).input(model_path);
    no_csv(&cfg)?;
    let (model, space) = load_model(ctx, model_path)?;
    let (prog, guard) = match &model.program.kind {
        StmtKind::Loop(g, body) => (body.as_ref(), Some(g)),
        _ => (&model.program, None),
    };
    let t = Transformer::new(&space).with_fuel(ctx.fuel);
    let (report, phi) = match preds_path {
        Some(p) => {
            cfg = cfg.input(p);
            let phi = load_preds(p)?;
            (check_info_preserving(&t, prog, &phi)?, Some(phi))
        }
        None => (check_data_independent(&t, prog)?, None),
    };
    let mut result = json::ip_report(&report);
    result["checked"] = json!(if guard.is_some() { "loop body" } else { "program" });
    if let (Some(g), Some(phi)) = (guard, &phi) {
        let part = cubes(phi, &space).map_err(|e| diag(e.to_string()))?;
        let respected = part.respects(&bits(g, &space)?);
        result["guard_respected"] = json!(respected);
        if !respected {
            ctx.warn(format!("warning: loop guard `{g}` is not a union of cubes; the quotient need not be exact"));
        }
    }
    let code = if report.verdict.is_preserving() { 0 } else { 3 };
    let out = match cfg.format {
        Format::Text => ip_text(&report),
        _ => render(&cfg, result),
    };
    Ok((out, code))
}

/// The MDP to check, with state names and the program-state-to-MDP-state map.
struct Checked {
    mdp: Mdp,
    names: Vec<String>,
    block_of: Vec<usize>,
}

fn build(ctx: &mut Ctx, model: &Model, space: &StateSpace, quotient: Option<&Path>, cap: usize) -> Result<Checked, Failure> {
    let concrete = extract_mdp(model, space, cap)?;
    let n = concrete.len();
    let Some(p) = quotient else {
        let names = (0..n).map(|s| if s < space.len() { space.describe(s) } else { "abort".into() }).collect();
        return Ok(Checked { mdp: concrete, names, block_of: (0..n).collect() });
    };
    let phi = load_preds(p)?;
    let part: Partition = cubes(&phi, space).map_err(|e| diag(format!("{}: {e}", p.display())))?;
    if let StmtKind::Loop(g, _) = &model.program.kind {
        if !part.respects(&bits(g, space)?) {
            ctx.warn(format!("warning: loop guard `{g}` is not a union of cubes"));
        }
    }
    let mut block_of = part.assignment().to_vec();
    let mut names: Vec<String> = part
        .cubes()
        .iter()
        .map(|c| format!("{{{}}}", c.states.iter().map(|&s| space.describe(s)).collect::<Vec<_>>().join(" ")))
        .collect();
    if n > space.len() {
        block_of.push(part.len());
        names.push("abort".into());
    }
    let mdp = quotient_mdp(&concrete, &block_of, names.len())?.with_names(names.clone());
    Ok(Checked { mdp, names, block_of })
}

fn lift(ctx: &mut Ctx, c: &Checked, concrete: &[bool], what: &str) -> Vec<bool> {
    let mut lifted = vec![true; c.names.len()];
    let mut any = vec![false; c.names.len()];
    for (s, &b) in concrete.iter().enumerate() {
        lifted[c.block_of[s]] &= b;
        any[c.block_of[s]] |= b;
    }
    if lifted != any {
        ctx.warn(format!("warning: {what} is not a union of cubes; a block satisfies it only if all its states do"));
    }
    lifted
}

fn cmd_mc(ctx: &mut Ctx, a: McArgs) -> Result<(String, i32), Failure> {
    let default = if a.curve.is_some() { Format::Csv } else { Format::Json };
    let mut cfg = ctx.config("mc", default).input(&a.model).option("query", &a.query).option("action_cap", a.action_cap);
    cfg = cfg.option("max_sweeps", a.max_sweeps);
    if let Some(t) = a.curve {
        cfg = cfg.option("curve", t);
    }
    if let Some(i) = &a.init {
        cfg = cfg.option("init", i);
    }
    if let Some(q) = &a.quotient {
        cfg = cfg.input(q);
    }
    let (model, space) = load_model(ctx, &a.model)?;
    let query = parse_query(&a.query).map_err(|e| diag(format!("query: {e}")))?;
    let checked = build(ctx, &model, &space, a.quotient.as_deref(), a.action_cap)?;
    let n = checked.mdp.len();

    let mut target = bits(&query.target, &space)?;
    target.resize(checked.block_of.len(), false);
    let mut start = match &a.init {
        Some(text) => {
            let p = parse_predicate(text).map_err(|e| diag(format!("init: {e}")))?;
            bits(&p, &space)?
        }
        None => vec![true; space.len()],
    };
    start.resize(checked.block_of.len(), false);
    let (target, start) = if a.quotient.is_some() {
        let t = lift(ctx, &checked, &target, "the target");
        let mut s = vec![false; n];
        for (i, &b) in start.iter().enumerate() {
            s[checked.block_of[i]] |= b;
        }
        (t, s)
    } else {
        (target, start)
    };
    let initial: Vec<usize> = (0..n).filter(|&s| start[s]).collect();
    if initial.is_empty() {
        return Err(diag("no state satisfies the initial predicate"));
    }

    if let Some(horizon) = a.curve {
        if query.kind == QueryKind::ExpectedReward {
            return Err(diag("--curve needs a bounded probability query"));
        }
        let lo = pbounded_curve(&checked.mdp, &target, horizon, Opt::Min);
        let hi = pbounded_curve(&checked.mdp, &target, horizon, Opt::Max);
        let rows: Vec<(u64, Rational, Rational)> = (0..=horizon as usize)
            .map(|t| {
                let l = initial.iter().map(|&s| &lo[t][s]).min().unwrap().clone();
                let h = initial.iter().map(|&s| &hi[t][s]).max().unwrap().clone();
                (t as u64, l, h)
            })
            .collect();
        return Ok((curve_output(&cfg, &rows), 0));
    }

    let result = match query.kind {
        QueryKind::BoundedUntil { horizon } => pbounded(&checked.mdp, &target, horizon, query.opt),
        QueryKind::ExpectedReward => {
            let rw = RewardStructure::constant(n, one());
            expected_reward_with(&checked.mdp, &target, &rw, query.opt, ctx.residual, a.max_sweeps)?
        }
    };
    let optimum = result.optimum(&initial, query.opt).expect("non-empty").clone();
    let out = match cfg.format {
        Format::Json => {
            let mut j = json::query_result(&result, |s| checked.names[s].clone(), &initial, &optimum);
            j["query"] = json!(query.to_string());
            j["quotient"] = json!(a.quotient.is_some());
            j["mdp"] = json!({ "states": n, "actions": checked.mdp.action_count(), "transitions": checked.mdp.transition_count() });
            render(&cfg, j)
        }
        Format::Csv => values_csv(initial.iter().map(|&s| (checked.names[s].clone(), result.values[s].to_string())), ["state", "value"]),
        Format::Text => {
            let mut o = format!("{query}\n");
            for &s in &initial {
                writeln!(o, "{}: {}", checked.names[s], result.values[s]).unwrap();
            }
            writeln!(o, "{}: {}", query.opt, optimum).unwrap();
            o
        }
    };
    Ok((out, 0))
}

fn curve_output(cfg: &RunConfig, rows: &[(u64, Rational, Rational)]) -> String {
    match cfg.format {
        Format::Json => render(
            cfg,
            json!({ "curve": rows.iter().map(|(t, l, h)| json!({ "t": t, "pmin": json::rational(l), "pmax": json::rational(h) })).collect::<Vec<_>>() }),
        ),
        _ => curve_csv(rows.iter().map(|(t, l, h)| (*t, to_f64(l), to_f64(h)))),
    }
}

fn cmd_export(ctx: &mut Ctx, a: ExportArgs) -> Result<(String, i32), Failure> {
    let mut cfg = ctx.config("export-mdp", Format::Json).input(&a.model).option("action_cap", a.action_cap);
    no_csv(&cfg)?;
    if let Some(q) = &a.quotient {
        cfg = cfg.input(q);
    }
    if let Some(p) = &a.prism {
        cfg = cfg.option("prism", p.display());
    }
    let (model, space) = load_model(ctx, &a.model)?;
    let checked = build(ctx, &model, &space, a.quotient.as_deref(), a.action_cap)?;
    if let Some(prefix) = &a.prism {
        write(&prefix.with_extension("tra"), &prism::tra(&checked.mdp))?;
        write(&prefix.with_extension("lab"), &prism::lab(&checked.mdp))?;
    }
    let doc = render(&cfg, json::mdp(&checked.mdp));
    match &a.output {
        Some(path) => {
            write(path, &doc)?;
            Ok((String::new(), 0))
        }
        None => Ok((doc, 0)),
    }
}

/// `P{min,max}=? [true U<=t target]` for every `t <= horizon`: the least
/// Pmin and the largest Pmax over the initial states.
fn rabin_curve(m: &Mdp, target: &[bool], horizon: u64) -> Vec<(u64, Rational, Rational)> {
    let lo = pbounded_curve(m, target, horizon, Opt::Min);
    let hi = pbounded_curve(m, target, horizon, Opt::Max);
    (0..=horizon as usize)
        .map(|t| {
            let l = m.initial().iter().map(|&s| &lo[t][s]).min().unwrap().clone();
            let h = m.initial().iter().map(|&s| &hi[t][s]).max().unwrap().clone();
            (t as u64, l, h)
        })
        .collect()
}

fn curve_json(rows: &[(u64, Rational, Rational)]) -> Json {
    Json::Array(rows.iter().map(|(t, l, h)| json!({ "t": t, "pmin": json::rational(l), "pmax": json::rational(h) })).collect())
}

fn curve_text(rows: &[(u64, Rational, Rational)]) -> String {
    let mut o = String::from("T  pmin  pmax\n");
    for (t, l, h) in rows {
        writeln!(o, "{t}  {}  {}", sig12(to_f64(l)), sig12(to_f64(h))).unwrap();
    }
    o
}

fn cmd_rabin(ctx: &mut Ctx, r: RabinCommand) -> Result<(String, i32), Failure> {
    match r {
        RabinCommand::Simulate { pop, traces, scheduler, max_steps, trace_out } => {
            let mut cfg = pop.record(ctx.config("rabin simulate", Format::Json));
            cfg = cfg.option("traces", traces).option("scheduler", format!("{scheduler:?}").to_lowercase()).option("max_steps", max_steps);
            no_csv(&cfg)?;
            let splits = pop.init().splits();
            let conv: Convention = pop.convention.into();
            let mut lines = String::new();
            let (mut terminated, mut min_steps, mut max_seen, mut total) = (0u64, usize::MAX, 0usize, 0u128);
            let (mut gap2, mut gap3, mut count, mut violations, mut max_gap) = (0u64, 0u64, 0u64, 0u64, 0i64);
            for i in 0..traces {
                let (a, b) = splits[(i % splits.len() as u64) as usize];
                let sched = match scheduler {
                    SchedulerArg::Uniform => Scheduler::UniformRandom,
                    SchedulerArg::RoundRobin => Scheduler::RoundRobin,
                    SchedulerArg::Adversarial => Scheduler::Adversarial,
                    SchedulerArg::Mixed => [Scheduler::UniformRandom, Scheduler::RoundRobin, Scheduler::Adversarial][(i % 3) as usize],
                };
                let tr = simulate(a, b, sched, ctx.seed.wrapping_add(i), max_steps, conv);
                let inv = check_invariants(&tr);
                terminated += tr.terminated as u64;
                min_steps = min_steps.min(tr.steps());
                max_seen = max_seen.max(tr.steps());
                total += tr.steps() as u128;
                max_gap = max_gap.max(tr.states.iter().map(|s| s.gap().abs()).max().unwrap_or(0));
                gap2 += !inv.gap_over_2.is_empty() as u64;
                gap3 += !inv.gap_over_3.is_empty() as u64;
                count += !inv.count_changed.is_empty() as u64;
                violations += (!inv.gap_over_2.is_empty() || !inv.count_changed.is_empty()) as u64;
                if trace_out.is_some() {
                    for (step, s) in tr.states.iter().enumerate() {
                        let line = json!({ "trace": i, "step": step, "state": json::rabin_state(s) });
                        lines += &line.to_string();
                        lines.push('\n');
                    }
                }
            }
            if let Some(p) = &trace_out {
                cfg = cfg.option("trace_out", p.display());
                write(p, &lines)?;
            }
            let mean = if traces == 0 { 0.0 } else { total as f64 / traces as f64 };
            let result = json!({
                "traces": traces,
                "terminated": terminated,
                "steps": { "min": if traces == 0 { 0 } else { min_steps }, "max": max_seen, "mean": mean },
                "max_gap": max_gap,
                "traces_with": { "gap_over_2": gap2, "gap_over_3": gap3, "count_changed": count },
                "invariant_violations": violations,
            });
            let out = match cfg.format {
                Format::Text => format!(
                    "traces: {traces}\nterminated: {terminated}\nsteps: mean {mean:.3}, max {max_seen}\nmax |L-R|: {max_gap}\ninvariant violations: {violations} (|L-R|>2: {gap2}, |L-R|>3: {gap3}, count changed: {count})\n"
                ),
                _ => render(&cfg, result),
            };
            Ok((out, 0))
        }
        RabinCommand::Truncated { pop, horizon, cap, rewards } => {
            let cap = cap.unwrap_or((3 * horizon + 3).min(u32::MAX as u64) as u32);
            let cfg = pop.record(ctx.config("rabin truncated", Format::Json)).option("horizon", horizon).option("cap", cap).option("rewards", rewards);
            let conv: Convention = pop.convention.into();
            let model = truncated_mdp(pop.init(), cap, conv, pop.state_limit)?;
            let rows = rabin_curve(&model.mdp, &model.target(), horizon);
            let out = match cfg.format {
                Format::Csv => curve_output(&cfg, &rows),
                Format::Text => curve_text(&rows),
                Format::Json => {
                    let mut j = json!({
                        "states": model.mdp.len(),
                        "transitions": model.mdp.transition_count(),
                        "overflow_reachable": model.truncated(),
                        "curve": curve_json(&rows),
                    });
                    if rewards {
                        let (lo, hi) = truncated_reward_bounds(pop.init(), cap, conv, pop.state_limit)?;
                        j["rmin_lower_bound"] = json::value(&lo);
                        j["rmax_lower_bound"] = json::value(&hi);
                    }
                    render(&cfg, j)
                }
            };
            Ok((out, 0))
        }
        RabinCommand::Abstract { pop, horizon, export } => {
            let mut cfg = pop.record(ctx.config("rabin abstract", Format::Json)).option("horizon", horizon);
            if let Some(p) = &export {
                cfg = cfg.option("export", p.display());
            }
            let model = abstract_mdp(pop.init(), pop.convention.into(), pop.state_limit)?;
            if let Some(p) = &export {
                write(p, &render(&cfg, json::mdp(&model.mdp)))?;
            }
            let rows = rabin_curve(&model.mdp, &model.target(), horizon);
            let out = match cfg.format {
                Format::Csv => curve_output(&cfg, &rows),
                Format::Text => curve_text(&rows),
                Format::Json => render(
                    &cfg,
                    json!({
                        "states": model.mdp.len(),
                        "transitions": model.mdp.transition_count(),
                        "unslotted": model.states.iter().filter(|s| s.slot().is_none()).count(),
                        "curve": curve_json(&rows),
                    }),
                ),
            };
            Ok((out, 0))
        }
        RabinCommand::Queries { n, t_max, convention, cap, state_limit } => {
            let cfg = ctx
                .config("rabin queries", Format::Json)
                .option("n", n)
                .option("t_max", t_max)
                .option("convention", format!("{convention:?}").to_lowercase())
                .option("cap", cap)
                .option("state_limit", state_limit);
            let convs = match convention {
                Conventions::Step => vec![Convention::Step],
                Conventions::Sweep => vec![Convention::Sweep],
                Conventions::Both => vec![Convention::Step, Convention::Sweep],
            };
            if cfg.format == Format::Csv && convs.len() > 1 {
                return Err(diag("csv output holds one curve; pick --convention step or sweep"));
            }
            let mut reports = Vec::new();
            let mut bounds = Vec::new();
            for conv in convs {
                reports.push(run_queries(Init::AllSplits(n), t_max, conv, state_limit)?);
                bounds.push(truncated_reward_bounds(Init::AllSplits(n), cap, conv, state_limit)?);
            }
            let out = match cfg.format {
                Format::Csv => curve_csv(reports[0].curve.iter().map(|c| (c.t, to_f64(&c.pmin), to_f64(&c.pmax)))),
                Format::Text => {
                    let mut o = rounds_table(&reports);
                    for (r, (lo, hi)) in reports.iter().zip(&bounds) {
                        writeln!(
                            o,
                            "{}: truncated at {cap}, overflow free: Rmin >= {}, Rmax >= {}",
                            convention_name(r.convention),
                            sig12(lo.to_f64()),
                            sig12(hi.to_f64())
                        )
                        .unwrap();
                    }
                    o
                }
                Format::Json => {
                    let rows: Vec<Json> = reports
                        .iter()
                        .zip(&bounds)
                        .map(|(r, (lo, hi))| {
                            let mut j = json::rabin_report(r);
                            j["cross_check"] = json!({ "cap": cap, "rmin_lower_bound": json::value(lo), "rmax_lower_bound": json::value(hi) });
                            j
                        })
                        .collect();
                    render(&cfg, json!({ "conventions": rows }))
                }
            };
            Ok((out, 0))
        }
    }
}
