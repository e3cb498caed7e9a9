//! Command-line front end: resolve a run specification, execute a
//! subcommand, and emit deterministic JSON or CSV.
//!
//! All output is reproducible: the same arguments and seed produce
//! byte-identical bytes on stdout. Exit codes: 0 success, 1 usage or
//! validation error, 2 search failure after the restart budget.

use crate::analytics;
use crate::baseline::{self, BaselineDistribution};
use crate::cluster::{
    derive_seed, parallel_solve, Coordinator, ExecMode, LedgerReport, SimulatorExecutor,
};
use crate::error::Result;
use crate::membership::{self, MembershipDistribution, SetDescriptor, TrialRecord};
use crate::numt::ProblemInstance;
use crate::search::{solve, SearchConfig, SearchTrace};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::io::Write;

/// Schema tag stamped on every JSON document.
pub const SCHEMA: &str = "dqdlp/1";

#[derive(Debug, Parser)]
#[command(name = "dqdlp", version, about = "Distributed discrete-logarithm search on a simulated cluster")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the dichotomy search end to end.
    Solve(SolveArgs),
    /// Query a single candidate set and report the verdict.
    Membership(MembershipArgs),
    /// Exact probabilities of one candidate set, no sampling.
    Probe(ProbeArgs),
    /// Evaluate every closed form and bound at the resolved parameters.
    Bounds(BoundsArgs),
    /// Repeat solve many times and tabulate the found solutions.
    Experiment(ExperimentArgs),
    /// Run the three-register reference circuit.
    BaselineShor(BaselineArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Serial,
    Parallel,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Generator a.
    #[arg(long)]
    pub a: u64,
    /// Target b with b = a^t (mod modulus).
    #[arg(long)]
    pub b: u64,
    /// Modulus N.
    #[arg(long)]
    pub modulus: u64,
    /// Multiplicative order of a; derived and verified when supplied.
    #[arg(long)]
    pub r: Option<u64>,
    /// Width of the argument and residue registers; derived by default.
    #[arg(long)]
    pub m: Option<u32>,
    /// Precision parameter for the derived register width.
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
}

impl InstanceArgs {
    fn resolve(&self) -> Result<ProblemInstance> {
        ProblemInstance::with_params(self.a, self.b, self.modulus, self.r, self.m, self.epsilon)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Initial set exponent; defaults to min(3, m - 2).
    #[arg(long)]
    pub n0: Option<u32>,
    /// Post-selected trials per membership query.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    /// Master seed; DQDLP_SEED is the fallback when the flag is absent.
    #[arg(long, env = "DQDLP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker lanes for parallel dispatch.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = Mode::Serial)]
    pub mode: Mode,
    /// Full restarts after a failed pass; 0 reproduces a single pass.
    #[arg(long, default_value_t = 0)]
    pub max_restarts: u32,
    /// Cap on prepare-and-measure attempts per trial (default 64 * 2^n).
    #[arg(long)]
    pub max_attempts: Option<u32>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

impl RunArgs {
    fn resolve(&self) -> Result<(ProblemInstance, SearchConfig)> {
        let instance = self.instance.resolve()?;
        let n0 = self.n0.unwrap_or_else(|| {
            let cap = instance.m.saturating_sub(2);
            let mut n0 = cap.min(3);
            while n0 > 0 && (1u64 << n0) >= instance.r {
                n0 -= 1;
            }
            n0
        });
        let config = SearchConfig { n0, p: self.p, max_restarts: self.max_restarts, seed: self.seed };
        if !analytics::iteration_constraint_holds(instance.r, self.p) {
            eprintln!(
                "warning: p = {} violates p + log2 p <= log2 r for r = {}; bounds may not apply",
                self.p, instance.r
            );
        }
        Ok((instance, config))
    }

    fn executor(&self, instance: &ProblemInstance, seed: u64) -> SimulatorExecutor {
        let mut executor = SimulatorExecutor::new(instance.clone(), seed);
        if let Some(cap) = self.max_attempts {
            executor = executor.with_max_attempts(cap);
        }
        executor
    }

    fn coordinator_for(&self, executor: SimulatorExecutor) -> Coordinator {
        let mode = match self.mode {
            Mode::Serial => ExecMode::Serial,
            Mode::Parallel => ExecMode::Parallel,
        };
        Coordinator::new(executor, self.workers, mode)
    }

    fn coordinator(&self, instance: &ProblemInstance, seed: u64) -> Coordinator {
        self.coordinator_for(self.executor(instance, seed))
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct MembershipArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Set start offset.
    #[arg(long)]
    pub tau: u64,
    /// Set size exponent.
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub tau: u64,
    #[arg(long)]
    pub n: u32,
    /// Also emit the full conditional residue distribution.
    #[arg(long)]
    pub full: bool,
    /// Write the pre-measurement state as CSV to this path.
    #[arg(long)]
    pub dump_state: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Multiplicative order r.
    #[arg(long)]
    pub r: u64,
    /// Set exponent n.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    /// Register width m; defaults to ceil(log2 r) + 1.
    #[arg(long)]
    pub m: Option<u32>,
    /// Trials per query.
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of independent solve repetitions.
    #[arg(long, default_value_t = 100)]
    pub shots: u32,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value_t = 100)]
    pub shots: u32,
    #[arg(long, env = "DQDLP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Set exponent used for the qubit comparison.
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
}

// ---- output documents ----

#[derive(Serialize)]
struct SolveDoc<'a> {
    schema: &'static str,
    instance: &'a ProblemInstance,
    config: &'a SearchConfig,
    workers: usize,
    mode: &'static str,
    trace: TraceDoc,
    ledger: LedgerReport,
}

#[derive(Serialize)]
struct TraceDoc {
    steps: Vec<StepDoc>,
    result: Option<u64>,
    restarts: u32,
    attempts: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
}

#[derive(Serialize)]
struct StepDoc {
    tau: u64,
    n: u32,
    verdict: membership::Verdict,
    worker: usize,
    trials: Vec<TrialRecord>,
}

fn trace_doc(trace: &SearchTrace, instance: &ProblemInstance) -> TraceDoc {
    let steps = trace
        .steps
        .iter()
        .map(|s| {
            let set = SetDescriptor { tau: s.tau, n: s.n };
            StepDoc {
                tau: s.tau,
                n: s.n,
                verdict: s.verdict,
                worker: s.worker,
                trials: membership::trial_records(&set, &s.trials),
            }
        })
        .collect();
    TraceDoc {
        steps,
        result: trace.result,
        restarts: trace.restarts_used,
        attempts: trace.total_postselect_attempts,
        verified: trace.result.map(|t| instance.verifies(t)),
    }
}

fn emit_json(out: &mut impl Write, doc: &impl Serialize) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(doc).expect("serializable"))
}

/// Execute a parsed command; returns the process exit code.
pub fn run(cli: Cli, out: &mut impl Write) -> u8 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let code = match cli.command {
        Command::Solve(args) => cmd_solve(args, out)?,
        Command::Membership(args) => cmd_membership(args, out)?,
        Command::Probe(args) => cmd_probe(args, out)?,
        Command::Bounds(args) => cmd_bounds(args, out)?,
        Command::Experiment(args) => cmd_experiment(args, out)?,
        Command::BaselineShor(args) => cmd_baseline(args, out)?,
    };
    Ok(code)
}

fn cmd_solve(args: SolveArgs, out: &mut impl Write) -> Result<u8> {
    let (instance, config) = args.run.resolve()?;
    let mut coordinator = args.run.coordinator(&instance, config.seed);
    let trace = match args.run.mode {
        Mode::Serial => solve(&instance, &config, &mut coordinator)?,
        Mode::Parallel => parallel_solve(&config, &mut coordinator)?,
    };
    let doc = SolveDoc {
        schema: SCHEMA,
        instance: &instance,
        config: &config,
        workers: args.run.workers,
        mode: match args.run.mode {
            Mode::Serial => "serial",
            Mode::Parallel => "parallel",
        },
        trace: trace_doc(&trace, &instance),
        ledger: coordinator.ledger.report(instance.r),
    };
    match args.run.output {
        OutputFormat::Json => emit_json(out, &doc).expect("stdout"),
        OutputFormat::Csv => {
            let w = out;
            writeln!(w, "step,tau,n,verdict,worker").expect("stdout");
            for (i, s) in trace.steps.iter().enumerate() {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    i,
                    s.tau,
                    s.n,
                    verdict_str(s.verdict),
                    s.worker
                )
                .expect("stdout");
            }
        }
    }
    Ok(if trace.result.is_some() { 0 } else { 2 })
}

fn verdict_str(v: membership::Verdict) -> &'static str {
    match v {
        membership::Verdict::Contained => "contained",
        membership::Verdict::NotContained => "not_contained",
        membership::Verdict::Inconclusive => "inconclusive",
    }
}

#[derive(Serialize)]
struct MembershipDoc<'a> {
    schema: &'static str,
    instance: &'a ProblemInstance,
    tau: u64,
    n: u32,
    p: u32,
    seed: u64,
    verdict: membership::Verdict,
    trials: Vec<TrialRecord>,
}

fn cmd_membership(args: MembershipArgs, out: &mut impl Write) -> Result<u8> {
    let instance = args.run.instance.resolve()?;
    let set = SetDescriptor::new(args.tau, args.n, instance.r)?;
    let mut coordinator = args.run.coordinator(&instance, args.run.seed);
    let outcome = coordinator.dispatch(&[(set, args.run.p)])?.pop().expect("one job");
    let doc = MembershipDoc {
        schema: SCHEMA,
        instance: &instance,
        tau: set.tau,
        n: set.n,
        p: args.run.p,
        seed: args.run.seed,
        verdict: outcome.verdict,
        trials: membership::trial_records(&set, &outcome.trials),
    };
    match args.run.output {
        OutputFormat::Json => emit_json(out, &doc).expect("stdout"),
        OutputFormat::Csv => {
            writeln!(out, "tau,n,attempt,fourth,third,marker_hit").expect("stdout");
            for t in &doc.trials {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    t.tau,
                    t.n,
                    t.attempt,
                    t.fourth,
                    t.third.map_or(String::new(), |v| v.to_string()),
                    t.marker_hit.map_or(String::new(), |v| v.to_string()),
                )
                .expect("stdout");
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ProbeDoc<'a> {
    schema: &'static str,
    instance: &'a ProblemInstance,
    tau: u64,
    n: u32,
    probe: membership::ProbabilityProbe,
    /// Mass at argument != 0 with ancilla = 1; zero in the exact regime.
    argument_leakage: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    distribution: Option<Vec<f64>>,
}

fn cmd_probe(args: ProbeArgs, out: &mut impl Write) -> Result<u8> {
    let instance = args.instance.resolve()?;
    let set = SetDescriptor::new(args.tau, args.n, instance.r)?;
    let dist = MembershipDistribution::prepare(&instance, &set)?;
    if let Some(path) = &args.dump_state {
        let state = membership::circuit_output(&instance, &set)?;
        let mut file = std::fs::File::create(path).map_err(|e| {
            crate::error::Error::InvalidInstance(format!("cannot write {}: {e}", path.display()))
        })?;
        state.dump_csv(&mut file).map_err(|e| {
            crate::error::Error::InvalidInstance(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    let doc = ProbeDoc {
        schema: SCHEMA,
        instance: &instance,
        tau: set.tau,
        n: set.n,
        probe: dist.probe(),
        argument_leakage: dist.argument_leakage(),
        distribution: args.full.then(|| dist.residue_distribution().to_vec()),
    };
    match args.output {
        OutputFormat::Json => emit_json(out, &doc).expect("stdout"),
        OutputFormat::Csv => {
            writeln!(out, "z,probability").expect("stdout");
            for (z, p) in dist.residue_distribution().iter().enumerate() {
                writeln!(out, "{z},{p}").expect("stdout");
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BoundsDoc {
    schema: &'static str,
    #[serde(flatten)]
    report: analytics::BoundReport,
}

fn cmd_bounds(args: BoundsArgs, out: &mut impl Write) -> Result<u8> {
    let m = args.m.unwrap_or_else(|| {
        let bits = if args.r <= 1 { 1 } else { 64 - (args.r - 1).leading_zeros() };
        bits + 1
    });
    let doc = BoundsDoc {
        schema: SCHEMA,
        report: analytics::bound_report(args.r, args.n, m, args.p),
    };
    emit_json(out, &doc).expect("stdout");
    Ok(0)
}

#[derive(Serialize)]
struct ExperimentDoc<'a> {
    schema: &'static str,
    instance: &'a ProblemInstance,
    config: &'a SearchConfig,
    shots: u32,
    /// Found-solution histogram keyed by the decimal value of t.
    histogram: std::collections::BTreeMap<String, u32>,
    failures: u32,
    success_rate: f64,
    mean_postselect_attempts: f64,
}

fn cmd_experiment(args: ExperimentArgs, out: &mut impl Write) -> Result<u8> {
    let (instance, base_config) = args.run.resolve()?;
    let mut histogram = std::collections::BTreeMap::new();
    let mut failures = 0u32;
    let mut attempts_total = 0u64;
    let mut successes = 0u32;
    let expected = crate::numt::brute_force_dlp(&instance)?.t;
    let template = args.run.executor(&instance, 0);
    for shot in 0..args.shots {
        let shot_seed = derive_seed(base_config.seed, shot as u64);
        let config = SearchConfig { seed: shot_seed, ..base_config };
        let mut coordinator = args.run.coordinator_for(template.fork_with_seed(shot_seed));
        let trace = match args.run.mode {
            Mode::Serial => solve(&instance, &config, &mut coordinator)?,
            Mode::Parallel => parallel_solve(&config, &mut coordinator)?,
        };
        attempts_total += trace.total_postselect_attempts;
        match trace.result {
            Some(t) => {
                *histogram.entry(t.to_string()).or_insert(0) += 1;
                if t == expected {
                    successes += 1;
                }
            }
            None => failures += 1,
        }
    }
    let doc = ExperimentDoc {
        schema: SCHEMA,
        instance: &instance,
        config: &base_config,
        shots: args.shots,
        histogram,
        failures,
        success_rate: successes as f64 / args.shots as f64,
        mean_postselect_attempts: attempts_total as f64 / args.shots as f64,
    };
    match args.run.output {
        OutputFormat::Json => emit_json(out, &doc).expect("stdout"),
        OutputFormat::Csv => {
            writeln!(out, "t,count").expect("stdout");
            for (t, count) in &doc.histogram {
                writeln!(out, "{t},{count}").expect("stdout");
            }
            writeln!(out, "failures,{failures}").expect("stdout");
            writeln!(out, "success_rate,{}", doc.success_rate).expect("stdout");
            writeln!(out, "mean_postselect_attempts,{}", doc.mean_postselect_attempts)
                .expect("stdout");
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BaselineDoc<'a> {
    schema: &'static str,
    instance: &'a ProblemInstance,
    shots: u32,
    seed: u64,
    accepted: u32,
    acceptance_rate: f64,
    all_accepted_verify: bool,
    qubits: baseline::QubitReport,
    outcomes: Vec<baseline::ShorOutcome>,
}

fn cmd_baseline(args: BaselineArgs, out: &mut impl Write) -> Result<u8> {
    use rand::SeedableRng;
    let instance = args.instance.resolve()?;
    let dist = BaselineDistribution::prepare(&instance)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut outcomes = Vec::with_capacity(args.shots as usize);
    let mut accepted = 0u32;
    let mut all_verify = true;
    for _ in 0..args.shots {
        let outcome = baseline::shor_dlp_run(&dist, &instance, &mut rng);
        if let Some(t) = outcome.t_candidate {
            accepted += 1;
            all_verify &= instance.verifies(t);
        }
        outcomes.push(outcome);
    }
    let doc = BaselineDoc {
        schema: SCHEMA,
        instance: &instance,
        shots: args.shots,
        seed: args.seed,
        accepted,
        acceptance_rate: accepted as f64 / args.shots as f64,
        all_accepted_verify: all_verify,
        qubits: baseline::qubit_report(&instance, args.n)?,
        outcomes,
    };
    match args.output {
        OutputFormat::Json => emit_json(out, &doc).expect("stdout"),
        OutputFormat::Csv => {
            writeln!(out, "x_out,y_out,t_candidate").expect("stdout");
            for o in &doc.outcomes {
                writeln!(
                    out,
                    "{},{},{}",
                    o.x_out,
                    o.y_out,
                    o.t_candidate.map_or(String::new(), |t| t.to_string())
                )
                .expect("stdout");
            }
        }
    }
    Ok(0)
}
