//! Simulated multi-worker execution with classical-only messaging.
//!
//! Workers are in-process execution lanes. Every membership query crosses the
//! coordinator-worker boundary as exactly two messages — a query carrying
//! `(tau, n)` and a one-bit verdict — and the ledger accounts their payload
//! sizes, so the no-quantum-communication claim is checkable: no message type
//! has anywhere to put an amplitude.
//!
//! Determinism contract: the random stream of a query is derived from
//! `(seed_base, job index)`, never from the lane that happens to run it, so
//! verdicts and trial logs are identical for any worker count and any
//! scheduling interleaving. Worker ids in the results are scheduling
//! metadata only.

use crate::error::Result;
use crate::membership::{
    default_max_attempts, membership_verdict, MembershipDistribution, SetDescriptor,
    SharedDistribution,
};
use crate::numt::ProblemInstance;
use crate::search::{MembershipExecutor, QueryOutcome, QueryPlan, SearchConfig, SearchStep, SearchTrace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

/// Mix a master seed with a stream index into an independent child seed.
///
/// This is the documented derivation used everywhere randomness fans out:
/// shot `i` of an experiment uses `derive_seed(seed, i)`, and job `j` of a
/// run uses `derive_seed(shot_seed, j)`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Serial routes everything through lane 0; Parallel fans out across lanes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecMode {
    Serial,
    Parallel,
}

/// What crosses the coordinator-worker boundary. Integer payloads only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    Query,
    Verdict,
}

/// One classical message and its accounted payload width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalMessage {
    pub kind: MessageKind,
    pub tau: u64,
    pub n: u32,
    pub verdict_bit: Option<u8>,
    pub bits_on_wire: u32,
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Payload bits of a query message: `ceil(log2 r)` for `tau` plus enough bits
/// to index `n` in `[0, ceil(log2 r)]`.
pub fn query_payload_bits(r: u64) -> u32 {
    ceil_log2(r) + ceil_log2(ceil_log2(r) as u64 + 1)
}

/// Per-message bit accounting for one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CommsLedger {
    pub messages: u64,
    pub total_bits: u64,
    /// Bits exchanged per query (query payload + verdict bit).
    pub per_query_bits: u32,
}

impl CommsLedger {
    pub fn record(&mut self, message: &ClassicalMessage) {
        self.messages += 1;
        self.total_bits += message.bits_on_wire as u64;
    }

    /// JSON form with the bound check folded in.
    pub fn report(&self, r: u64) -> LedgerReport {
        LedgerReport {
            messages: self.messages,
            total_bits: self.total_bits,
            per_query_bits: self.per_query_bits,
            bound: ledger_bound(r),
            pass: ledger_check(self, r),
        }
    }
}

/// The allowance: `ceil(log2 r) + ceil(log2 log2 r) + 1` payload bits plus 8
/// bits of framing slack.
pub fn ledger_bound(r: u64) -> u32 {
    ceil_log2(r) + ceil_log2(ceil_log2(r) as u64) + 1 + 8
}

/// Whether the per-query bit count stays within the allowance.
pub fn ledger_check(ledger: &CommsLedger, r: u64) -> bool {
    ledger.per_query_bits <= ledger_bound(r)
}

/// Serialized ledger summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub messages: u64,
    pub total_bits: u64,
    pub per_query_bits: u32,
    pub bound: u32,
    pub pass: bool,
}

/// Simulator-backed membership backend shared by all lanes.
///
/// Prepared circuit distributions are memoized per `(tau, n)`; they are
/// deterministic, so sharing them across lanes cannot change any outcome.
pub struct SimulatorExecutor {
    instance: ProblemInstance,
    seed_base: u64,
    max_attempts_override: Option<u32>,
    cache: Arc<Mutex<HashMap<(u64, u32), SharedDistribution>>>,
}

impl SimulatorExecutor {
    pub fn new(instance: ProblemInstance, seed_base: u64) -> Self {
        Self {
            instance,
            seed_base,
            max_attempts_override: None,
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// A new seed over the same instance, sharing the prepared-circuit cache.
    /// Distributions are deterministic, so sharing cannot change outcomes.
    pub fn fork_with_seed(&self, seed_base: u64) -> Self {
        Self {
            instance: self.instance.clone(),
            seed_base,
            max_attempts_override: self.max_attempts_override,
            cache: self.cache.clone(),
        }
    }

    /// Cap every trial's prepare-and-measure budget (default `64 * 2^n`).
    pub fn with_max_attempts(mut self, max_attempts: u32) -> Self {
        self.max_attempts_override = Some(max_attempts);
        self
    }

    pub fn instance(&self) -> &ProblemInstance {
        &self.instance
    }

    fn max_attempts(&self, n: u32) -> u32 {
        self.max_attempts_override
            .unwrap_or_else(|| default_max_attempts(n))
    }

    /// The memoized measurement distribution of one circuit.
    pub fn distribution(&self, set: &SetDescriptor) -> Result<SharedDistribution> {
        if let Some(d) = self.cache.lock().unwrap().get(&(set.tau, set.n)) {
            return Ok(d.clone());
        }
        let dist = SharedDistribution::new(MembershipDistribution::prepare(&self.instance, set)?);
        self.cache
            .lock()
            .unwrap()
            .entry((set.tau, set.n))
            .or_insert_with(|| dist.clone());
        Ok(dist)
    }

    /// Run one job with the stream derived from `(seed_base, job_index)`.
    pub fn run_job(&self, set: &SetDescriptor, p: u32, job_index: u64) -> Result<QueryOutcome> {
        let dist = self.distribution(set)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed_base, job_index));
        let outcome = membership_verdict(&dist, p, &mut rng, self.max_attempts(set.n));
        Ok(QueryOutcome {
            verdict: outcome.verdict,
            trials: outcome.trials,
            attempts: outcome.attempts_total,
            worker: 0,
        })
    }
}

/// Coordinator: owns the ledger and the job counter, fans jobs out to lanes,
/// and joins results in submission order.
pub struct Coordinator {
    executor: SimulatorExecutor,
    workers: usize,
    mode: ExecMode,
    pub ledger: CommsLedger,
    next_job: u64,
}

impl Coordinator {
    pub fn new(executor: SimulatorExecutor, workers: usize, mode: ExecMode) -> Self {
        let r = executor.instance.r;
        Self {
            executor,
            workers: workers.max(1),
            mode,
            ledger: CommsLedger {
                messages: 0,
                total_bits: 0,
                per_query_bits: query_payload_bits(r) + 1,
            },
            next_job: 0,
        }
    }

    pub fn executor(&self) -> &SimulatorExecutor {
        &self.executor
    }

    /// Execute a batch. Results come back in submission order; the ledger
    /// records one query and one verdict message per job.
    pub fn dispatch(&mut self, jobs: &[(SetDescriptor, u32)]) -> Result<Vec<QueryOutcome>> {
        let base_job = self.next_job;
        self.next_job += jobs.len() as u64;
        let lanes = match self.mode {
            ExecMode::Serial => 1,
            ExecMode::Parallel => self.workers,
        };

        let results: Vec<Option<Result<QueryOutcome>>> = if lanes == 1 {
            jobs.iter()
                .enumerate()
                .map(|(i, (set, p))| Some(self.executor.run_job(set, *p, base_job + i as u64)))
                .collect()
        } else {
            let slots: Vec<Mutex<Option<Result<QueryOutcome>>>> =
                jobs.iter().map(|_| Mutex::new(None)).collect();
            let cursor = AtomicUsize::new(0);
            let executor = &self.executor;
            std::thread::scope(|scope| {
                for lane in 0..lanes {
                    let slots = &slots;
                    let cursor = &cursor;
                    scope.spawn(move || loop {
                        let i = cursor.fetch_add(1, Ordering::Relaxed);
                        if i >= jobs.len() {
                            break;
                        }
                        let (set, p) = &jobs[i];
                        let mut out = executor.run_job(set, *p, base_job + i as u64);
                        if let Ok(o) = &mut out {
                            o.worker = lane;
                        }
                        *slots[i].lock().unwrap() = Some(out);
                    });
                }
            });
            slots.into_iter().map(|s| s.into_inner().unwrap()).collect()
        };

        let mut out = Vec::with_capacity(jobs.len());
        for (result, (set, _)) in results.into_iter().zip(jobs) {
            let outcome = result.expect("every job slot is filled")?;
            self.ledger.record(&ClassicalMessage {
                kind: MessageKind::Query,
                tau: set.tau,
                n: set.n,
                verdict_bit: None,
                bits_on_wire: query_payload_bits(self.executor.instance.r),
            });
            self.ledger.record(&ClassicalMessage {
                kind: MessageKind::Verdict,
                tau: set.tau,
                n: set.n,
                verdict_bit: Some(match outcome.verdict {
                    crate::membership::Verdict::Contained => 1,
                    _ => 0,
                }),
                bits_on_wire: 1,
            });
            out.push(outcome);
        }
        Ok(out)
    }
}

impl MembershipExecutor for Coordinator {
    fn query(&mut self, set: SetDescriptor, p: u32) -> QueryOutcome {
        self.dispatch(&[(set, p)])
            .expect("set descriptors are validated by the walk")
            .pop()
            .expect("one job in, one result out")
    }
}

/// Parallel search: scan the top-level partition concurrently, then descend
/// serially inside the first confirmed set (lowest tau wins ties). Each cycle
/// without a confirmed top-level set, a spurious descent, or a failed
/// verification consumes a restart.
pub fn parallel_solve(
    config: &SearchConfig,
    coordinator: &mut Coordinator,
) -> Result<SearchTrace> {
    let instance = coordinator.executor.instance.clone();
    crate::search::validate_config(&instance, config)?;
    let r = instance.r;
    let QueryPlan::Parallel { level0 } = crate::search::plan_queries(r, config.n0, true)? else {
        unreachable!("plan_queries(_, _, true) is always parallel")
    };
    let mut steps = Vec::new();
    let mut total_attempts = 0u64;

    for restart in 0..=config.max_restarts {
        let jobs: Vec<(SetDescriptor, u32)> = level0.iter().map(|s| (*s, config.p)).collect();
        let outcomes = coordinator.dispatch(&jobs)?;
        let mut confirmed: Option<SetDescriptor> = None;
        for (set, outcome) in level0.iter().zip(outcomes) {
            total_attempts += outcome.attempts;
            if outcome.verdict == crate::membership::Verdict::Contained && confirmed.is_none() {
                confirmed = Some(*set);
            }
            steps.push(SearchStep {
                tau: set.tau,
                n: set.n,
                verdict: outcome.verdict,
                worker: outcome.worker,
                trials: outcome.trials,
            });
        }
        let Some(top) = confirmed else { continue };

        if config.n0 == 0 {
            if instance.verifies(top.tau) {
                return Ok(SearchTrace {
                    steps,
                    result: Some(top.tau),
                    restarts_used: restart,
                    total_postselect_attempts: total_attempts,
                });
            }
            continue;
        }

        // serial descent one level below the confirmed set, keeping its tau
        let end = crate::search::run_walk(
            &instance,
            config.n0 - 1,
            top.tau,
            config.p,
            coordinator,
            &mut steps,
            &mut total_attempts,
        )?;
        if let crate::search::WalkEnd::Verified(t) = end {
            return Ok(SearchTrace {
                steps,
                result: Some(t),
                restarts_used: restart,
                total_postselect_attempts: total_attempts,
            });
        }
    }
    Ok(SearchTrace {
        steps,
        result: None,
        restarts_used: config.max_restarts,
        total_postselect_attempts: total_attempts,
    })
}
