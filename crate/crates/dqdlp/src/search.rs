//! The dichotomy search: shrink or slide the candidate set until a verified
//! singleton remains.
//!
//! Each step queries one candidate set. A `Contained` verdict keeps the start
//! offset and halves the set (`n -> n - 1`); anything else slides the window
//! (`tau -> tau + 2^n mod r`). The n = 0 singleton is still queried, and a
//! confirmed singleton must verify classically before it is returned, so a
//! non-failure result is always a true solution.
//!
//! Recovery: sliding a full period at one level without a confirmation
//! backtracks one level instead of restarting cold; only a full wrap at the
//! top level (or a failed classical verification) consumes a restart. With
//! `max_restarts = 0` the walk is a single pass.

use crate::error::{Error, Result};
use crate::membership::{SetDescriptor, TrialOutcome, Verdict};
use crate::numt::ProblemInstance;
use serde::{Deserialize, Serialize};

/// Tunables of one search run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Initial set exponent; must satisfy `2^n0 < r` and `n0 < m - 1`.
    pub n0: u32,
    /// Post-selected trials per membership query.
    pub p: u32,
    /// Full restarts allowed after verification failures or top-level wraps.
    pub max_restarts: u32,
    /// Master seed; executors derive per-query streams from it.
    pub seed: u64,
}

/// One membership query and its evidence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchStep {
    pub tau: u64,
    pub n: u32,
    pub verdict: Verdict,
    pub worker: usize,
    pub trials: Vec<TrialOutcome>,
}

/// Ordered record of a search run. Serializes to the documented trace schema
/// (`steps`, `result`, `restarts`, `attempts`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub steps: Vec<SearchStep>,
    /// The verified solution, absent when the run failed.
    pub result: Option<u64>,
    #[serde(rename = "restarts")]
    pub restarts_used: u32,
    #[serde(rename = "attempts")]
    pub total_postselect_attempts: u64,
}

/// Result of one dispatched membership query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryOutcome {
    pub verdict: Verdict,
    pub trials: Vec<TrialOutcome>,
    pub attempts: u64,
    pub worker: usize,
}

/// A membership backend the walk can query.
pub trait MembershipExecutor {
    fn query(&mut self, set: SetDescriptor, p: u32) -> QueryOutcome;
}

/// Deterministic reference executor: answers from the known solution, with no
/// randomness and no trial evidence. Used to validate the walk itself.
#[derive(Debug, Clone, Copy)]
pub struct TruthfulOracle {
    pub r: u64,
    pub t: u64,
}

impl MembershipExecutor for TruthfulOracle {
    fn query(&mut self, set: SetDescriptor, _p: u32) -> QueryOutcome {
        let verdict = if set.contains(self.t, self.r) {
            Verdict::Contained
        } else {
            Verdict::NotContained
        };
        QueryOutcome { verdict, trials: Vec::new(), attempts: 0, worker: 0 }
    }
}

pub(crate) fn validate_config(instance: &ProblemInstance, config: &SearchConfig) -> Result<()> {
    if config.p == 0 {
        return Err(Error::InvalidSet("p must be >= 1".into()));
    }
    if config.n0 >= 63 || (1u64 << config.n0) >= instance.r {
        return Err(Error::InvalidSet(format!(
            "initial set size 2^{} must be < r = {}",
            config.n0, instance.r
        )));
    }
    if config.n0 + 1 >= instance.m {
        return Err(Error::InvalidSet(format!(
            "initial exponent n0 = {} must satisfy n0 < m - 1 = {}",
            config.n0,
            instance.m - 1
        )));
    }
    // the widest circuit the walk can request must fit the dense-state cap
    crate::qsim::RegisterLayout::new(config.n0, instance.m)?;
    Ok(())
}

/// How one pass of the walk ended.
pub(crate) enum WalkEnd {
    /// A classically verified solution.
    Verified(u64),
    /// A singleton confirmation that failed classical verification.
    SpuriousSingleton,
    /// The top level slid a full period without a confirmation.
    TopWrapped,
}

/// One pass of the shrink-or-slide walk starting at `(n_start, tau_start)`.
///
/// Steps are appended to `steps`; post-selection attempts to `attempts`.
pub(crate) fn run_walk(
    instance: &ProblemInstance,
    n_start: u32,
    tau_start: u64,
    p: u32,
    executor: &mut dyn MembershipExecutor,
    steps: &mut Vec<SearchStep>,
    attempts: &mut u64,
) -> Result<WalkEnd> {
    let r = instance.r;
    let mut n = n_start;
    let mut tau = tau_start % r;
    // distance slid at each level since it was last entered
    let mut slid = vec![0u64; n_start as usize + 1];
    loop {
        let set = SetDescriptor::new(tau, n, r)?;
        let outcome = executor.query(set, p);
        *attempts += outcome.attempts;
        steps.push(SearchStep {
            tau,
            n,
            verdict: outcome.verdict,
            worker: outcome.worker,
            trials: outcome.trials,
        });
        match outcome.verdict {
            Verdict::Contained => {
                if n == 0 {
                    if instance.verifies(tau) {
                        return Ok(WalkEnd::Verified(tau));
                    }
                    return Ok(WalkEnd::SpuriousSingleton);
                }
                n -= 1;
                slid[n as usize] = 0;
            }
            Verdict::NotContained | Verdict::Inconclusive => {
                let stride = 1u64 << n;
                tau = (tau + stride) % r;
                slid[n as usize] += stride;
                if slid[n as usize] >= r {
                    slid[n as usize] = 0;
                    if n == n_start {
                        return Ok(WalkEnd::TopWrapped);
                    }
                    n += 1; // backtrack one level
                }
            }
        }
    }
}

/// Run the search against an executor.
///
/// Failure after the restart budget is data, not an error: the trace comes
/// back with `result: None`.
pub fn solve(
    instance: &ProblemInstance,
    config: &SearchConfig,
    executor: &mut dyn MembershipExecutor,
) -> Result<SearchTrace> {
    validate_config(instance, config)?;
    let mut steps = Vec::new();
    let mut total_attempts = 0u64;

    for restart in 0..=config.max_restarts {
        let end = run_walk(
            instance,
            config.n0,
            0,
            config.p,
            executor,
            &mut steps,
            &mut total_attempts,
        )?;
        if let WalkEnd::Verified(t) = end {
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

/// How membership queries are scheduled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum QueryPlan {
    /// The adaptive walk, one query at a time.
    Serial,
    /// Disjoint top-level sets covering `[0, r)`, scanned concurrently,
    /// followed by a serial descent inside the first confirmed set.
    Parallel { level0: Vec<SetDescriptor> },
}

/// The top-level partition of `[0, r)` into `ceil(r / 2^n0)` sets.
pub fn plan_queries(r: u64, n0: u32, parallel: bool) -> Result<QueryPlan> {
    if n0 >= 63 || (1u64 << n0) >= r {
        return Err(Error::InvalidSet(format!("require 2^{n0} < r = {r}")));
    }
    if !parallel {
        return Ok(QueryPlan::Serial);
    }
    let stride = 1u64 << n0;
    let level0 = (0..r.div_ceil(stride))
        .map(|k| SetDescriptor::new(k * stride % r, n0, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(QueryPlan::Parallel { level0 })
}

/// Check every transition of a trace against the walk rule.
///
/// `Contained` must keep `tau` and decrement `n` (queries at `n = 0` must end
/// the trace or start a restart); anything else must advance `tau` by `2^n`
/// mod `r`, backtracking one level after a full wrap.
pub fn validate_transitions(trace: &SearchTrace, r: u64, n0: u32) -> std::result::Result<(), String> {
    let mut slid = vec![0u64; n0 as usize + 1];
    for (i, pair) in trace.steps.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let restart = b.tau == 0 && b.n == n0 && {
            // a restart is the only legal successor of a terminal step
            match a.verdict {
                Verdict::Contained => a.n == 0,
                _ => {
                    let stride = 1u64 << a.n;
                    a.n == n0 && slid[a.n as usize] + stride >= r
                }
            }
        };
        let expected: Option<(u64, u32)> = match a.verdict {
            Verdict::Contained => {
                if a.n == 0 {
                    None // only a restart may follow
                } else {
                    Some((a.tau, a.n - 1))
                }
            }
            Verdict::NotContained | Verdict::Inconclusive => {
                let stride = 1u64 << a.n;
                let tau = (a.tau + stride) % r;
                if slid[a.n as usize] + stride >= r {
                    if a.n == n0 {
                        None
                    } else {
                        Some((tau, a.n + 1))
                    }
                } else {
                    Some((tau, a.n))
                }
            }
        };
        let ok = match expected {
            Some((tau, n)) => (b.tau == tau && b.n == n) || restart,
            None => restart,
        };
        if !ok {
            return Err(format!(
                "step {i}: ({}, {}, {:?}) -> ({}, {}) violates the transition rule",
                a.tau, a.n, a.verdict, b.tau, b.n
            ));
        }
        // track slid distance for the *next* window
        if restart {
            slid.iter_mut().for_each(|s| *s = 0);
        } else {
            match a.verdict {
                Verdict::Contained => {
                    if a.n > 0 {
                        slid[a.n as usize - 1] = 0;
                    }
                }
                _ => {
                    let stride = 1u64 << a.n;
                    slid[a.n as usize] += stride;
                    if slid[a.n as usize] >= r {
                        slid[a.n as usize] = 0;
                    }
                }
            }
        }
    }
    if let (Some(t), Some(last)) = (trace.result, trace.steps.last()) {
        if last.tau != t || last.n != 0 || last.verdict != Verdict::Contained {
            return Err("result does not come from a confirmed singleton".into());
        }
    }
    Ok(())
}
