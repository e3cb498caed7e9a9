//! The set-membership test: builds the ten-gate circuit for a candidate set,
//! extracts exact probabilities, and samples post-selected trials.
//!
//! A candidate set `S = {tau + s mod r | s = 0..2^n - 1}` either contains the
//! solution exponent or it does not, and the two cases leave very different
//! probability mass on the marker residue 1 once the ancilla measures 1. The
//! simulator realizes the circuit with the true (non-exact) Fourier transform;
//! no divisibility assumption on the order is made.

use crate::error::{Error, Result};
use crate::gates;
use crate::numt::ProblemInstance;
use crate::qsim::{Register, RegisterLayout, StateVector};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// The residue value whose observation signals membership.
pub const MARKER_RESIDUE: u64 = 1;

/// Default post-selection budget for a set of size `2^n`.
pub fn default_max_attempts(n: u32) -> u32 {
    64u32 << n
}

/// The candidate set `S = {tau + s mod r | s = 0..2^n - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDescriptor {
    /// Start offset in `[0, r)`.
    pub tau: u64,
    /// Size exponent; the set has `2^n` elements.
    pub n: u32,
}

impl SetDescriptor {
    pub fn new(tau: u64, n: u32, r: u64) -> Result<Self> {
        if n >= 63 || (1u64 << n) >= r {
            return Err(Error::InvalidSet(format!("set size 2^{n} must be < r = {r}")));
        }
        if tau >= r {
            return Err(Error::InvalidSet(format!("tau = {tau} outside [0, {r})")));
        }
        Ok(Self { tau, n })
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    /// Whether `t` lies in the set, mod `r`.
    pub fn contains(&self, t: u64, r: u64) -> bool {
        (t + r - self.tau % r) % r < self.size()
    }

    /// The elements in offset order.
    pub fn elements(&self, r: u64) -> impl Iterator<Item = u64> + '_ {
        let tau = self.tau;
        (0..self.size()).map(move |s| (tau + s) % r)
    }
}

/// Exact probabilities read off the pre-measurement state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityProbe {
    /// Probability that the ancilla measures 1.
    pub p_fourth_1: f64,
    /// Probability of the marker residue given the ancilla measured 1.
    pub p_third_marker_given_fourth_1: f64,
    /// Joint probability of ancilla 1 and the marker residue.
    pub p_joint_marker: f64,
}

fn check_set(instance: &ProblemInstance, set: &SetDescriptor) -> Result<()> {
    if set.size() >= instance.r {
        return Err(Error::InvalidSet(format!(
            "set size {} must be < r = {}",
            set.size(),
            instance.r
        )));
    }
    if set.n + 1 >= instance.m {
        return Err(Error::InvalidSet(format!(
            "set exponent n = {} must satisfy n < m - 1 = {}",
            set.n,
            instance.m - 1
        )));
    }
    Ok(())
}

/// Run the ten-gate chain and return the pre-measurement state.
pub fn circuit_output(instance: &ProblemInstance, set: &SetDescriptor) -> Result<StateVector> {
    let mut stages = CircuitStages::new(instance, set)?;
    let mut state = stages.next_state()?;
    while let Some(next) = stages.advance(state)? {
        state = next;
    }
    Ok(stages.into_final())
}

/// Step-by-step circuit driver; useful for inspecting intermediate states.
struct CircuitStages {
    instance: ProblemInstance,
    tau: u64,
    layout: RegisterLayout,
    step: usize,
    done: Option<StateVector>,
}

impl CircuitStages {
    fn new(instance: &ProblemInstance, set: &SetDescriptor) -> Result<Self> {
        check_set(instance, set)?;
        let layout = RegisterLayout::new(set.n, instance.m)?;
        Ok(Self {
            instance: instance.clone(),
            tau: set.tau,
            layout,
            step: 0,
            done: None,
        })
    }

    fn next_state(&mut self) -> Result<StateVector> {
        Ok(StateVector::initial(self.layout))
    }

    /// Apply the next gate; returns `None` once all ten have run.
    fn advance(&mut self, mut state: StateVector) -> Result<Option<StateVector>> {
        let inst = &self.instance;
        match self.step {
            0 => state.hadamard(Register::Set)?,
            1 => state.hadamard(Register::Argument)?,
            2 => state.permute(&gates::controlled_b_power(inst, false))?,
            3 => state.permute(&gates::shifted_a_power(self.tau, inst, false))?,
            4 => state.fourier_argument(true),
            5 => state.permute(&gates::mark_zero_argument())?,
            6 => state.fourier_argument(false),
            7 => state.permute(&gates::shifted_a_power(self.tau, inst, true))?,
            8 => state.permute(&gates::controlled_b_power(inst, true))?,
            9 => {
                state.hadamard(Register::Set)?;
                state.hadamard(Register::Argument)?;
            }
            _ => {
                self.done = Some(state);
                return Ok(None);
            }
        }
        self.step += 1;
        Ok(Some(state))
    }

    fn into_final(self) -> StateVector {
        self.done.expect("driver ran to completion")
    }
}

/// All intermediate states of the chain, initial state first (11 entries).
pub fn circuit_states(instance: &ProblemInstance, set: &SetDescriptor) -> Result<Vec<StateVector>> {
    let mut stages = CircuitStages::new(instance, set)?;
    let mut out = Vec::with_capacity(11);
    let mut state = stages.next_state()?;
    out.push(state.clone());
    while let Some(next) = stages.advance(state)? {
        out.push(next.clone());
        state = next;
    }
    Ok(out)
}

/// Exact marginals of the pre-measurement state; no randomness involved.
pub fn probe(instance: &ProblemInstance, set: &SetDescriptor) -> Result<ProbabilityProbe> {
    Ok(MembershipDistribution::prepare(instance, set)?.probe())
}

/// Cached measurement distribution of one circuit.
///
/// The pre-measurement state is a deterministic function of the instance and
/// the set, so trials sample from its joint `(ancilla, residue)` marginal;
/// the draw sequence is identical in distribution to preparing a fresh state
/// per attempt and measuring register 4 then register 3.
#[derive(Debug, Clone)]
pub struct MembershipDistribution {
    set: SetDescriptor,
    p_fourth_1: f64,
    /// Conditional residue distribution given ancilla = 1 (length `2^m`).
    residue_given_fourth_1: Vec<f64>,
    /// Diagnostic: mass with a nonzero argument register and ancilla = 1.
    p_argument_nonzero_and_fourth_1: f64,
}

impl MembershipDistribution {
    pub fn prepare(instance: &ProblemInstance, set: &SetDescriptor) -> Result<Self> {
        let state = circuit_output(instance, set)?;
        let m_bits = instance.m;
        let mut p4 = 0.0;
        let mut leak = 0.0;
        let mut residue = vec![0.0; 1usize << m_bits];
        for (idx, amp) in state.amps().iter().enumerate() {
            if idx & 1 == 1 {
                let w = amp.norm_sqr();
                p4 += w;
                let b = state.layout.basis(idx);
                residue[b.z as usize] += w;
                if b.x != 0 {
                    leak += w;
                }
            }
        }
        if p4 > 0.0 {
            for p in &mut residue {
                *p /= p4;
            }
        }
        Ok(Self {
            set: *set,
            p_fourth_1: p4,
            residue_given_fourth_1: residue,
            p_argument_nonzero_and_fourth_1: leak,
        })
    }

    pub fn set(&self) -> SetDescriptor {
        self.set
    }

    pub fn probe(&self) -> ProbabilityProbe {
        let cond = self.residue_given_fourth_1[MARKER_RESIDUE as usize];
        ProbabilityProbe {
            p_fourth_1: self.p_fourth_1,
            p_third_marker_given_fourth_1: cond,
            p_joint_marker: self.p_fourth_1 * cond,
        }
    }

    /// Conditional residue distribution given the ancilla measured 1.
    pub fn residue_distribution(&self) -> &[f64] {
        &self.residue_given_fourth_1
    }

    /// Diagnostic mass at `argument != 0 && ancilla = 1`; zero whenever the
    /// order divides `2^m`, small but nonzero otherwise.
    pub fn argument_leakage(&self) -> f64 {
        self.p_argument_nonzero_and_fourth_1
    }

    /// Post-select one trial: prepare-and-measure until the ancilla reads 1
    /// or the attempt budget runs out.
    pub fn sample_trial(&self, rng: &mut impl Rng, max_attempts: u32) -> TrialOutcome {
        for attempt in 1..=max_attempts {
            if rng.random::<f64>() < self.p_fourth_1 {
                let draw = rng.random::<f64>();
                let mut acc = 0.0;
                let mut third_value = self.residue_given_fourth_1.len() as u64 - 1;
                for (value, p) in self.residue_given_fourth_1.iter().enumerate() {
                    acc += p;
                    if draw < acc {
                        third_value = value as u64;
                        break;
                    }
                }
                return TrialOutcome::PostSelected {
                    third_value,
                    attempts: attempt,
                };
            }
        }
        TrialOutcome::Inconclusive {
            attempts: max_attempts,
        }
    }
}

/// One post-selection trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrialOutcome {
    /// The ancilla measured 1; the residue register was then read out.
    PostSelected { third_value: u64, attempts: u32 },
    /// The attempt budget ran out before the ancilla measured 1.
    Inconclusive { attempts: u32 },
}

impl TrialOutcome {
    pub fn attempts(&self) -> u32 {
        match self {
            TrialOutcome::PostSelected { attempts, .. } => *attempts,
            TrialOutcome::Inconclusive { attempts } => *attempts,
        }
    }

    /// `Some(true)` on a marker hit, `None` when inconclusive.
    pub fn marker_hit(&self) -> Option<bool> {
        match self {
            TrialOutcome::PostSelected { third_value, .. } => {
                Some(*third_value == MARKER_RESIDUE)
            }
            TrialOutcome::Inconclusive { .. } => None,
        }
    }
}

/// Aggregated answer of `p` post-selected trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Contained,
    NotContained,
    Inconclusive,
}

/// Verdict plus the trial evidence behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictOutcome {
    pub verdict: Verdict,
    pub trials: Vec<TrialOutcome>,
    /// Total prepare-and-measure attempts across the trials.
    pub attempts_total: u64,
}

/// Collect `p` post-selected trials; `Contained` iff at least one marker hit.
///
/// Any inconclusive trial makes the whole verdict inconclusive, with the
/// partial trial list attached.
pub fn membership_verdict(
    dist: &MembershipDistribution,
    p: u32,
    rng: &mut impl Rng,
    max_attempts: u32,
) -> VerdictOutcome {
    let mut trials = Vec::with_capacity(p as usize);
    let mut attempts_total = 0u64;
    let mut any_hit = false;
    let mut any_inconclusive = false;
    for _ in 0..p {
        let trial = dist.sample_trial(rng, max_attempts);
        attempts_total += trial.attempts() as u64;
        match trial.marker_hit() {
            Some(true) => any_hit = true,
            Some(false) => {}
            None => any_inconclusive = true,
        }
        trials.push(trial);
    }
    let verdict = if any_inconclusive {
        Verdict::Inconclusive
    } else if any_hit {
        Verdict::Contained
    } else {
        Verdict::NotContained
    };
    VerdictOutcome {
        verdict,
        trials,
        attempts_total,
    }
}

/// Line-oriented trial log entry (`membership` subcommand output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub tau: u64,
    pub n: u32,
    pub attempt: u32,
    pub fourth: u8,
    pub third: Option<u64>,
    pub marker_hit: Option<bool>,
}

/// Flatten trial outcomes into log records for one set.
pub fn trial_records(set: &SetDescriptor, trials: &[TrialOutcome]) -> Vec<TrialRecord> {
    trials
        .iter()
        .map(|t| match t {
            TrialOutcome::PostSelected { third_value, attempts } => TrialRecord {
                tau: set.tau,
                n: set.n,
                attempt: *attempts,
                fourth: 1,
                third: Some(*third_value),
                marker_hit: Some(*third_value == MARKER_RESIDUE),
            },
            TrialOutcome::Inconclusive { attempts } => TrialRecord {
                tau: set.tau,
                n: set.n,
                attempt: *attempts,
                fourth: 0,
                third: None,
                marker_hit: None,
            },
        })
        .collect()
}

/// Shared handle used by executors that reuse prepared distributions.
pub type SharedDistribution = Arc<MembershipDistribution>;
