//! The original three-register discrete-logarithm circuit at desk scale.
//!
//! Serves two purposes: an independent end-to-end oracle (accepted candidates
//! must agree with brute force) and the reference point for qubit accounting.
//! The register file is `(x, y, z)` with `m` qubits each, so this module
//! keeps its own flat state rather than reusing the four-register engine.

use crate::error::{Error, Result};
use crate::numt::{mod_inverse, mul_mod, ProblemInstance};
use crate::qsim::fft_pow2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One run's measurements and the decoded candidate, when accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorOutcome {
    pub x_out: u64,
    pub y_out: u64,
    pub t_candidate: Option<u64>,
}

/// Qubit budgets: the reference circuit versus the set-membership circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitReport {
    /// `3m` for the three-register reference.
    pub baseline: u32,
    /// `2m + n + 1` for the four-register membership circuit.
    pub distributed: u32,
}

/// `(3m, 2m + n + 1)` for the instance's register width and set exponent `n`.
pub fn qubit_report(instance: &ProblemInstance, n: u32) -> Result<QubitReport> {
    if n + 1 >= instance.m {
        return Err(Error::InvalidSet(format!(
            "n = {n} must satisfy n < m - 1 = {}",
            instance.m - 1
        )));
    }
    Ok(QubitReport {
        baseline: 3 * instance.m,
        distributed: 2 * instance.m + n + 1,
    })
}

/// The joint distribution of the two frequency registers after the circuit.
///
/// Memory is `2^(2m)` doubles plus a `2^(2m)`-point transform workspace, so
/// `m` is capped at 8.
pub struct BaselineDistribution {
    m: u32,
    joint: Vec<f64>,
}

impl BaselineDistribution {
    pub fn prepare(instance: &ProblemInstance) -> Result<Self> {
        let m = instance.m;
        if m > 8 {
            return Err(Error::StateTooLarge(3 * m));
        }
        let k = 1usize << m;
        let modulus = instance.modulus;
        // state over (x, y, z): uniform over (x, y), z = a^x b^y mod N
        let mut amps = vec![Complex64::ZERO; k * k * k];
        let scale = 1.0 / k as f64;
        let mut a_pow = 1u64;
        for x in 0..k {
            let mut factor = a_pow;
            for y in 0..k {
                let z = factor as usize;
                amps[(x * k + y) * k + z] = Complex64::new(scale, 0.0);
                factor = mul_mod(factor, instance.b, modulus);
            }
            a_pow = mul_mod(a_pow, instance.a, modulus);
        }
        // inverse transform (conjugate kernel) on both frequency registers
        let twiddles: Vec<Complex64> = (0..k / 2)
            .map(|j| Complex64::from_polar(1.0, -2.0 * PI * j as f64 / k as f64))
            .collect();
        let fscale = 1.0 / (k as f64).sqrt();
        let mut buf = vec![Complex64::ZERO; k];
        // x axis: stride k*k
        for rest in 0..k * k {
            for (x, slot) in buf.iter_mut().enumerate() {
                *slot = amps[x * k * k + rest];
            }
            fft_pow2(&mut buf, &twiddles);
            for (x, value) in buf.iter().enumerate() {
                amps[x * k * k + rest] = value * fscale;
            }
        }
        // y axis: stride k
        for outer in 0..k {
            for inner in 0..k {
                let base = outer * k * k + inner;
                for (y, slot) in buf.iter_mut().enumerate() {
                    *slot = amps[base + y * k];
                }
                fft_pow2(&mut buf, &twiddles);
                for (y, value) in buf.iter().enumerate() {
                    amps[base + y * k] = value * fscale;
                }
            }
        }
        let mut joint = vec![0.0f64; k * k];
        for (i, a) in amps.iter().enumerate() {
            joint[i / k] += a.norm_sqr();
        }
        Ok(Self { m, joint })
    }

    /// Probability of measuring `(x, y)` on the frequency registers.
    pub fn joint(&self, x: u64, y: u64) -> f64 {
        self.joint[(x as usize) << self.m | y as usize]
    }

    fn sample(&self, rng: &mut impl Rng) -> (u64, u64) {
        let draw = rng.random::<f64>();
        let mut acc = 0.0;
        for (i, p) in self.joint.iter().enumerate() {
            acc += p;
            if draw < acc {
                return ((i >> self.m) as u64, (i & ((1 << self.m) - 1)) as u64);
            }
        }
        let last = self.joint.len() - 1;
        ((last >> self.m) as u64, (last & ((1 << self.m) - 1)) as u64)
    }
}

/// Decode measured frequencies into a candidate exponent.
///
/// Rounds `x r / 2^m` to the nearest integer to recover the harmonic `l`,
/// likewise `y -> t l mod r`, and inverts `l` when possible. Candidates are
/// accepted only if they verify classically.
pub fn decode(x_out: u64, y_out: u64, instance: &ProblemInstance) -> Option<u64> {
    let r = instance.r;
    let m = instance.m;
    let round = |v: u64| -> u64 {
        let num = v as u128 * r as u128 + (1u128 << (m - 1));
        ((num >> m) % r as u128) as u64
    };
    let l = round(x_out);
    let tl = round(y_out);
    let l_inv = mod_inverse(l, r).ok()?;
    let candidate = mul_mod(tl, l_inv, r);
    instance.verifies(candidate).then_some(candidate)
}

/// One prepare-measure-decode run.
pub fn shor_dlp_run(
    distribution: &BaselineDistribution,
    instance: &ProblemInstance,
    rng: &mut impl Rng,
) -> ShorOutcome {
    let (x_out, y_out) = distribution.sample(rng);
    ShorOutcome {
        x_out,
        y_out,
        t_candidate: decode(x_out, y_out, instance),
    }
}
