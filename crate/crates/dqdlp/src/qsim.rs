//! Dense state-vector engine over the fixed four-register layout.
//!
//! The simulator owns a complex amplitude for every basis state of the
//! `(set, argument, residue, ancilla)` register system and provides the small
//! set of transforms the algorithm needs: register-wide Hadamards, the
//! Fourier transform of the argument register, basis permutations, and
//! measurement. Basis indices place register 1 in the most significant bits:
//!
//! ```text
//! index = ((s * 2^m + x) * 2^m + z) * 2 + anc
//! ```
//!
//! which keeps every argument-register slice a contiguous strided run.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Amplitudes below this are treated as impossible measurement outcomes.
const MEASURE_FLOOR: f64 = 1e-15;

/// Dense states are capped at this many qubits (1 GiB of amplitudes).
const MAX_QUBITS: u32 = 26;

/// The four registers of the algorithm's layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Register {
    /// Register 1: the candidate-set offset `s` (`n` qubits).
    Set,
    /// Register 2: the function argument `x` (`m` qubits).
    Argument,
    /// Register 3: the modular residue `z` (`m` qubits).
    Residue,
    /// Register 4: the single marking ancilla.
    Ancilla,
}

/// Qubit partition `(n, m, m, 1)` of the four registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    /// Width of the set register (may be zero).
    pub set_bits: u32,
    /// Width of the argument and residue registers.
    pub value_bits: u32,
}

impl RegisterLayout {
    /// A layout with `n` set qubits and `m`-qubit argument/residue registers.
    pub fn new(set_bits: u32, value_bits: u32) -> Result<Self> {
        if value_bits == 0 {
            return Err(Error::InvalidLayout("value register needs width >= 1".into()));
        }
        if set_bits >= value_bits {
            return Err(Error::InvalidLayout(format!(
                "set register ({set_bits} qubits) must be narrower than the value registers ({value_bits})"
            )));
        }
        let layout = Self { set_bits, value_bits };
        if layout.total_qubits() > MAX_QUBITS {
            return Err(Error::StateTooLarge(layout.total_qubits()));
        }
        Ok(layout)
    }

    /// Total qubit count `n + 2m + 1`.
    pub fn total_qubits(&self) -> u32 {
        self.set_bits + 2 * self.value_bits + 1
    }

    /// State dimension `2^(n + 2m + 1)`.
    pub fn dim(&self) -> usize {
        1usize << self.total_qubits()
    }

    /// Width of one register.
    pub fn register_bits(&self, register: Register) -> u32 {
        match register {
            Register::Set => self.set_bits,
            Register::Argument | Register::Residue => self.value_bits,
            Register::Ancilla => 1,
        }
    }

    /// Lowest bit position of one register inside the basis index.
    fn register_shift(&self, register: Register) -> u32 {
        match register {
            Register::Set => 2 * self.value_bits + 1,
            Register::Argument => self.value_bits + 1,
            Register::Residue => 1,
            Register::Ancilla => 0,
        }
    }

    /// Pack register values into a basis index.
    pub fn index(&self, basis: &Basis) -> usize {
        let m = self.value_bits;
        ((((basis.s as usize) << m | basis.x as usize) << m | basis.z as usize) << 1)
            | basis.anc as usize
    }

    /// Unpack a basis index into register values.
    pub fn basis(&self, index: usize) -> Basis {
        let m = self.value_bits;
        let value_mask = (1usize << m) - 1;
        Basis {
            anc: (index & 1) as u64,
            z: ((index >> 1) & value_mask) as u64,
            x: ((index >> (m + 1)) & value_mask) as u64,
            s: (index >> (2 * m + 1)) as u64,
        }
    }
}

/// One computational basis state, addressed by register values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Basis {
    pub s: u64,
    pub x: u64,
    pub z: u64,
    pub anc: u64,
}

/// A bijection on basis states, applied as `amps'[map(b)] = amps[b]`.
pub struct BasisMap {
    f: Box<dyn Fn(Basis) -> Basis + Send + Sync>,
}

impl BasisMap {
    pub fn new(f: impl Fn(Basis) -> Basis + Send + Sync + 'static) -> Self {
        Self { f: Box::new(f) }
    }

    /// The identity map.
    pub fn identity() -> Self {
        Self::new(|b| b)
    }

    #[inline]
    pub fn apply(&self, basis: Basis) -> Basis {
        (self.f)(basis)
    }

    /// `self` followed by `other`.
    pub fn then(self, other: BasisMap) -> Self {
        Self::new(move |b| other.apply(self.apply(b)))
    }
}

/// One measurement event: register, observed value, pre-collapse probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub register: Register,
    pub outcome: u64,
    pub probability: f64,
}

/// Dense complex state over a [`RegisterLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The algorithm's initial state: amplitude 1 at `(s, x, z, anc) = (0, 0, 1, 0)`.
    pub fn initial(layout: RegisterLayout) -> Self {
        let mut amps = vec![Complex64::ZERO; layout.dim()];
        let idx = layout.index(&Basis { s: 0, x: 0, z: 1, anc: 0 });
        amps[idx] = Complex64::ONE;
        Self { layout, amps }
    }

    /// Wrap raw amplitudes; the length must match the layout.
    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::InvalidLayout(format!(
                "amplitude vector of length {} does not match dimension {}",
                amps.len(),
                layout.dim()
            )));
        }
        Ok(Self { layout, amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, basis: &Basis) -> Complex64 {
        self.amps[self.layout.index(basis)]
    }

    /// L2 norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Rescale to unit norm.
    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n < MEASURE_FLOOR {
            return Err(Error::InvalidState);
        }
        let inv = 1.0 / n;
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    /// Apply `H` to every qubit of the set or argument register.
    pub fn hadamard(&mut self, register: Register) -> Result<()> {
        if !matches!(register, Register::Set | Register::Argument) {
            return Err(Error::InvalidLayout(
                "Hadamard layers are applied to registers 1 and 2 only".into(),
            ));
        }
        let shift = self.layout.register_shift(register);
        let bits = self.layout.register_bits(register);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..bits {
            let mask = 1usize << (shift + b);
            for i in 0..self.amps.len() {
                if i & mask == 0 {
                    let j = i | mask;
                    let (u, v) = (self.amps[i], self.amps[j]);
                    self.amps[i] = (u + v) * inv_sqrt2;
                    self.amps[j] = (u - v) * inv_sqrt2;
                }
            }
        }
        Ok(())
    }

    /// Apply a basis permutation, verifying injectivity as it goes.
    pub fn permute(&mut self, map: &BasisMap) -> Result<()> {
        let dim = self.amps.len();
        let mut out = vec![Complex64::ZERO; dim];
        let mut seen = vec![false; dim];
        let m = self.layout.value_bits;
        let value_bound = 1u64 << m;
        let set_bound = 1u64 << self.layout.set_bits;
        for idx in 0..dim {
            let target = map.apply(self.layout.basis(idx));
            if target.s >= set_bound
                || target.x >= value_bound
                || target.z >= value_bound
                || target.anc >= 2
            {
                return Err(Error::NotAPermutation);
            }
            let tidx = self.layout.index(&target);
            if seen[tidx] {
                return Err(Error::NotAPermutation);
            }
            seen[tidx] = true;
            out[tidx] = self.amps[idx];
        }
        self.amps = out;
        Ok(())
    }

    /// Fourier-transform the argument register.
    ///
    /// The forward kernel sends `|j>` to `sum_k exp(2 pi i j k / K) |k> / sqrt(K)`;
    /// `inverse` uses the conjugate kernel.
    pub fn fourier_argument(&mut self, inverse: bool) {
        let m = self.layout.value_bits;
        let k = 1usize << m;
        let stride = 1usize << (m + 1); // argument bits sit above residue + ancilla
        let sign = if inverse { -1.0 } else { 1.0 };
        let twiddles: Vec<Complex64> = (0..k / 2)
            .map(|j| Complex64::from_polar(1.0, sign * 2.0 * PI * j as f64 / k as f64))
            .collect();
        let scale = 1.0 / (k as f64).sqrt();
        let mut buf = vec![Complex64::ZERO; k];
        let slice_count = self.amps.len() / (k * stride);
        for outer in 0..slice_count {
            for inner in 0..stride {
                let base = outer * k * stride + inner;
                for (x, slot) in buf.iter_mut().enumerate() {
                    *slot = self.amps[base + x * stride];
                }
                fft_pow2(&mut buf, &twiddles);
                for (x, value) in buf.iter().enumerate() {
                    self.amps[base + x * stride] = value * scale;
                }
            }
        }
    }

    /// Probability mass of all basis states satisfying the predicate.
    pub fn marginal(&self, predicate: impl Fn(&Basis) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| predicate(&self.layout.basis(*i)))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Probability of each value of one register.
    pub fn register_distribution(&self, register: Register) -> Vec<f64> {
        let shift = self.layout.register_shift(register);
        let bits = self.layout.register_bits(register);
        let mask = (1usize << bits) - 1;
        let mut dist = vec![0.0; 1 << bits];
        for (i, a) in self.amps.iter().enumerate() {
            dist[(i >> shift) & mask] += a.norm_sqr();
        }
        dist
    }

    /// Measure one register: sample from its marginal, collapse, renormalize.
    ///
    /// Deterministic for a fixed `rng` stream.
    pub fn measure(&mut self, register: Register, rng: &mut impl Rng) -> Result<MeasurementRecord> {
        let dist = self.register_distribution(register);
        let total: f64 = dist.iter().filter(|p| **p >= MEASURE_FLOOR).sum();
        if total < MEASURE_FLOOR {
            return Err(Error::InvalidState);
        }
        let draw = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut outcome = None;
        for (value, p) in dist.iter().enumerate() {
            if *p < MEASURE_FLOOR {
                continue;
            }
            acc += p;
            if draw < acc {
                outcome = Some(value);
                break;
            }
        }
        // fp slack may leave draw == acc at the end; take the last viable value
        let outcome = outcome.unwrap_or_else(|| {
            dist.iter()
                .rposition(|p| *p >= MEASURE_FLOOR)
                .expect("nonzero total implies a viable outcome")
        });
        let probability = dist[outcome];
        let shift = self.layout.register_shift(register);
        let bits = self.layout.register_bits(register);
        let mask = (1usize << bits) - 1;
        let scale = 1.0 / probability.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i >> shift) & mask == outcome {
                *a *= scale;
            } else {
                *a = Complex64::ZERO;
            }
        }
        Ok(MeasurementRecord {
            register,
            outcome: outcome as u64,
            probability,
        })
    }

    /// Write `(s, x, z, anc, re, im)` rows for every amplitude above 1e-12.
    pub fn dump_csv(&self, writer: &mut impl Write) -> std::io::Result<()> {
        writeln!(writer, "s,x,z,anc,re,im")?;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() > 1e-12 {
                let b = self.layout.basis(i);
                writeln!(writer, "{},{},{},{},{},{}", b.s, b.x, b.z, b.anc, a.re, a.im)?;
            }
        }
        Ok(())
    }
}

/// In-place power-of-two DFT with the kernel baked into `twiddles`.
///
/// Computes `buf[k] = sum_j buf[j] * w^(jk)` where `w = twiddles[1]`; no scaling.
pub(crate) fn fft_pow2(buf: &mut [Complex64], twiddles: &[Complex64]) {
    let k = buf.len();
    debug_assert!(k.is_power_of_two());
    if k == 1 {
        return;
    }
    // bit-reversal permutation
    let bits = k.trailing_zeros();
    for i in 0..k {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= k {
        let half = len / 2;
        let step = k / len;
        for start in (0..k).step_by(len) {
            for offset in 0..half {
                let w = twiddles[offset * step];
                let lo = start + offset;
                let hi = lo + half;
                let t = buf[hi] * w;
                buf[hi] = buf[lo] - t;
                buf[lo] += t;
            }
        }
        len <<= 1;
    }
}
