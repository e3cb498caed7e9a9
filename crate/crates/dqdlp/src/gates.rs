//! The algorithm's gate family as basis maps over the four-register layout.
//!
//! Every gate is a modular multiplication of the residue register controlled
//! by the set and/or argument registers, except for the ancilla marker. Basis
//! states with `z >= N` are untouched, which keeps each map a total bijection;
//! they are never reachable from the initial state.

use crate::error::{Error, Result};
use crate::numt::{mod_pow, mul_mod, ProblemInstance};
use crate::qsim::BasisMap;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Residue powers `c^e mod N` for `e = 0..r-1`, indexed by exponent mod r.
fn power_table(c: u64, inst: &ProblemInstance) -> Vec<u64> {
    let mut table = Vec::with_capacity(inst.r as usize);
    let mut v = 1u64;
    for _ in 0..inst.r {
        table.push(v);
        v = mul_mod(v, c, inst.modulus);
    }
    table
}

#[inline]
fn mul_residue(z: u64, factor: u64, modulus: u64) -> u64 {
    if z < modulus {
        mul_mod(z, factor, modulus)
    } else {
        z
    }
}

/// Single-register multiplication: `z -> z * c mod N` for `z < N`.
pub fn residue_mul(c: u64, inst: &ProblemInstance) -> Result<BasisMap> {
    // c must be invertible for the map to be a bijection on [0, N)
    mod_pow(c, -1, inst.modulus)?;
    let modulus = inst.modulus;
    let c = c % modulus;
    Ok(BasisMap::new(move |mut b| {
        b.z = mul_residue(b.z, c, modulus);
        b
    }))
}

/// Argument-controlled power: `(x, z) -> (x, z * c^{+-x} mod N)`.
///
/// `dagger` selects the negative exponent.
pub fn controlled_power(c: u64, inst: &ProblemInstance, dagger: bool) -> Result<BasisMap> {
    let base = if dagger { mod_pow(c, -1, inst.modulus)? } else { c % inst.modulus };
    // exponents reduce mod r because c lies in the orbit of a
    let table = power_table(base, inst);
    let r = inst.r;
    let modulus = inst.modulus;
    Ok(BasisMap::new(move |mut b| {
        let factor = table[(b.x % r) as usize];
        b.z = mul_residue(b.z, factor, modulus);
        b
    }))
}

/// The target-value ladder `(x, z) -> (x, z * b^{+-x} mod N)`.
pub fn controlled_b_power(inst: &ProblemInstance, dagger: bool) -> BasisMap {
    controlled_power(inst.b, inst, dagger).expect("b = a^t is invertible by the instance promise")
}

/// The set-shifted generator ladder `(s, x, z) -> (s, x, z * a^{e(s+tau)x} mod N)`.
///
/// The forward gate uses `e = -1`; `dagger` negates the exponent and inverts
/// the forward gate exactly.
pub fn shifted_a_power(tau: u64, inst: &ProblemInstance, dagger: bool) -> BasisMap {
    let table = power_table(inst.a, inst);
    let r = inst.r;
    let modulus = inst.modulus;
    let tau = tau % r;
    BasisMap::new(move |mut b| {
        let e = (((b.s + tau) as u128 * b.x as u128) % r as u128) as u64;
        let exponent = if dagger { e } else { (r - e) % r };
        b.z = mul_residue(b.z, table[exponent as usize], modulus);
        b
    })
}

/// Set-index iteration: applies `u` to `(x, z)` once per unit of `s`.
pub fn iterate_by_set(u: BasisMap) -> BasisMap {
    BasisMap::new(move |b| {
        let mut cur = b;
        for _ in 0..b.s {
            cur = u.apply(cur);
            debug_assert_eq!(cur.s, b.s, "iterated map must not touch the set register");
        }
        cur
    })
}

/// The compositional construction of [`shifted_a_power`] with `e = -1`:
/// set-iterated inverse generator ladder followed by the `a^tau` ladder.
pub fn shifted_a_power_composed(tau: u64, inst: &ProblemInstance) -> Result<BasisMap> {
    let per_set = controlled_power(inst.a, inst, true)?;
    let a_tau = mod_pow(inst.a, (tau % inst.r) as i64, inst.modulus)?;
    let tau_ladder = controlled_power(a_tau, inst, true)?;
    Ok(iterate_by_set(per_set).then(tau_ladder))
}

/// Flip the ancilla exactly when the argument register reads zero.
pub fn mark_zero_argument() -> BasisMap {
    BasisMap::new(|mut b| {
        if b.x == 0 {
            b.anc ^= 1;
        }
        b
    })
}

/// Fourier eigenvector of the modular-multiplication family, supported on the
/// orbit `{a^k mod N}` with amplitude `w_r^{-l k} / sqrt(r)` at `a^k`.
#[derive(Debug, Clone)]
pub struct EigenVector {
    /// Frequency index `l` in `[0, r)`.
    pub index: u64,
    /// Amplitudes over residue values, length `2^m`.
    pub amps: Vec<Complex64>,
}

impl EigenVector {
    pub fn new(l: u64, inst: &ProblemInstance) -> Result<Self> {
        if l >= inst.r {
            return Err(Error::InvalidInstance(format!(
                "eigenvector index {l} outside [0, {})",
                inst.r
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << inst.m];
        let scale = 1.0 / (inst.r as f64).sqrt();
        for (k, residue) in inst.orbit().into_iter().enumerate() {
            let phase = -2.0 * PI * (l as f64) * (k as f64) / inst.r as f64;
            amps[residue as usize] = Complex64::from_polar(scale, phase);
        }
        Ok(Self { index: l, amps })
    }

    pub fn inner(&self, other: &EigenVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}
