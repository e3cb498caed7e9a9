//! Classical modular number theory.
//!
//! Powers, inverses, multiplicative orders, and the brute-force
//! discrete-logarithm oracle that backs verification and test ground truth.
//! Everything here is a pure function on unsigned 64-bit values with 128-bit
//! intermediates, so products like `a * z` cannot overflow.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Multiply two residues without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 1);
    ((a as u128 * b as u128) % modulus as u128) as u64
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Modular inverse by the extended Euclidean algorithm.
pub fn mod_inverse(value: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 || gcd(value % modulus.max(1), modulus) != 1 {
        return Err(Error::NotInvertible { value, modulus });
    }
    let (mut old_r, mut r) = (value as i128 % modulus as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    Ok(((old_s % modulus as i128 + modulus as i128) % modulus as i128) as u64)
}

fn pow_mod_u(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// `base^exp mod modulus`, with negative exponents routed through the
/// modular inverse. Requires gcd(base, modulus) = 1 when `exp < 0`.
pub fn mod_pow(base: u64, exp: i64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::InvalidInstance("modulus must be >= 1".into()));
    }
    if exp >= 0 {
        Ok(pow_mod_u(base, exp as u64, modulus))
    } else {
        let inv = mod_inverse(base % modulus, modulus)?;
        Ok(pow_mod_u(inv, exp.unsigned_abs(), modulus))
    }
}

/// Smallest r >= 1 with `a^r = 1 (mod modulus)`, by bounded iteration.
pub fn multiplicative_order(a: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 || gcd(a % modulus, modulus) != 1 {
        return Err(Error::NoOrder { a, modulus });
    }
    let mut v = a % modulus;
    let mut r = 1u64;
    while v != 1 {
        v = mul_mod(v, a, modulus);
        r += 1;
        if r > modulus {
            // unreachable for gcd(a, N) = 1; keeps the loop total
            return Err(Error::NoOrder { a, modulus });
        }
    }
    Ok(r)
}

fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Number of bits needed to index values in `[0, x]`, i.e. ceil(log2(x)).
pub fn bits_for(x: u64) -> u32 {
    ceil_log2(x)
}

/// A discrete-logarithm instance: find t with `a^t = b (mod modulus)`.
///
/// Construction derives the multiplicative order `r`, checks the solvability
/// promise, and resolves the working register width `m` from the precision
/// parameter `epsilon` (`m >= ceil(log2 r) + ceil(log2(1/epsilon))` and
/// `2^m >= modulus`). The solution itself is not retained; use
/// [`brute_force_dlp`] where ground truth is needed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemInstance {
    pub a: u64,
    pub b: u64,
    pub modulus: u64,
    /// Multiplicative order of `a` modulo `modulus`.
    pub r: u64,
    /// Qubit width of the argument and residue registers.
    pub m: u32,
    /// Precision parameter used to derive `m`.
    pub epsilon: f64,
}

impl ProblemInstance {
    /// Build an instance with the default precision `epsilon = 0.5`.
    pub fn new(a: u64, b: u64, modulus: u64) -> Result<Self> {
        Self::with_params(a, b, modulus, None, None, 0.5)
    }

    /// Build an instance, optionally pinning `r` and `m`.
    ///
    /// A supplied `r` must equal the actual multiplicative order; a supplied
    /// `m` must satisfy both width constraints.
    pub fn with_params(
        a: u64,
        b: u64,
        modulus: u64,
        r: Option<u64>,
        m: Option<u32>,
        epsilon: f64,
    ) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidInstance("modulus must be >= 2".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidInstance("epsilon must lie in (0, 1]".into()));
        }
        let a = a % modulus;
        let b = b % modulus;
        if a == 0 || gcd(a, modulus) != 1 {
            return Err(Error::InvalidInstance(format!(
                "gcd({a}, {modulus}) != 1"
            )));
        }
        let order = multiplicative_order(a, modulus)?;
        if let Some(r) = r {
            if r != order {
                return Err(Error::InvalidInstance(format!(
                    "supplied r = {r} is not the multiplicative order {order}"
                )));
            }
        }
        // solvability promise: some t in [0, order) has a^t = b
        let mut v = 1u64;
        let mut solvable = false;
        for _ in 0..order {
            if v == b {
                solvable = true;
                break;
            }
            v = mul_mod(v, a, modulus);
        }
        if !solvable {
            return Err(Error::UnsolvableInstance { a, b, modulus });
        }
        let precision_bits = (1.0 / epsilon).log2().ceil().max(0.0) as u32;
        let m_min = (ceil_log2(order) + precision_bits).max(ceil_log2(modulus));
        let m = match m {
            None => m_min,
            Some(m) => {
                if m < ceil_log2(order) + precision_bits {
                    return Err(Error::InvalidInstance(format!(
                        "m = {m} is below ceil(log2 r) + ceil(log2 1/eps) = {}",
                        ceil_log2(order) + precision_bits
                    )));
                }
                if (1u128 << m) < modulus as u128 {
                    return Err(Error::InvalidInstance(format!(
                        "2^m = 2^{m} cannot hold residues mod {modulus}"
                    )));
                }
                m
            }
        };
        Ok(Self {
            a,
            b,
            modulus,
            r: order,
            m,
            epsilon,
        })
    }

    /// The residue orbit `{a^k mod N | k = 0..r-1}` in exponent order.
    pub fn orbit(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.r as usize);
        let mut v = 1u64;
        for _ in 0..self.r {
            out.push(v);
            v = mul_mod(v, self.a, self.modulus);
        }
        out
    }

    /// True when `candidate` solves the instance.
    pub fn verifies(&self, candidate: u64) -> bool {
        pow_mod_u(self.a, candidate % self.r, self.modulus) == self.b
    }
}

/// A verified solution exponent in `[0, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlpSolution {
    pub t: u64,
}

/// Scan t = 0..r-1 and return the first t with `a^t = b (mod N)`.
pub fn brute_force_dlp(instance: &ProblemInstance) -> Result<DlpSolution> {
    let mut v = 1u64;
    for t in 0..instance.r {
        if v == instance.b {
            return Ok(DlpSolution { t });
        }
        v = mul_mod(v, instance.a, instance.modulus);
    }
    Err(Error::UnsolvableInstance {
        a: instance.a,
        b: instance.b,
        modulus: instance.modulus,
    })
}

/// The shifted residue `a^{-s*x} * b^x mod N`.
///
/// Constant 1 in `x` exactly when `s` solves the instance, which is what the
/// membership circuit detects.
pub fn candidate_residue(s: u64, x: u64, instance: &ProblemInstance) -> u64 {
    let r = instance.r;
    let e = ((s as u128 % r as u128) * (x as u128 % r as u128) % r as u128) as u64;
    // a^{-e} = a^{r - e} since a^r = 1
    let a_part = pow_mod_u(instance.a, (r - e) % r, instance.modulus);
    let b_part = pow_mod_u(instance.b, x % r, instance.modulus);
    mul_mod(a_part, b_part, instance.modulus)
}
