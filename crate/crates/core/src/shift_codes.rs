//! Codes correcting one deletion (of either bit) together with up to `s+`
//! right-shifts and `s-` left-shifts of 0.
//!
//! Membership: `VT(x) = a mod (n+s+1)`, `wt(x) = b mod 2`, and `psi(x)` lies
//! in a binary narrow-sense BCH code of designed distance `2s+1` shortened
//! to length `n`. Each transposition of `x` is a single substitution of
//! `psi(x)`, so after the deleted bit is reinserted approximately, the BCH
//! decoder removes the remaining displacement.

use serde::{Deserialize, Serialize};

use crate::bch::BchCode;
use crate::error::{Error, Result};
use crate::seqcore::{phi, phi_inverse_gaps, psi, psi_inverse, vt_syndrome, BitString};

#[derive(Clone, Debug)]
pub struct ShiftCodeSpec {
    pub n: usize,
    pub s_plus: usize,
    pub s_minus: usize,
    pub a: u64,
    pub b: u8,
    bch: BchCode,
}

/// Serializable parameters of a [`ShiftCodeSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCodeParams {
    pub n: usize,
    pub s_plus: usize,
    pub s_minus: usize,
    pub a: u64,
    pub b: u8,
}

impl ShiftCodeSpec {
    pub fn new(n: usize, s_plus: usize, s_minus: usize, a: u64, b: u8) -> Result<Self> {
        let s = s_plus + s_minus;
        if a >= (n + s + 1) as u64 {
            return Err(Error::InvalidParameters(format!(
                "residue {a} not below {}",
                n + s + 1
            )));
        }
        if b > 1 {
            return Err(Error::InvalidParameters(format!("parity bit {b}")));
        }
        if n == 0 {
            return Err(Error::InvalidParameters("empty code length".into()));
        }
        let bch = BchCode::for_length(2, n, 2 * s + 1)?;
        Ok(Self {
            n,
            s_plus,
            s_minus,
            a,
            b,
            bch,
        })
    }

    pub fn from_params(p: ShiftCodeParams) -> Result<Self> {
        Self::new(p.n, p.s_plus, p.s_minus, p.a, p.b)
    }

    pub fn params(&self) -> ShiftCodeParams {
        ShiftCodeParams {
            n: self.n,
            s_plus: self.s_plus,
            s_minus: self.s_minus,
            a: self.a,
            b: self.b,
        }
    }

    pub fn s(&self) -> usize {
        self.s_plus + self.s_minus
    }

    pub fn modulus(&self) -> u64 {
        (self.n + self.s() + 1) as u64
    }

    pub fn bch(&self) -> &BchCode {
        &self.bch
    }

    /// BCH parity minus the `s log2(n+s+1)` term it stands in for.
    pub fn shortening_slack(&self) -> f64 {
        self.bch.parity_len() as f64 - self.s() as f64 * (self.modulus() as f64).log2()
    }
}

fn bits_u64(x: &BitString) -> Vec<u64> {
    x.bits().iter().map(|&b| b as u64).collect()
}

fn in_bch(x: &BitString, bch: &BchCode) -> bool {
    bch.is_codeword(&bits_u64(&psi(x)))
}

pub fn membership(x: &BitString, spec: &ShiftCodeSpec) -> bool {
    x.len() == spec.n
        && vt_syndrome(x) % spec.modulus() == spec.a
        && (x.weight() % 2) as u8 == spec.b
        && in_bch(x, &spec.bch)
}

/// Classic VT reinsertion for a word of length `n` or `n - 1`.
pub fn vt_decode_deletion(y: &BitString, a: u64, modulus: u64, n: usize) -> Result<BitString> {
    if modulus < n as u64 + 1 {
        return Err(Error::InvalidParameters(format!(
            "modulus {modulus} below n+1"
        )));
    }
    let delta = (a % modulus + modulus - vt_syndrome(y) % modulus) % modulus;
    if y.len() == n {
        return if delta == 0 {
            Ok(y.clone())
        } else {
            Err(Error::NoSolution("syndrome mismatch without deletion".into()))
        };
    }
    if y.len() + 1 != n {
        return Err(Error::LengthMismatch {
            expected: n - 1,
            actual: y.len(),
        });
    }
    let w = y.weight() as u64;
    if delta <= w {
        Ok(insert_zero(y, delta as usize))
    } else {
        insert_one(y, (delta - w - 1) as usize)
    }
}

/// Inserts a 0 so that `ones_right` ones follow it.
fn insert_zero(y: &BitString, ones_right: usize) -> BitString {
    let mut gaps = phi(y).into_gaps();
    let w = gaps.len() - 1;
    gaps[w - ones_right.min(w)] += 1;
    phi_inverse_gaps(&gaps)
}

/// Inserts a 1 so that `zeros_left` zeros precede it.
fn insert_one(y: &BitString, zeros_left: usize) -> Result<BitString> {
    let zeros = y.len() - y.weight();
    if zeros_left > zeros {
        return Err(Error::NoSolution(format!(
            "cannot place a 1 after {zeros_left} of {zeros} zeros"
        )));
    }
    let mut bits = y.bits().to_vec();
    let pos = if zeros_left == 0 {
        0
    } else {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b == 0)
            .nth(zeros_left - 1)
            .map(|(i, _)| i + 1)
            .expect("counted above")
    };
    bits.insert(pos, 1);
    Ok(BitString::new(bits).expect("binary"))
}

/// The offset `VT(x) - VT(y)` reduced into `[-s-, n+s+]`, the range the
/// channel can produce.
pub fn lifted_delta(y: &BitString, spec: &ShiftCodeSpec) -> i64 {
    let m = spec.modulus() as i64;
    let r = (spec.a as i64 - vt_syndrome(y) as i64).rem_euclid(m);
    let lo = -(spec.s_minus as i64);
    if r > spec.n as i64 + spec.s_plus as i64 {
        r - m
    } else {
        debug_assert!(r >= lo);
        r
    }
}

pub fn decode(y: &BitString, spec: &ShiftCodeSpec) -> Result<BitString> {
    let n = spec.n;
    let x_hat = if y.len() == n {
        y.clone()
    } else if y.len() + 1 == n {
        let delta = lifted_delta(y, spec);
        let shift = spec.s_minus as i64 - spec.s_plus as i64;
        let w = y.weight();
        let deleted_zero = (w % 2) as u8 == spec.b;
        if deleted_zero {
            let m = (delta + shift).clamp(0, w as i64) as usize;
            insert_zero(y, m)
        } else {
            let zeros = y.len() - w;
            let m = (delta - w as i64 - 1 + shift).clamp(0, zeros as i64) as usize;
            insert_one(y, m)?
        }
    } else {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: y.len(),
        });
    };
    let corrected = spec.bch.decode(&bits_u64(&psi(&x_hat)))?;
    let bits: Vec<u8> = corrected.iter().map(|&c| c as u8).collect();
    let x = psi_inverse(&BitString::new(bits)?);
    if !membership(&x, spec) {
        return Err(Error::DecodeFailure("correction is not a codeword".into()));
    }
    Ok(x)
}

/// All codewords of the code with parameters `(n, s+, s-, a, b)`.
pub fn codebook(spec: &ShiftCodeSpec) -> Vec<BitString> {
    BitString::all(spec.n).filter(|x| membership(x, spec)).collect()
}

/// Codebook sizes for every `(a, b)`, indexed `[a][b]`.
pub fn residue_counts(n: usize, s_plus: usize, s_minus: usize) -> Result<Vec<[u64; 2]>> {
    let spec = ShiftCodeSpec::new(n, s_plus, s_minus, 0, 0)?;
    let m = spec.modulus();
    let mut counts = vec![[0u64; 2]; m as usize];
    for x in BitString::all(n) {
        if in_bch(&x, &spec.bch) {
            counts[(vt_syndrome(&x) % m) as usize][x.weight() % 2] += 1;
        }
    }
    Ok(counts)
}

/// The `(a, b)` with the largest codebook and its size.
pub fn best_residue(n: usize, s_plus: usize, s_minus: usize) -> Result<(ShiftCodeSpec, u64)> {
    let counts = residue_counts(n, s_plus, s_minus)?;
    let mut best = (0usize, 0usize, 0u64);
    for (a, c) in counts.iter().enumerate() {
        for (b, &size) in c.iter().enumerate() {
            if size > best.2 {
                best = (a, b, size);
            }
        }
    }
    Ok((
        ShiftCodeSpec::new(n, s_plus, s_minus, best.0 as u64, best.1 as u8)?,
        best.2,
    ))
}
