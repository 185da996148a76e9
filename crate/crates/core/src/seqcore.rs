//! Sequence transforms shared by every code family.
//!
//! A binary string `x` with weight `w` is written uniquely as
//! `0^{u_1} 1 0^{u_2} 1 ... 1 0^{u_{w+1}}`; the run-gap vector
//! `(u_1, ..., u_{w+1})` is returned by [`phi`]. Appending a 1 to `x` and
//! dropping the (then empty) trailing gap yields the same vector, so the
//! block-deletion codes use [`phi`] directly for `phi(x·1)`.
//!
//! All externally visible indices (gap indices, bit positions) are 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite binary sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidSymbol(char::from(b'0' + b.min(9))));
        }
        Ok(Self(bits))
    }

    pub(crate) fn from_vec_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// The length-`n` string whose bits are the binary digits of `value`,
    /// most significant first.
    pub fn from_u64(value: u64, n: usize) -> Self {
        Self(
            (0..n)
                .map(|i| ((value >> (n - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// Every string of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = BitString> {
        assert!(n < 64, "exhaustive enumeration limited to n < 64");
        (0..1u64 << n).map(move |v| BitString::from_u64(v, n))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// Number of maximal runs of identical symbols.
    pub fn runs(&self) -> usize {
        if self.0.is_empty() {
            return 0;
        }
        1 + self.0.windows(2).filter(|w| w[0] != w[1]).count()
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1);
        self.0.push(bit);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        Self(bits)
    }

    /// Bits `start..end` (0-based, half-open).
    pub fn slice(&self, start: usize, end: usize) -> BitString {
        Self(self.0[start..end].to_vec())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbol(other)),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl TryFrom<String> for BitString {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BitString> for String {
    fn from(b: BitString) -> String {
        b.to_string()
    }
}

/// Run-gap vector: lengths of the 0-runs delimited by the 1s of a string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhiVector(Vec<usize>);

impl PhiVector {
    pub fn new(gaps: Vec<usize>) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidParameters(
                "a run-gap vector has at least one entry".into(),
            ));
        }
        Ok(Self(gaps))
    }

    pub fn gaps(&self) -> &[usize] {
        &self.0
    }

    pub fn into_gaps(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of zeros in the underlying string.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Gap `i`, 1-based.
    pub fn gap(&self, i: usize) -> usize {
        self.0[i - 1]
    }
}

impl fmt::Display for PhiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|u| u.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for PhiVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let gaps = s
            .trim()
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PhiVector::new(gaps)
    }
}

pub fn phi(x: &BitString) -> PhiVector {
    let mut gaps = Vec::with_capacity(x.weight() + 1);
    let mut run = 0;
    for &b in x.bits() {
        if b == 1 {
            gaps.push(run);
            run = 0;
        } else {
            run += 1;
        }
    }
    gaps.push(run);
    PhiVector(gaps)
}

pub fn phi_inverse(u: &PhiVector) -> BitString {
    phi_inverse_gaps(u.gaps())
}

pub(crate) fn phi_inverse_gaps(gaps: &[usize]) -> BitString {
    let len = gaps.iter().sum::<usize>() + gaps.len().saturating_sub(1);
    let mut bits = Vec::with_capacity(len);
    for (i, &g) in gaps.iter().enumerate() {
        if i > 0 {
            bits.push(1);
        }
        bits.extend(std::iter::repeat(0).take(g));
    }
    BitString(bits)
}

/// Prefix parities: entry `i` is `x_1 + ... + x_i mod 2`.
pub fn psi(x: &BitString) -> BitString {
    let mut acc = 0u8;
    BitString(
        x.bits()
            .iter()
            .map(|&b| {
                acc ^= b;
                acc
            })
            .collect(),
    )
}

pub fn psi_inverse(y: &BitString) -> BitString {
    let mut prev = 0u8;
    BitString(
        y.bits()
            .iter()
            .map(|&b| {
                let x = b ^ prev;
                prev = b;
                x
            })
            .collect(),
    )
}

/// `sum_i i * x_i` over 1-based positions.
pub fn vt_syndrome(x: &BitString) -> u64 {
    x.bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i as u64 + 1)
        .sum()
}

/// `sum_i i^m * gaps_i mod p` with 1-based gap indices.
pub fn gap_power_sum(gaps: &[usize], m: u32, p: u64) -> u64 {
    gaps.iter()
        .enumerate()
        .filter(|(_, &g)| g > 0)
        .fold(0u64, |acc, (i, &g)| {
            let term = mod_pow(i as u64 + 1, m, p) * (g as u64 % p) % p;
            (acc + term) % p
        })
}

pub(crate) fn mod_pow(base: u64, exp: u32, p: u64) -> u64 {
    let mut result = 1 % p;
    let mut b = base % p;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    result
}

/// A string over the alphabet `{0, ..., q-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QaryString {
    symbols: Vec<u32>,
    q: u32,
}

impl QaryString {
    pub fn new(symbols: Vec<u32>, q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameters(format!("alphabet size {q}")));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidParameters(format!(
                "symbol {s} outside alphabet of size {q}"
            )));
        }
        Ok(Self { symbols, q })
    }

    /// Parses one decimal digit per symbol (so `q <= 10`).
    pub fn parse_digits(s: &str, q: u32) -> Result<Self> {
        let symbols = s
            .trim()
            .chars()
            .map(|c| c.to_digit(10).ok_or(Error::InvalidSymbol(c)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, q)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

pub fn lee_weight(x: &QaryString) -> u64 {
    x.symbols
        .iter()
        .map(|&s| u64::from(s.min(x.q - s)))
        .sum()
}

pub fn lee_distance(x: &QaryString, y: &QaryString) -> Result<u64> {
    if x.q != y.q {
        return Err(Error::AlphabetMismatch(x.q, y.q));
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let q = x.q;
    Ok(x.symbols
        .iter()
        .zip(&y.symbols)
        .map(|(&a, &b)| {
            let d = (a + q - b) % q;
            u64::from(d.min(q - d))
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&bs("0111010100")).gaps(), &[1, 0, 0, 1, 1, 2]);
        assert_eq!(phi(&bs("111")).gaps(), &[0, 0, 0, 0]);
        assert_eq!(phi(&bs("0100101001")).gaps(), &[1, 2, 1, 2, 0]);
        assert_eq!(phi(&bs("")).gaps(), &[0]);
    }

    #[test]
    fn phi_inverse_examples() {
        let u: PhiVector = "1,0,0,1,1,2".parse().unwrap();
        assert_eq!(phi_inverse(&u), bs("0111010100"));
        assert_eq!(phi_inverse(&PhiVector::new(vec![0]).unwrap()), bs(""));
        assert_eq!(u.to_string(), "1,0,0,1,1,2");
    }

    #[test]
    fn appended_one_gives_same_vector() {
        // phi(x·1) with the trailing empty gap dropped equals phi(x)
        for x in BitString::all(9) {
            let mut x1 = x.clone();
            x1.push(1);
            let mut g = phi(&x1).into_gaps();
            assert_eq!(g.pop(), Some(0));
            assert_eq!(g, phi(&x).into_gaps());
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&bs("1000")), bs("1111"));
        assert_eq!(psi(&bs("0000")), bs("0000"));
        assert_eq!(psi(&bs("0111010100")), bs("0101100111"));
        assert_eq!(psi_inverse(&bs("1111")), bs("1000"));
        assert_eq!(psi_inverse(&bs("0000")), bs("0000"));
        assert_eq!(psi(&bs("")), bs(""));
    }

    #[test]
    fn psi_matches_prefix_sum_oracle() {
        for x in BitString::all(10) {
            let expected: Vec<u8> = (1..=x.len())
                .map(|i| (x.bits()[..i].iter().map(|&b| b as u32).sum::<u32>() % 2) as u8)
                .collect();
            assert_eq!(psi(&x).bits(), expected.as_slice());
        }
    }

    #[test]
    fn vt_examples() {
        assert_eq!(vt_syndrome(&bs("0000")), 0);
        assert_eq!(vt_syndrome(&bs("0111010100")), 2 + 3 + 4 + 6 + 8);
        for n in 0..20u64 {
            assert_eq!(vt_syndrome(&BitString::ones(n as usize)), n * (n + 1) / 2);
        }
    }

    #[test]
    fn lee_examples() {
        let x = QaryString::parse_digits("1405234", 6).unwrap();
        let y = QaryString::parse_digits("0305333", 6).unwrap();
        assert_eq!(lee_weight(&x), 11);
        assert_eq!(lee_distance(&x, &y).unwrap(), 4);
        assert_eq!(lee_distance(&x, &x).unwrap(), 0);
        assert_eq!(lee_weight(&QaryString::new(vec![0; 5], 7).unwrap()), 0);
        assert_eq!(lee_weight(&QaryString::new(vec![6], 7).unwrap()), 1);
    }

    #[test]
    fn lee_distance_rejects_mismatch() {
        let x = QaryString::parse_digits("123", 6).unwrap();
        let y = QaryString::parse_digits("12", 6).unwrap();
        let z = QaryString::parse_digits("123", 7).unwrap();
        assert!(matches!(lee_distance(&x, &y), Err(Error::LengthMismatch { .. })));
        assert!(matches!(lee_distance(&x, &z), Err(Error::AlphabetMismatch(6, 7))));
    }

    #[test]
    fn phi_length_and_sum_invariants() {
        for n in 0..=14 {
            for x in BitString::all(n) {
                let u = phi(&x);
                assert_eq!(u.len(), x.weight() + 1);
                assert_eq!(u.total(), n - x.weight());
            }
        }
    }

    #[test]
    fn round_trips_exhaustive() {
        for n in 0..=12 {
            for x in BitString::all(n) {
                assert_eq!(phi_inverse(&phi(&x)), x);
                assert_eq!(psi_inverse(&psi(&x)), x);
            }
        }
    }

    fn delete(x: &BitString, i: usize) -> BitString {
        let mut b = x.bits().to_vec();
        b.remove(i);
        BitString(b)
    }

    fn swap(x: &BitString, i: usize) -> BitString {
        let mut b = x.bits().to_vec();
        b.swap(i, i + 1);
        BitString(b)
    }

    #[test]
    fn zero_deletion_lowers_one_gap() {
        for n in 1..=10 {
            for x in BitString::all(n) {
                let u = phi(&x);
                for i in (0..n).filter(|&i| x.bits()[i] == 0) {
                    let v = phi(&delete(&x, i));
                    let diffs: Vec<i64> = u
                        .gaps()
                        .iter()
                        .zip(v.gaps())
                        .map(|(&a, &b)| b as i64 - a as i64)
                        .filter(|&d| d != 0)
                        .collect();
                    assert_eq!(diffs, vec![-1]);
                }
            }
        }
    }

    #[test]
    fn transposition_moves_one_unit_between_adjacent_gaps() {
        for n in 2..=10 {
            for x in BitString::all(n) {
                let u = phi(&x);
                for i in (0..n - 1).filter(|&i| x.bits()[i] != x.bits()[i + 1]) {
                    let v = phi(&swap(&x, i));
                    let d: Vec<i64> = u
                        .gaps()
                        .iter()
                        .zip(v.gaps())
                        .map(|(&a, &b)| b as i64 - a as i64)
                        .collect();
                    let nz: Vec<usize> = (0..d.len()).filter(|&k| d[k] != 0).collect();
                    assert_eq!(nz.len(), 2);
                    assert_eq!(nz[1], nz[0] + 1);
                    let pair = (d[nz[0]], d[nz[1]]);
                    // 10 -> 01 moves a 0 into the left gap, 01 -> 10 into the right one
                    if x.bits()[i] == 1 {
                        assert_eq!(pair, (1, -1));
                    } else {
                        assert_eq!(pair, (-1, 1));
                    }
                }
            }
        }
    }

    #[test]
    fn transposition_is_one_substitution_under_psi() {
        for n in 2..=10 {
            for x in BitString::all(n) {
                let p = psi(&x);
                for i in (0..n - 1).filter(|&i| x.bits()[i] != x.bits()[i + 1]) {
                    let q = psi(&swap(&x, i));
                    let diff = p.bits().iter().zip(q.bits()).filter(|(a, b)| a != b).count();
                    assert_eq!(diff, 1);
                }
            }
        }
    }

    #[test]
    fn gap_power_sum_matches_direct() {
        let x = bs("010100");
        assert_eq!(gap_power_sum(phi(&x).gaps(), 2, 29), 23);
        assert_eq!(gap_power_sum(phi(&bs("1111")).gaps(), 3, 29), 0);
    }

    #[test]
    fn bitstring_rejects_bad_symbols() {
        assert!("0120".parse::<BitString>().is_err());
        assert!(BitString::new(vec![0, 2]).is_err());
        assert_eq!(bs("0110").runs(), 3);
    }
}
