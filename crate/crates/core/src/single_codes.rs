//! Codes correcting one 0-deletion or one adjacent transposition, defined by
//! the second-moment syndrome `S(x) = sum i^2 phi(x)_i mod p` with `p > 4n`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{is_prime, smallest_prime_above};
use crate::seqcore::{gap_power_sum, phi, phi_inverse_gaps, BitString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleCodeSpec {
    pub n: usize,
    pub p: u64,
    pub a: u64,
}

impl SingleCodeSpec {
    pub fn new(n: usize, p: u64, a: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= 4 * n as u64 {
            return Err(Error::InvalidParameters(format!("need p > 4n, got p={p} n={n}")));
        }
        if a >= p {
            return Err(Error::InvalidParameters(format!("residue {a} not below {p}")));
        }
        // the two shift-type residue windows must not overlap
        debug_assert!(2 * n as u64 - 1 < p - 2 * n as u64 + 1);
        Ok(Self { n, p, a })
    }

    /// Smallest prime above `4n` with the given residue.
    pub fn with_residue(n: usize, a: u64) -> Result<Self> {
        Self::new(n, default_prime(n), a)
    }
}

pub fn default_prime(n: usize) -> u64 {
    smallest_prime_above(4 * n as u64)
}

pub fn syndrome(x: &BitString, p: u64) -> u64 {
    gap_power_sum(phi(x).gaps(), 2, p)
}

pub fn membership(x: &BitString, spec: &SingleCodeSpec) -> bool {
    x.len() == spec.n && syndrome(x, spec.p) == spec.a
}

/// Codebook sizes indexed by residue.
pub fn residue_counts(n: usize, p: u64) -> Vec<u64> {
    let mut counts = vec![0u64; p as usize];
    for x in BitString::all(n) {
        counts[syndrome(&x, p) as usize] += 1;
    }
    counts
}

pub fn codebook(spec: &SingleCodeSpec) -> Vec<BitString> {
    BitString::all(spec.n)
        .filter(|x| syndrome(x, spec.p) == spec.a)
        .collect()
}

/// The residue with the largest codebook (smallest residue on ties) and the
/// codebook size.
pub fn best_residue(n: usize) -> (SingleCodeSpec, u64) {
    let p = default_prime(n);
    let counts = residue_counts(n, p);
    let (a, &size) = counts
        .iter()
        .enumerate()
        .max_by(|(i, x), (j, y)| x.cmp(y).then(j.cmp(i)))
        .expect("p > 0");
    (
        SingleCodeSpec::new(n, p, a as u64).expect("valid by construction"),
        size,
    )
}

/// `n - log2(size)`.
pub fn redundancy(n: usize, size: u64) -> f64 {
    n as f64 - (size as f64).log2()
}

/// Recovers the codeword from at most one 0-deletion or one transposition.
pub fn decode(y: &BitString, spec: &SingleCodeSpec) -> Result<BitString> {
    let p = spec.p;
    let mut gaps = phi(y).into_gaps();
    let delta = (spec.a + p - syndrome(y, p)) % p;
    if y.len() + 1 == spec.n {
        let i = (1..=gaps.len() as u64)
            .find(|&i| i * i % p == delta)
            .ok_or_else(|| Error::NoSolution(format!("no gap with square {delta}")))?;
        gaps[i as usize - 1] += 1;
        return Ok(phi_inverse_gaps(&gaps));
    }
    if y.len() != spec.n {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            actual: y.len(),
        });
    }
    if delta == 0 {
        return Ok(y.clone());
    }
    let w = gaps.len() - 1;
    let n2 = 2 * spec.n as u64;
    // a left shift at gap i adds 2i+1, a right shift subtracts it
    let (i, left) = if delta < n2 {
        (delta, true)
    } else if delta > p - n2 {
        (p - delta, false)
    } else {
        return Err(Error::NoSolution(format!("residue gap {delta} out of range")));
    };
    if i % 2 == 0 || i < 3 {
        return Err(Error::NoSolution(format!("residue gap {delta} is not 2i+1")));
    }
    let i = ((i - 1) / 2) as usize;
    if i > w {
        return Err(Error::NoSolution(format!("gap index {i} exceeds {w}")));
    }
    let (from, to) = if left { (i - 1, i) } else { (i, i - 1) };
    if gaps[from] == 0 {
        return Err(Error::NoSolution("undo would empty a gap".into()));
    }
    gaps[from] -= 1;
    gaps[to] += 1;
    Ok(phi_inverse_gaps(&gaps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::error_ball;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn syndrome_examples() {
        assert_eq!(syndrome(&BitString::ones(7), 29), 0);
        assert_eq!(syndrome(&bs("010100"), 29), 23);
    }

    #[test]
    fn worked_decodes() {
        let spec = SingleCodeSpec::new(6, 29, 23).unwrap();
        let x = bs("010100");
        assert!(membership(&x, &spec));
        assert!(!membership(&x, &SingleCodeSpec { a: 24, ..spec }));
        assert_eq!(decode(&x, &spec).unwrap(), x);
        // one 0 removed from gap 3, a - a' = 9 = 3^2
        assert_eq!(syndrome(&bs("01010"), 29), 14);
        assert_eq!(decode(&bs("01010"), &spec).unwrap(), x);
        // 10 -> 01 at positions 2-3, a - a' = 3 = 2*1 + 1
        assert_eq!((23 + 29 - syndrome(&bs("001100"), 29)) % 29, 3);
        assert_eq!(decode(&bs("001100"), &spec).unwrap(), x);
    }

    #[test]
    fn spec_validation() {
        assert!(SingleCodeSpec::new(6, 23, 0).is_err());
        assert!(SingleCodeSpec::new(6, 33, 0).is_err());
        assert!(SingleCodeSpec::new(6, 29, 29).is_err());
    }

    #[test]
    fn residues_partition_the_space() {
        for n in 1..=12 {
            let counts = residue_counts(n, default_prime(n));
            assert_eq!(counts.iter().sum::<u64>(), 1 << n);
        }
    }

    #[test]
    fn best_residue_pigeonhole_and_determinism() {
        let (spec, size) = best_residue(8);
        assert!(size as f64 >= 256.0 / spec.p as f64);
        assert_eq!(best_residue(8), (spec, size));
        assert_eq!(codebook(&spec).len() as u64, size);
    }

    #[test]
    fn exhaustive_unique_decoding() {
        for n in 6..=10 {
            let p = default_prime(n);
            for x in BitString::all(n) {
                let spec = SingleCodeSpec::new(n, p, syndrome(&x, p)).unwrap();
                let mut ball = error_ball(&x, 1, 0);
                ball.extend(error_ball(&x, 0, 1));
                for y in ball {
                    assert_eq!(decode(&y, &spec).unwrap(), x, "n={n} y={y}");
                }
            }
        }
    }

    #[test]
    fn out_of_model_is_typed() {
        let spec = SingleCodeSpec::new(6, 29, 23).unwrap();
        assert!(decode(&bs("0101"), &spec).is_err());
        for y in BitString::all(6).chain(BitString::all(5)) {
            if let Ok(x) = decode(&y, &spec) {
                assert!(membership(&x, &spec));
            }
        }
    }
}
