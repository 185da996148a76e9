//! Power-sum syndrome codes `sum i^m phi(x)_i = a_m (mod p)`, `m = 1..r`,
//! for `t` 0-deletions plus `s` transpositions with `r = t + 2s`.
//!
//! A 0-deletion moves `phi` by Lee distance 1 and a transposition by 2, so a
//! code whose run-gap vectors are `2(r+1)` apart is uniquely decodable. The
//! distance is measured here, not assumed, and the decoder is a bounded
//! search over integer correction vectors.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{is_prime, smallest_prime_above};
use crate::seqcore::{gap_power_sum, mod_pow, phi, phi_inverse_gaps, BitString};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeeCodeSpec {
    pub n: usize,
    pub r: usize,
    pub p: u64,
    pub a: Vec<u64>,
}

impl LeeCodeSpec {
    pub fn new(n: usize, r: usize, p: u64, a: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= (n as u64).max(2 * (r as u64 + 1)) {
            return Err(Error::InvalidParameters(format!(
                "need p > max(n, 2(r+1)), got {p}"
            )));
        }
        if a.len() != r || a.iter().any(|&v| v >= p) {
            return Err(Error::InvalidParameters("residue vector".into()));
        }
        Ok(Self { n, r, p, a })
    }

    /// The code containing `x`, on the default prime.
    pub fn containing(x: &BitString, r: usize) -> Self {
        let p = default_prime(x.len(), r);
        Self {
            n: x.len(),
            r,
            p,
            a: syndromes(x, r, p),
        }
    }
}

pub fn default_prime(n: usize, r: usize) -> u64 {
    smallest_prime_above((n as u64).max(2 * (r as u64 + 1)))
}

pub fn syndromes(x: &BitString, r: usize, p: u64) -> Vec<u64> {
    let gaps = phi(x);
    (1..=r as u32).map(|m| gap_power_sum(gaps.gaps(), m, p)).collect()
}

pub fn membership(x: &BitString, spec: &LeeCodeSpec) -> bool {
    x.len() == spec.n && syndromes(x, spec.r, spec.p) == spec.a
}

/// Pairwise distances between run-gap vectors of same-weight codewords.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DistanceSurvey {
    pub n: usize,
    pub r: usize,
    pub p: u64,
    pub pairs: u64,
    /// Smallest Lee distance over `Z_p`.
    pub min_lee: Option<u64>,
    /// Smallest integer `L1` distance.
    pub min_l1: Option<u64>,
    /// Pairs whose `Z_p` Lee distance falls below `2(r+1)`.
    pub lee_violations: u64,
    pub l1_violations: u64,
    /// A few violating pairs as witnesses.
    pub witnesses: Vec<(BitString, BitString, u64)>,
}

impl DistanceSurvey {
    pub fn required(&self) -> u64 {
        2 * (self.r as u64 + 1)
    }
}

/// Surveys every code `C(n, r, p)` at once: all strings are grouped by
/// residue vector and weight, and every same-group pair is measured.
pub fn distance_survey(n: usize, r: usize) -> DistanceSurvey {
    let p = default_prime(n, r);
    let mut groups: HashMap<(Vec<u64>, usize), Vec<Vec<usize>>> = HashMap::new();
    for x in BitString::all(n) {
        groups
            .entry((syndromes(&x, r, p), x.weight()))
            .or_default()
            .push(phi(&x).into_gaps());
    }
    let need = 2 * (r as u64 + 1);
    let mut groups: Vec<_> = groups.into_iter().collect();
    groups.sort();
    let partial: Vec<DistanceSurvey> = groups
        .par_iter()
        .map(|(_, members)| {
            let mut s = DistanceSurvey::default();
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    let (u, v) = (&members[i], &members[j]);
                    let mut lee = 0u64;
                    let mut l1 = 0u64;
                    for (&a, &b) in u.iter().zip(v) {
                        let d = (a as i64 - b as i64).unsigned_abs();
                        l1 += d;
                        let dm = d % p;
                        lee += dm.min(p - dm);
                    }
                    s.pairs += 1;
                    s.min_lee = Some(s.min_lee.map_or(lee, |m| m.min(lee)));
                    s.min_l1 = Some(s.min_l1.map_or(l1, |m| m.min(l1)));
                    if lee < need {
                        s.lee_violations += 1;
                        if s.witnesses.len() < 4 {
                            s.witnesses
                                .push((phi_inverse_gaps(u), phi_inverse_gaps(v), lee));
                        }
                    }
                    if l1 < need {
                        s.l1_violations += 1;
                    }
                }
            }
            s
        })
        .collect();
    let mut out = DistanceSurvey {
        n,
        r,
        p,
        ..Default::default()
    };
    for s in partial {
        out.pairs += s.pairs;
        out.lee_violations += s.lee_violations;
        out.l1_violations += s.l1_violations;
        out.min_lee = match (out.min_lee, s.min_lee) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        out.min_l1 = match (out.min_l1, s.min_l1) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for w in s.witnesses {
            if out.witnesses.len() < 4 {
                out.witnesses.push(w);
            }
        }
    }
    out
}

/// Residue vector with the largest codebook and that size.
pub fn best_residue(n: usize, r: usize) -> (LeeCodeSpec, u64) {
    let p = default_prime(n, r);
    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    for x in BitString::all(n) {
        *counts.entry(syndromes(&x, r, p)).or_default() += 1;
    }
    let (a, size) = counts
        .into_iter()
        .max_by(|(a1, c1), (a2, c2)| c1.cmp(c2).then(a2.cmp(a1)))
        .expect("nonempty");
    (LeeCodeSpec { n, r, p, a }, size)
}

/// Bounded-distance decoding for at most `t` 0-deletions and `s`
/// transpositions, `t + 2s <= r`.
pub fn decode(y: &BitString, spec: &LeeCodeSpec, t: usize, s: usize) -> Result<BitString> {
    let radius = t + 2 * s;
    if radius > spec.r {
        return Err(Error::InvalidParameters(format!(
            "t+2s = {radius} exceeds r = {}",
            spec.r
        )));
    }
    if y.len() > spec.n || spec.n - y.len() > t {
        return Err(Error::LengthMismatch {
            expected: spec.n,
            actual: y.len(),
        });
    }
    let deficit = (spec.n - y.len()) as i64;
    let gaps = phi(y).into_gaps();
    let p = spec.p;
    let have = syndromes(y, spec.r, p);
    let target: Vec<u64> = spec
        .a
        .iter()
        .zip(&have)
        .map(|(&a, &h)| (a + p - h) % p)
        .collect();
    // powers[i][m-1] = (i+1)^m mod p
    let powers: Vec<Vec<u64>> = (0..gaps.len())
        .map(|i| (1..=spec.r as u32).map(|m| mod_pow(i as u64 + 1, m, p)).collect())
        .collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut acc = vec![0u64; spec.r];
    let mut e: Vec<(usize, i64)> = Vec::new();
    let mut ctx = Search {
        gaps: &gaps,
        powers: &powers,
        target: &target,
        p,
        deficit,
        found: &mut found,
    };
    ctx.search(0, radius as i64, 0, &mut acc, &mut e);
    match found.len() {
        0 => Err(Error::NoSolution("no codeword within radius".into())),
        1 => Ok(phi_inverse_gaps(&found[0])),
        k => Err(Error::Ambiguous(k)),
    }
}

struct Search<'a> {
    gaps: &'a [usize],
    powers: &'a [Vec<u64>],
    target: &'a [u64],
    p: u64,
    deficit: i64,
    found: &'a mut Vec<Vec<usize>>,
}

impl Search<'_> {
    fn search(
        &mut self,
        start: usize,
        budget: i64,
        sum: i64,
        acc: &mut Vec<u64>,
        e: &mut Vec<(usize, i64)>,
    ) {
        if sum == self.deficit && acc.as_slice() == self.target {
            let mut g = self.gaps.to_vec();
            for &(i, v) in e.iter() {
                g[i] = (g[i] as i64 + v) as usize;
            }
            self.found.push(g);
        }
        // the remaining budget must still be able to close the sum gap
        if budget == 0 {
            return;
        }
        for i in start..self.gaps.len() {
            for mag in 1..=budget {
                for v in [mag, -mag] {
                    if (self.gaps[i] as i64) + v < 0 {
                        continue;
                    }
                    let new_sum = sum + v;
                    if (self.deficit - new_sum).abs() > budget - mag {
                        continue;
                    }
                    let vm = v.rem_euclid(self.p as i64) as u64;
                    let saved = acc.clone();
                    for (m, a) in acc.iter_mut().enumerate() {
                        *a = (*a + vm * self.powers[i][m]) % self.p;
                    }
                    e.push((i, v));
                    self.search(i + 1, budget - mag, new_sum, acc, e);
                    e.pop();
                    *acc = saved;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::error_ball;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn membership_basics() {
        let x = bs("0110100100");
        let spec = LeeCodeSpec::containing(&x, 3);
        assert!(membership(&x, &spec));
        let mut g = phi(&x).into_gaps();
        g[0] += 1;
        g[3] -= 1;
        assert!(!membership(&phi_inverse_gaps(&g), &spec));
        assert_eq!(syndromes(&BitString::ones(6), 3, 17), vec![0, 0, 0]);
    }

    #[test]
    fn syndromes_match_big_integer_sums() {
        use num_bigint::BigUint;
        let x = bs("0010001011000010");
        let p = 19u64;
        let g = phi(&x).into_gaps();
        for m in 1..=4u32 {
            let exact: BigUint = g
                .iter()
                .enumerate()
                .map(|(i, &u)| BigUint::from(i + 1).pow(m) * BigUint::from(u))
                .sum();
            let want = (exact % BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0);
            assert_eq!(syndromes(&x, 4, p)[m as usize - 1], want);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(LeeCodeSpec::new(10, 3, 7, vec![0; 3]).is_err());
        assert!(LeeCodeSpec::new(10, 3, 11, vec![0; 2]).is_err());
        assert!(LeeCodeSpec::new(10, 3, 11, vec![0; 3]).is_ok());
        assert_eq!(default_prime(12, 3), 13);
    }

    #[test]
    fn integer_distance_holds_small() {
        for (n, r) in [(8, 1), (9, 2), (10, 3)] {
            let s = distance_survey(n, r);
            assert_eq!(s.l1_violations, 0, "n={n} r={r}");
            assert!(s.min_l1.unwrap() >= s.required());
        }
    }

    #[test]
    fn exhaustive_decode_n9() {
        for (t, s) in [(1, 1), (2, 0), (0, 1)] {
            let r = t + 2 * s;
            for x in BitString::all(9) {
                let spec = LeeCodeSpec::containing(&x, r);
                for y in error_ball(&x, t, s) {
                    assert_eq!(decode(&y, &spec, t, s).unwrap(), x, "t={t} s={s} y={y}");
                }
            }
        }
    }

    #[test]
    fn out_of_model_rejected() {
        let x = bs("0100100010");
        let spec = LeeCodeSpec::containing(&x, 3);
        assert!(matches!(
            decode(&bs("01001000"), &spec, 1, 1),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(decode(&x, &spec, 2, 1).is_err());
    }

    #[test]
    fn best_residue_redundancy() {
        for (n, r) in [(10, 1), (10, 2), (11, 3)] {
            let (spec, size) = best_residue(n, r);
            let red = n as f64 - (size as f64).log2();
            assert!(red <= r as f64 * (spec.p as f64).log2() + 1e-9);
        }
    }
}
