//! List-decodable codes for `t` 0-deletions, `s+` right-shifts and `s-`
//! left-shifts of 0, built on the power-sum syndromes
//! `a_m = sum i^m phi(x)_i mod p` for `m = 1..kappa`, `kappa = max(t, s+1)`.
//!
//! For `y` received from `x`, the syndrome gap `a''_m = S_m(x) - S_m(y)`
//! splits as `D_m + e_m`: `D_m` is the m-th power sum of the deleted gap
//! indices and `e_m = sum_{i<m} C(m,i) P_i`, where `P_i` is the power sum of
//! left-shift boundaries minus that of right-shift boundaries. A left shift
//! (`10 -> 01`) at boundary `k` moves a 0 from gap `k+1` to gap `k`; a right
//! shift (`01 -> 10`) at `j` moves one from gap `j` to gap `j+1`. The
//! positive locator set is therefore the left shifts.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::directed_ball;
use crate::error::{Error, Result};
use crate::galois::{
    find_roots_with_multiplicity, is_prime, pade_split, Polynomial, PrimeField,
};
use crate::seqcore::{gap_power_sum, mod_pow, phi, phi_inverse_gaps, BitString};

/// Largest enumeration `p^{min(t, s+1)}` accepted at construction.
pub const MAX_GUESSES: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListCodeSpec {
    pub n: usize,
    pub t: usize,
    pub s_plus: usize,
    pub s_minus: usize,
    pub p: u64,
    pub a: Vec<u64>,
}

impl ListCodeSpec {
    pub fn new(n: usize, t: usize, s_plus: usize, s_minus: usize, p: u64, a: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p <= n as u64 {
            return Err(Error::InvalidParameters(format!("need p > n, got p={p} n={n}")));
        }
        let s = s_plus + s_minus;
        let kappa = t.max(s + 1);
        if (kappa as u64) >= p {
            return Err(Error::InvalidParameters("kappa must be below p".into()));
        }
        let guesses = (p as u128).pow(t.min(s + 1) as u32);
        if guesses > MAX_GUESSES {
            return Err(Error::InvalidParameters(format!(
                "{guesses} guesses exceed the limit {MAX_GUESSES}"
            )));
        }
        if a.len() != kappa || a.iter().any(|&v| v >= p) {
            return Err(Error::InvalidParameters(format!(
                "residue vector must have {kappa} entries below {p}"
            )));
        }
        Ok(Self {
            n,
            t,
            s_plus,
            s_minus,
            p,
            a,
        })
    }

    /// The code containing `x`.
    pub fn containing(x: &BitString, t: usize, s_plus: usize, s_minus: usize, p: u64) -> Result<Self> {
        let kappa = t.max(s_plus + s_minus + 1);
        Self::new(x.len(), t, s_plus, s_minus, p, power_syndromes(x, kappa, p))
    }

    pub fn s(&self) -> usize {
        self.s_plus + self.s_minus
    }

    pub fn kappa(&self) -> usize {
        self.t.max(self.s() + 1)
    }
}

/// Deleted gaps and shift boundaries of one solution (all 1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SolvedPositions {
    pub deletions: Vec<u64>,
    pub right_shifts: Vec<u64>,
    pub left_shifts: Vec<u64>,
}

pub fn power_syndromes(x: &BitString, kappa: usize, p: u64) -> Vec<u64> {
    let g = phi(x);
    (1..=kappa as u32).map(|m| gap_power_sum(g.gaps(), m, p)).collect()
}

pub fn syndromes(x: &BitString, spec: &ListCodeSpec) -> Vec<u64> {
    power_syndromes(x, spec.kappa(), spec.p)
}

pub fn membership(x: &BitString, spec: &ListCodeSpec) -> bool {
    x.len() == spec.n && syndromes(x, spec) == spec.a
}

fn power_sum(set: &[u64], m: u32, p: u64) -> u64 {
    set.iter().fold(0, |acc, &v| (acc + mod_pow(v, m, p)) % p)
}

/// The multiset of `t_actual` indices in `[1, max_pos]` whose power sums
/// match `a_star` (every given component is checked).
pub fn solve_deletion_power_sums(
    a_star: &[u64],
    t_actual: usize,
    p: u64,
    max_pos: u64,
) -> Result<Vec<u64>> {
    let f = PrimeField::new(p)?;
    if a_star.len() < t_actual {
        return Err(Error::InvalidParameters(format!(
            "{} power sums for {t_actual} unknowns",
            a_star.len()
        )));
    }
    if t_actual as u64 >= p {
        return Err(Error::InvalidParameters("t must be below p".into()));
    }
    // k e_k = sum_{i=1}^{k} (-1)^{i-1} e_{k-i} D_i
    let mut e = vec![1u64];
    for k in 1..=t_actual {
        let mut acc = 0u64;
        for i in 1..=k {
            let term = f.mul(e[k - i], a_star[i - 1] % p);
            acc = if i % 2 == 1 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        e.push(f.div(acc, k as u64)?);
    }
    // prod (x - d) = sum_k (-1)^k e_k x^{t-k}
    let coeffs: Vec<u64> = (0..=t_actual)
        .map(|deg| {
            let k = t_actual - deg;
            if k % 2 == 0 { e[k] } else { f.neg(e[k]) }
        })
        .collect();
    let poly = Polynomial::new(coeffs, f);
    let domain: Vec<u64> = (1..=max_pos.min(p - 1)).collect();
    let roots = find_roots_with_multiplicity(&poly, &domain);
    if roots.len() != t_actual {
        return Err(Error::NoSolution(format!(
            "{} roots in range for {t_actual} deletions",
            roots.len()
        )));
    }
    for (m, &want) in a_star.iter().enumerate() {
        if power_sum(&roots, m as u32 + 1, p) != want % p {
            return Err(Error::NoSolution("power sums do not verify".into()));
        }
    }
    Ok(roots)
}

/// Disjoint multisets `(plus, minus)` of sizes `k_plus`, `k_minus` in
/// `[1, max_pos]` with `sum plus^m - sum minus^m = b_m` for `m = 1..len(b)`.
pub fn solve_mixed_power_sums(
    b: &[u64],
    k_plus: usize,
    k_minus: usize,
    p: u64,
    max_pos: u64,
) -> Result<(Vec<u64>, Vec<u64>)> {
    let f = PrimeField::new(p)?;
    let s = b.len();
    if k_plus + k_minus > s {
        return Err(Error::InvalidParameters(format!(
            "{k_plus}+{k_minus} unknowns exceed {s} equations"
        )));
    }
    if s as u64 >= p {
        return Err(Error::InvalidParameters("too many equations for p".into()));
    }
    if k_plus + k_minus == 0 {
        return if b.iter().all(|&v| v % p == 0) {
            Ok((vec![], vec![]))
        } else {
            Err(Error::NoSolution("nonzero sums with no positions".into()))
        };
    }
    // u sigma_u = -sum_{m=0}^{u-1} sigma_m S_{u-m}
    let mut sigma = vec![1u64];
    for u in 1..=s {
        let mut acc = 0u64;
        for m in 0..u {
            acc = f.add(acc, f.mul(sigma[m], b[u - m - 1] % p));
        }
        sigma.push(f.div(f.neg(acc), u as u64)?);
    }
    let series = Polynomial::new(sigma, f);
    let (num, den) = pade_split(&series, s, k_plus, k_minus)?;
    if num.degree().unwrap_or(0) != k_plus || den.degree().unwrap_or(0) != k_minus {
        return Err(Error::NoSolution("locator degrees do not match the split".into()));
    }
    let domain: Vec<u64> = (1..=max_pos.min(p - 1)).collect();
    let plus = find_roots_with_multiplicity(&num.reversed(k_plus), &domain);
    let minus = find_roots_with_multiplicity(&den.reversed(k_minus), &domain);
    if plus.len() != k_plus || minus.len() != k_minus {
        return Err(Error::NoSolution("locators do not split over the range".into()));
    }
    if plus.iter().any(|v| minus.contains(v)) {
        return Err(Error::NoSolution("a boundary appears with both signs".into()));
    }
    for (m, &want) in b.iter().enumerate() {
        let got = f.sub(power_sum(&plus, m as u32 + 1, p), power_sum(&minus, m as u32 + 1, p));
        if got != want % p {
            return Err(Error::NoSolution("power sums do not verify".into()));
        }
    }
    Ok((plus, minus))
}

fn binomial_mod(m: u64, i: u64, f: PrimeField) -> u64 {
    let mut c = 1u64;
    for k in 0..i {
        c = f.mul(c, m - k);
        c = f.div(c, k + 1).expect("k+1 < p");
    }
    c
}

/// `e'_1 = e_1`, `m e'_m = e_m - sum_{i=1}^{m-1} C(m, i-1) e'_i`: recovers the
/// mixed power sums `P_0, ..., P_s` from `e_1, ..., e_{s+1}`.
pub fn transform_e(e: &[u64], p: u64) -> Result<Vec<u64>> {
    let f = PrimeField::new(p)?;
    let mut out: Vec<u64> = Vec::with_capacity(e.len());
    for m in 1..=e.len() as u64 {
        let mut acc = e[m as usize - 1] % p;
        for i in 1..m {
            acc = f.sub(acc, f.mul(binomial_mod(m, i - 1, f), out[i as usize - 1]));
        }
        out.push(f.div(acc, m)?);
    }
    Ok(out)
}

/// `e_m` for `m = 1..kappa` from explicit shift boundaries.
fn shift_contribution(plus: &[u64], minus: &[u64], kappa: usize, p: u64) -> Vec<u64> {
    let f = PrimeField::new(p).expect("prime");
    (1..=kappa as u32)
        .map(|m| {
            let up = plus.iter().fold(0, |acc, &k| {
                f.add(acc, f.sub(mod_pow(k + 1, m, p), mod_pow(k, m, p)))
            });
            let down = minus.iter().fold(0, |acc, &j| {
                f.add(acc, f.sub(mod_pow(j + 1, m, p), mod_pow(j, m, p)))
            });
            f.sub(up, down)
        })
        .collect()
}

struct Context<'a> {
    spec: &'a ListCodeSpec,
    y: &'a BitString,
    gaps: Vec<usize>,
    w: u64,
    t_act: usize,
    a2: Vec<u64>,
}

impl<'a> Context<'a> {
    fn new(y: &'a BitString, spec: &'a ListCodeSpec) -> Option<Self> {
        if y.len() > spec.n || spec.n - y.len() > spec.t {
            return None;
        }
        let p = spec.p;
        let a2 = spec
            .a
            .iter()
            .zip(syndromes(y, spec))
            .map(|(&a, h)| (a + p - h) % p)
            .collect();
        Some(Self {
            spec,
            y,
            gaps: phi(y).into_gaps(),
            w: y.weight() as u64,
            t_act: spec.n - y.len(),
            a2,
        })
    }

    /// Shift solutions whose first `s+1` contributions equal `e`.
    fn shifts_from_e(&self, e: &[u64]) -> Vec<(Vec<u64>, Vec<u64>)> {
        let p = self.spec.p;
        let Ok(pw) = transform_e(e, p) else {
            return vec![];
        };
        let s = self.spec.s();
        let mut out = Vec::new();
        for left in 0..=self.spec.s_minus {
            for right in 0..=self.spec.s_plus {
                if left + right > s || (left as u64 + p - right as u64 % p) % p != pw[0] {
                    continue;
                }
                if let Ok(sol) = solve_mixed_power_sums(&pw[1..], left, right, p, self.w) {
                    out.push(sol);
                }
            }
        }
        out
    }

    /// Applies the inverse corrections and runs the validation filter.
    fn candidate(&self, dels: &[u64], plus: &[u64], minus: &[u64]) -> Option<BitString> {
        let mut g: Vec<i64> = self.gaps.iter().map(|&v| v as i64).collect();
        for &d in dels {
            g[d as usize - 1] += 1;
        }
        for &k in plus {
            g[k as usize - 1] -= 1;
            g[k as usize] += 1;
        }
        for &j in minus {
            g[j as usize - 1] += 1;
            g[j as usize] -= 1;
        }
        if g.iter().any(|&v| v < 0) {
            return None;
        }
        let gaps: Vec<usize> = g.into_iter().map(|v| v as usize).collect();
        let x = phi_inverse_gaps(&gaps);
        let spec = self.spec;
        (membership(&x, spec)
            && directed_ball(&x, spec.t, spec.s_plus, spec.s_minus).contains(self.y))
        .then_some(x)
    }

    /// Deletion multisets given fixed shift boundaries.
    fn with_shifts(&self, plus: &[u64], minus: &[u64]) -> Option<BitString> {
        let p = self.spec.p;
        let e = shift_contribution(plus, minus, self.spec.kappa(), p);
        let a_star: Vec<u64> = self.a2.iter().zip(&e).map(|(&a, &b)| (a + p - b) % p).collect();
        let dels = if self.t_act == 0 {
            a_star.iter().all(|&v| v == 0).then(Vec::new)?
        } else {
            solve_deletion_power_sums(&a_star, self.t_act, p, self.w + 1).ok()?
        };
        self.candidate(&dels, plus, minus)
    }

    /// Shift systems given a fixed deletion multiset.
    fn with_deletions(&self, dels: &[u64]) -> Vec<BitString> {
        let p = self.spec.p;
        let e: Vec<u64> = (1..=self.spec.s() as u32 + 1)
            .map(|m| (self.a2[m as usize - 1] + p - power_sum(dels, m, p)) % p)
            .collect();
        self.shifts_from_e(&e)
            .into_iter()
            .filter_map(|(plus, minus)| self.candidate(dels, &plus, &minus))
            .collect()
    }
}

/// Multisets of size `k` drawn from `1..=max`, nondecreasing.
fn multisets(k: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(k: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(k, v, max, cur, out);
            cur.pop();
        }
    }
    rec(k, 1, max, &mut cur, &mut out);
    out
}

fn finish(found: impl IntoIterator<Item = BitString>) -> Vec<BitString> {
    found.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Candidate codewords for `y`, sorted and deduplicated. Empty only when
/// `y` lies outside every ball of the code.
pub fn decode_list(y: &BitString, spec: &ListCodeSpec) -> Vec<BitString> {
    let Some(ctx) = Context::new(y, spec) else {
        return vec![];
    };
    let s = spec.s();
    let p = spec.p;
    if ctx.t_act == 0 {
        let e = ctx.a2[..s + 1].to_vec();
        return finish(
            ctx.shifts_from_e(&e)
                .into_iter()
                .filter_map(|(plus, minus)| ctx.with_shifts(&plus, &minus)),
        );
    }
    if spec.t >= s + 1 {
        // guess e in Z_p^{s+1}
        let total = p.pow(s as u32 + 1);
        let found: Vec<BitString> = (0..total)
            .into_par_iter()
            .flat_map_iter(|idx| {
                let mut v = idx;
                let e: Vec<u64> = (0..=s)
                    .map(|_| {
                        let d = v % p;
                        v /= p;
                        d
                    })
                    .collect();
                ctx.shifts_from_e(&e)
                    .into_iter()
                    .filter_map(|(plus, minus)| ctx.with_shifts(&plus, &minus))
                    .collect::<Vec<_>>()
            })
            .collect();
        finish(found)
    } else {
        // guess the deletion multiset instead
        let found: Vec<BitString> = multisets(ctx.t_act, ctx.w + 1)
            .par_iter()
            .flat_map_iter(|dels| ctx.with_deletions(dels))
            .collect();
        finish(found)
    }
}

/// Single-deletion fast path: the deleted gap lies in
/// `[a''_1 - s-, a''_1 + s+]`, since `a''_1 = d + (#left - #right)`.
pub fn decode_list_t1(y: &BitString, spec: &ListCodeSpec) -> Result<Vec<BitString>> {
    if spec.t != 1 {
        return Err(Error::InvalidParameters("fast path needs t = 1".into()));
    }
    let Some(ctx) = Context::new(y, spec) else {
        return Ok(vec![]);
    };
    let p = spec.p as i64;
    if ctx.t_act == 0 {
        return Ok(decode_list(y, spec));
    }
    let a1 = ctx.a2[0] as i64;
    let mut found = Vec::new();
    for off in -(spec.s_minus as i64)..=spec.s_plus as i64 {
        let d = (a1 + off).rem_euclid(p) as u64;
        if d == 0 || d > ctx.w + 1 {
            continue;
        }
        found.extend(ctx.with_deletions(&[d]));
    }
    Ok(finish(found))
}

/// Best residue vector and its codebook size by exhaustive count.
pub fn best_residue(n: usize, t: usize, s_plus: usize, s_minus: usize, p: u64) -> Result<(ListCodeSpec, u64)> {
    let kappa = t.max(s_plus + s_minus + 1);
    let mut counts = std::collections::HashMap::<Vec<u64>, u64>::new();
    for x in BitString::all(n) {
        *counts.entry(power_syndromes(&x, kappa, p)).or_default() += 1;
    }
    let (a, size) = counts
        .into_iter()
        .max_by(|(a1, c1), (a2, c2)| c1.cmp(c2).then(a2.cmp(a1)))
        .expect("nonempty");
    Ok((ListCodeSpec::new(n, t, s_plus, s_minus, p, a)?, size))
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn deletion_round_trip(mut d in proptest::collection::vec(1u64..31, 1..5)) {
            d.sort();
            let a: Vec<u64> = (1..=d.len() as u32).map(|m| power_sum(&d, m, 31)).collect();
            prop_assert_eq!(solve_deletion_power_sums(&a, d.len(), 31, 30).unwrap(), d);
        }

        #[test]
        fn mixed_round_trip(
            mut plus in proptest::collection::vec(1u64..50, 0..3),
            mut minus in proptest::collection::vec(1u64..50, 0..3),
        ) {
            prop_assume!(plus.iter().all(|v| !minus.contains(v)));
            plus.sort();
            minus.sort();
            let s = plus.len() + minus.len();
            let b: Vec<u64> = (1..=s as u32)
                .map(|m| (power_sum(&plus, m, 101) + 101 - power_sum(&minus, m, 101)) % 101)
                .collect();
            let got = solve_mixed_power_sums(&b, plus.len(), minus.len(), 101, 100).unwrap();
            prop_assert_eq!(got, (plus, minus));
        }
    }
}
