//! Error processes: 0-deletions, adjacent transpositions, and blocks of
//! 0-deletions with limited magnitude.
//!
//! Ball enumeration explores every interleaving of the allowed events, so a
//! ball is the set of strings reachable by any ordering within the budgets.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqcore::{phi, BitString};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftKind {
    /// `01 -> 10`
    #[serde(rename = "right_shift_of_0")]
    RightShiftOf0,
    /// `10 -> 01`
    #[serde(rename = "left_shift_of_0")]
    LeftShiftOf0,
}

impl ShiftKind {
    /// Kind of the transposition acting on the pair `(a, b)`.
    pub fn of_pair(a: u8, b: u8) -> Option<Self> {
        match (a, b) {
            (0, 1) => Some(Self::RightShiftOf0),
            (1, 0) => Some(Self::LeftShiftOf0),
            _ => None,
        }
    }
}

/// A transposition of the bits at `pos` and `pos + 1` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftEvent {
    pub kind: ShiftKind,
    pub pos: usize,
}

/// Shifts are applied first, in order, against the current string; the
/// 0-deletions then remove one 0 from each listed gap (1-based, repeats
/// allowed). Gap indices are stable under 0-deletions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorPattern {
    #[serde(default)]
    pub deletions: Vec<usize>,
    #[serde(default)]
    pub shifts: Vec<ShiftEvent>,
}

impl ErrorPattern {
    pub fn is_empty(&self) -> bool {
        self.deletions.is_empty() && self.shifts.is_empty()
    }
}

pub fn apply_pattern(x: &BitString, e: &ErrorPattern) -> Result<BitString> {
    let mut bits = x.bits().to_vec();
    for ev in &e.shifts {
        if ev.pos == 0 || ev.pos >= bits.len() {
            return Err(Error::InapplicablePattern(format!(
                "shift position {} out of range",
                ev.pos
            )));
        }
        let i = ev.pos - 1;
        match ShiftKind::of_pair(bits[i], bits[i + 1]) {
            Some(k) if k == ev.kind => bits.swap(i, i + 1),
            Some(_) => {
                return Err(Error::InapplicablePattern(format!(
                    "shift kind does not match the pair at {}",
                    ev.pos
                )))
            }
            None => {
                return Err(Error::InapplicablePattern(format!(
                    "equal bits at position {}",
                    ev.pos
                )))
            }
        }
    }
    let mut gaps = phi(&BitString::from_vec_unchecked(bits)).into_gaps();
    for &g in &e.deletions {
        if g == 0 || g > gaps.len() {
            return Err(Error::InapplicablePattern(format!("gap {g} out of range")));
        }
        if gaps[g - 1] == 0 {
            return Err(Error::InapplicablePattern(format!("gap {g} exhausted")));
        }
        gaps[g - 1] -= 1;
    }
    Ok(crate::seqcore::phi_inverse_gaps(&gaps))
}

/// How many and which deletions a ball allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeletionBudget {
    /// Up to `t` deletions of single 0s.
    Zeros(usize),
    /// Up to `t` deletions of either bit.
    AnyBit(usize),
    /// Up to `t_b` blocks, each removing `1..=ell` consecutive 0s.
    Blocks { t_b: usize, ell: usize },
}

/// How many adjacent transpositions a ball allows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftBudget {
    Any(usize),
    Directed { right: usize, left: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BallSpec {
    pub deletions: DeletionBudget,
    pub shifts: ShiftBudget,
}

impl BallSpec {
    pub fn new(deletions: DeletionBudget, shifts: ShiftBudget) -> Self {
        Self { deletions, shifts }
    }
}

/// Remaining budget in one search state.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Remaining {
    dels: usize,
    a: usize,
    b: usize,
}

/// Every string reachable from `x` within `spec`.
pub fn ball(x: &BitString, spec: BallSpec) -> BTreeSet<BitString> {
    let dels = match spec.deletions {
        DeletionBudget::Zeros(t) | DeletionBudget::AnyBit(t) => t,
        DeletionBudget::Blocks { t_b, .. } => t_b,
    };
    let (a, b) = match spec.shifts {
        ShiftBudget::Any(s) => (s, 0),
        ShiftBudget::Directed { right, left } => (right, left),
    };
    let mut seen: HashSet<(Vec<u8>, Remaining)> = HashSet::new();
    let mut stack = vec![(x.bits().to_vec(), Remaining { dels, a, b })];
    let mut out = BTreeSet::new();
    while let Some((bits, rem)) = stack.pop() {
        if !seen.insert((bits.clone(), rem)) {
            continue;
        }
        out.insert(BitString::from_vec_unchecked(bits.clone()));
        if rem.dels > 0 {
            expand_deletions(&bits, spec.deletions, rem, &mut stack);
        }
        for i in 0..bits.len().saturating_sub(1) {
            let Some(kind) = ShiftKind::of_pair(bits[i], bits[i + 1]) else {
                continue;
            };
            let next = match spec.shifts {
                ShiftBudget::Any(_) if rem.a > 0 => Remaining { a: rem.a - 1, ..rem },
                ShiftBudget::Directed { .. } => match kind {
                    ShiftKind::RightShiftOf0 if rem.a > 0 => Remaining { a: rem.a - 1, ..rem },
                    ShiftKind::LeftShiftOf0 if rem.b > 0 => Remaining { b: rem.b - 1, ..rem },
                    _ => continue,
                },
                _ => continue,
            };
            let mut nb = bits.clone();
            nb.swap(i, i + 1);
            stack.push((nb, next));
        }
    }
    out
}

fn expand_deletions(
    bits: &[u8],
    budget: DeletionBudget,
    rem: Remaining,
    stack: &mut Vec<(Vec<u8>, Remaining)>,
) {
    let next = Remaining {
        dels: rem.dels - 1,
        ..rem
    };
    match budget {
        DeletionBudget::Zeros(_) | DeletionBudget::AnyBit(_) => {
            let any = matches!(budget, DeletionBudget::AnyBit(_));
            for i in 0..bits.len() {
                // deleting any bit of a run gives the same string
                if (bits[i] == 0 || any) && (i == 0 || bits[i - 1] != bits[i]) {
                    let mut nb = bits.to_vec();
                    nb.remove(i);
                    stack.push((nb, next));
                }
            }
        }
        DeletionBudget::Blocks { ell, .. } => {
            let mut i = 0;
            while i < bits.len() {
                if bits[i] != 0 {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < bits.len() && bits[i] == 0 {
                    i += 1;
                }
                for k in 1..=ell.min(i - start) {
                    let mut nb = bits.to_vec();
                    nb.drain(start..start + k);
                    stack.push((nb, next));
                }
            }
        }
    }
}

/// `B_{t,s}(x)`: at most `t` 0-deletions and `s` adjacent transpositions.
pub fn error_ball(x: &BitString, t: usize, s: usize) -> BTreeSet<BitString> {
    ball(x, BallSpec::new(DeletionBudget::Zeros(t), ShiftBudget::Any(s)))
}

/// At most `t_b` blocks of at most `ell` 0-deletions and `s` transpositions.
pub fn block_deletion_ball(
    x: &BitString,
    t_b: usize,
    ell: usize,
    s: usize,
) -> BTreeSet<BitString> {
    ball(
        x,
        BallSpec::new(DeletionBudget::Blocks { t_b, ell }, ShiftBudget::Any(s)),
    )
}

/// At most `t` 0-deletions, `right` right-shifts and `left` left-shifts of 0.
pub fn directed_ball(x: &BitString, t: usize, right: usize, left: usize) -> BTreeSet<BitString> {
    ball(
        x,
        BallSpec::new(DeletionBudget::Zeros(t), ShiftBudget::Directed { right, left }),
    )
}

/// `phi(y) - phi(x)` for strings of equal weight.
pub fn phi_displacement(x: &BitString, y: &BitString) -> Result<Vec<i64>> {
    if x.weight() != y.weight() {
        return Err(Error::WeightMismatch(x.weight(), y.weight()));
    }
    Ok(phi(x)
        .gaps()
        .iter()
        .zip(phi(y).gaps())
        .map(|(&a, &b)| b as i64 - a as i64)
        .collect())
}

/// `B(n, t, k+, k-)`: vectors with support at most `t`, entries in
/// `[-k_minus, k_plus]` and nonpositive sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnitudeBallSpec {
    pub n: usize,
    pub t: usize,
    pub k_plus: i64,
    pub k_minus: i64,
}

pub fn in_magnitude_ball(v: &[i64], spec: &MagnitudeBallSpec) -> bool {
    v.len() == spec.n
        && v.iter().filter(|&&x| x != 0).count() <= spec.t
        && v.iter().all(|&x| -spec.k_minus <= x && x <= spec.k_plus)
        && v.iter().sum::<i64>() <= 0
}

/// Budget for [`sample_pattern`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternBudget {
    Standard {
        t: usize,
        s_plus: usize,
        s_minus: usize,
    },
    Block {
        t_b: usize,
        ell: usize,
        s: usize,
    },
}

/// A random applicable pattern within `budget`, reproducible from `seed`.
pub fn sample_pattern(x: &BitString, budget: PatternBudget, seed: u64) -> ErrorPattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = x.bits().to_vec();
    let mut pattern = ErrorPattern::default();
    let (mut right, mut left, mut any) = match budget {
        PatternBudget::Standard { s_plus, s_minus, .. } => {
            (rng.gen_range(0..=s_plus), rng.gen_range(0..=s_minus), 0)
        }
        PatternBudget::Block { s, .. } => (0, 0, rng.gen_range(0..=s)),
    };
    while right + left + any > 0 {
        let cands: Vec<(usize, ShiftKind)> = (0..bits.len().saturating_sub(1))
            .filter_map(|i| ShiftKind::of_pair(bits[i], bits[i + 1]).map(|k| (i, k)))
            .filter(|&(_, k)| {
                any > 0
                    || (k == ShiftKind::RightShiftOf0 && right > 0)
                    || (k == ShiftKind::LeftShiftOf0 && left > 0)
            })
            .collect();
        let Some(&(i, kind)) = cands.choose(&mut rng) else {
            break;
        };
        if any > 0 {
            any -= 1;
        } else if kind == ShiftKind::RightShiftOf0 {
            right -= 1;
        } else {
            left -= 1;
        }
        bits.swap(i, i + 1);
        pattern.shifts.push(ShiftEvent { kind, pos: i + 1 });
    }
    let mut gaps = phi(&BitString::from_vec_unchecked(bits)).into_gaps();
    let (blocks, ell) = match budget {
        PatternBudget::Standard { t, .. } => (rng.gen_range(0..=t), 1),
        PatternBudget::Block { t_b, ell, .. } => (rng.gen_range(0..=t_b), ell),
    };
    for _ in 0..blocks {
        let nonempty: Vec<usize> = (0..gaps.len()).filter(|&g| gaps[g] > 0).collect();
        let Some(&g) = nonempty.choose(&mut rng) else {
            break;
        };
        let size = rng.gen_range(1..=ell.min(gaps[g]).max(1));
        for _ in 0..size {
            gaps[g] -= 1;
            pattern.deletions.push(g + 1);
        }
    }
    pattern
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    /// Independent enumerator: plain recursion over event sequences.
    fn reference_ball(
        x: &[u8],
        dels: usize,
        block: Option<usize>,
        s: usize,
        out: &mut BTreeSet<Vec<u8>>,
    ) {
        out.insert(x.to_vec());
        if dels > 0 {
            for i in 0..x.len() {
                for k in 1..=block.unwrap_or(1) {
                    if i + k <= x.len() && x[i..i + k].iter().all(|&b| b == 0) {
                        let mut y = x.to_vec();
                        y.drain(i..i + k);
                        reference_ball(&y, dels - 1, block, s, out);
                    }
                }
            }
        }
        if s > 0 {
            for i in 0..x.len().saturating_sub(1) {
                if x[i] != x[i + 1] {
                    let mut y = x.to_vec();
                    y.swap(i, i + 1);
                    reference_ball(&y, dels, block, s - 1, out);
                }
            }
        }
    }

    fn reference(x: &BitString, dels: usize, block: Option<usize>, s: usize) -> BTreeSet<BitString> {
        let mut out = BTreeSet::new();
        reference_ball(x.bits(), dels, block, s, &mut out);
        out.into_iter().map(BitString::from_vec_unchecked).collect()
    }

    #[test]
    fn paper_example_pattern() {
        let x = bs("0111010100");
        let e = ErrorPattern {
            deletions: vec![1, 6],
            shifts: vec![
                ShiftEvent { kind: ShiftKind::LeftShiftOf0, pos: 4 },
                ShiftEvent { kind: ShiftKind::RightShiftOf0, pos: 7 },
            ],
        };
        assert_eq!(apply_pattern(&x, &e).unwrap(), bs("11011100"));
        assert!(error_ball(&x, 2, 2).contains(&bs("11011100")));
    }

    #[test]
    fn simple_patterns() {
        let x = bs("0101");
        assert_eq!(apply_pattern(&x, &ErrorPattern::default()).unwrap(), x);
        let e = ErrorPattern {
            deletions: vec![],
            shifts: vec![ShiftEvent { kind: ShiftKind::RightShiftOf0, pos: 1 }],
        };
        assert_eq!(apply_pattern(&x, &e).unwrap(), bs("1001"));
    }

    #[test]
    fn inapplicable_patterns() {
        let x = bs("0011");
        let bad = [
            ErrorPattern { deletions: vec![2], shifts: vec![] },
            ErrorPattern { deletions: vec![9], shifts: vec![] },
            ErrorPattern {
                deletions: vec![],
                shifts: vec![ShiftEvent { kind: ShiftKind::RightShiftOf0, pos: 1 }],
            },
            ErrorPattern {
                deletions: vec![],
                shifts: vec![ShiftEvent { kind: ShiftKind::LeftShiftOf0, pos: 2 }],
            },
            ErrorPattern {
                deletions: vec![],
                shifts: vec![ShiftEvent { kind: ShiftKind::RightShiftOf0, pos: 4 }],
            },
        ];
        for e in bad {
            assert!(matches!(apply_pattern(&x, &e), Err(Error::InapplicablePattern(_))));
        }
    }

    #[test]
    fn pattern_json_format() {
        let e = ErrorPattern {
            deletions: vec![1, 6],
            shifts: vec![ShiftEvent { kind: ShiftKind::LeftShiftOf0, pos: 4 }],
        };
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(
            json,
            r#"{"deletions":[1,6],"shifts":[{"kind":"left_shift_of_0","pos":4}]}"#
        );
        assert_eq!(serde_json::from_str::<ErrorPattern>(&json).unwrap(), e);
    }

    #[test]
    fn small_balls() {
        let x = bs("0111010100");
        assert_eq!(error_ball(&x, 0, 0), BTreeSet::from([x.clone()]));
        assert_eq!(block_deletion_ball(&x, 0, 3, 0), BTreeSet::from([x.clone()]));
        assert_eq!(error_ball(&bs("000"), 1, 0), BTreeSet::from([bs("000"), bs("00")]));
    }

    #[test]
    fn paper_block_example() {
        let x = bs("0100101001");
        let y = bs("0110110");
        assert!(block_deletion_ball(&x, 3, 2, 1).contains(&y));
        let v = phi_displacement(&x, &y).unwrap();
        assert_eq!(v, vec![0, -2, 0, -2, 1]);
        let spec = MagnitudeBallSpec { n: 5, t: 5, k_plus: 2, k_minus: 8 };
        assert!(in_magnitude_ball(&v, &spec));
        assert_eq!(phi_displacement(&x, &x).unwrap(), vec![0; 5]);
        assert!(phi_displacement(&x, &bs("1")).is_err());
    }

    #[test]
    fn magnitude_ball_membership() {
        let spec = MagnitudeBallSpec { n: 5, t: 1, k_plus: 2, k_minus: 8 };
        assert!(in_magnitude_ball(&[0; 5], &spec));
        assert!(!in_magnitude_ball(&[3, 0, 0, 0, 0], &spec));
        assert!(!in_magnitude_ball(&[1, 0, 0, 0, 0], &spec));
        assert!(!in_magnitude_ball(&[-1, -1, 0, 0, 0], &spec));
    }

    #[test]
    fn balls_match_reference_enumerator() {
        for n in 0..=8 {
            for x in BitString::all(n) {
                for (t, s) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)] {
                    assert_eq!(error_ball(&x, t, s), reference(&x, t, None, s), "x={x} t={t} s={s}");
                }
                for (t_b, ell, s) in [(1, 2, 0), (1, 2, 1), (2, 2, 1)] {
                    assert_eq!(
                        block_deletion_ball(&x, t_b, ell, s),
                        reference(&x, t_b, Some(ell), s)
                    );
                }
            }
        }
        for x in BitString::all(10).step_by(7) {
            assert_eq!(error_ball(&x, 1, 1), reference(&x, 1, None, 1));
            assert_eq!(block_deletion_ball(&x, 1, 2, 1), reference(&x, 1, Some(2), 1));
        }
    }

    #[test]
    fn weight_and_length_bookkeeping() {
        for n in 0..=10 {
            for x in BitString::all(n) {
                for y in error_ball(&x, 1, 1) {
                    assert_eq!(y.weight(), x.weight());
                    assert!(y.len() + 1 >= n && y.len() <= n);
                }
            }
        }
    }

    #[test]
    fn block_displacement_bounds() {
        // per-gap change lies in [-(t_b*ell + 2), 2] while s <= 2
        for n in 1..=9 {
            for x in BitString::all(n) {
                for (t_b, ell, s) in [(1, 1, 1), (1, 2, 2), (2, 2, 1), (2, 1, 2), (2, 2, 2)] {
                    for y in block_deletion_ball(&x, t_b, ell, s) {
                        let v = phi_displacement(&x, &y).unwrap();
                        let lo = -((t_b * ell) as i64 + 2);
                        assert!(v.iter().all(|&d| lo <= d && d <= 2));
                        assert!(v.iter().filter(|&&d| d != 0).count() <= t_b + 2 * s);
                        assert_eq!(v.iter().sum::<i64>(), y.len() as i64 - n as i64);
                    }
                }
            }
        }
    }

    #[test]
    fn block_displacement_bounds_n10() {
        for x in BitString::all(10) {
            for y in block_deletion_ball(&x, 2, 2, 2) {
                let v = phi_displacement(&x, &y).unwrap();
                assert!(v.iter().all(|&d| (-6..=2).contains(&d)));
            }
        }
    }

    #[test]
    fn three_shifts_can_add_three() {
        // beyond s = 2 a single gap can gain more than 2
        let x = bs("1000101");
        let y = bs("0001101");
        let v = phi_displacement(&x, &y).unwrap();
        assert!(error_ball(&x, 0, 3).contains(&y));
        assert_eq!(v[0], 3);
    }

    #[test]
    fn sampling_is_deterministic_and_in_ball() {
        let x = bs("0110100100");
        let zero = PatternBudget::Standard { t: 0, s_plus: 0, s_minus: 0 };
        assert!(sample_pattern(&x, zero, 1).is_empty());
        let budget = PatternBudget::Standard { t: 2, s_plus: 1, s_minus: 1 };
        assert_eq!(sample_pattern(&x, budget, 7), sample_pattern(&x, budget, 7));
        let full = directed_ball(&x, 2, 1, 1);
        for seed in 0..1000 {
            let e = sample_pattern(&x, budget, seed);
            assert!(full.contains(&apply_pattern(&x, &e).unwrap()));
        }
        let block = PatternBudget::Block { t_b: 2, ell: 2, s: 1 };
        let bball = block_deletion_ball(&x, 2, 2, 1);
        for seed in 0..1000 {
            let e = sample_pattern(&x, block, seed);
            assert!(bball.contains(&apply_pattern(&x, &e).unwrap()));
        }
    }

    #[test]
    fn directed_ball_respects_kinds() {
        let x = bs("01");
        assert_eq!(directed_ball(&x, 0, 1, 0), BTreeSet::from([bs("01"), bs("10")]));
        assert_eq!(directed_ball(&x, 0, 0, 1), BTreeSet::from([bs("01")]));
        let any = ball(&x, BallSpec::new(DeletionBudget::AnyBit(1), ShiftBudget::Any(0)));
        assert_eq!(any, BTreeSet::from([bs("01"), bs("0"), bs("1")]));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sampled_patterns_preserve_weight(
            bits in proptest::collection::vec(0u8..2, 0..16),
            seed in any::<u64>(),
            t in 0usize..3, sp in 0usize..3, sm in 0usize..3,
        ) {
            let x = BitString::new(bits).unwrap();
            let e = sample_pattern(&x, PatternBudget::Standard { t, s_plus: sp, s_minus: sm }, seed);
            let y = apply_pattern(&x, &e).unwrap();
            prop_assert_eq!(y.weight(), x.weight());
            prop_assert_eq!(y.len() + e.deletions.len(), x.len());
            prop_assert!(e.deletions.len() <= t);
        }
    }
}
