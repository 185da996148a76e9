//! Codes for `t_b` blocks of at most `ell` 0-deletions plus `s` adjacent
//! transpositions.
//!
//! The non-systematic code keeps every `x` with `phi(x1) mod p` in a fixed
//! coset of a narrow-sense BCH code of designed distance `2(t_b+2s)+1`. The
//! systematic code appends the BCH parity of `phi(c1) mod p` as a balanced
//! block `h1`, and protects `h1` with a repeated balanced block `h2`. Both
//! blocks have a known number of 1s, which the channel never changes, so the
//! decoder finds them by counting 1s from the end.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bch::{parity_length_formula, BchCode};
use crate::error::{Error, Result};
use crate::galois::{is_prime, smallest_prime_at_least};
use crate::seqcore::{phi, phi_inverse_gaps, BitString, QaryString};

/// How wrapped error values are lifted back to integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// `p >= t_b*ell + 2*max(2,s) + 1`, residues up to `max(2,s)` are positive.
    #[default]
    Corrected,
    /// `p >= t_b*ell + 4`, residues up to 1 are positive.
    Paper,
}

impl ThresholdMode {
    pub fn threshold(self, s: usize) -> u64 {
        match self {
            Self::Corrected => s.max(2) as u64,
            Self::Paper => 1,
        }
    }

    pub fn min_prime(self, t_b: usize, ell: usize, s: usize) -> u64 {
        let tl = (t_b * ell) as u64;
        match self {
            Self::Corrected => tl + 2 * s.max(2) as u64 + 1,
            Self::Paper => tl + 4,
        }
    }
}

/// Designed distance `2(t_b + 2s) + 1`.
pub fn designed_distance(t_b: usize, s: usize) -> usize {
    2 * (t_b + 2 * s) + 1
}

pub fn default_prime(t_b: usize, ell: usize, s: usize, mode: ThresholdMode) -> u64 {
    smallest_prime_at_least(mode.min_prime(t_b, ell, s))
}

/// Smallest extension covering `len` whose generator still fits.
fn bch_for(p: u64, len: usize, d: usize) -> Result<BchCode> {
    let mut m = 1u32;
    while (p as u128).pow(m) - 1 < len as u128 {
        m += 1;
    }
    loop {
        match BchCode::new(p, m, d) {
            Ok(code) => return Ok(code),
            Err(Error::InvalidParameters(_)) if m < 8 => m += 1,
            Err(e) => return Err(e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockCodeSpec {
    pub n: usize,
    pub t_b: usize,
    pub ell: usize,
    pub s: usize,
    pub p: u64,
    pub mode: ThresholdMode,
    /// Syndromes of the coset in use; empty for the code itself.
    pub coset: Vec<u32>,
    bch: BchCode,
}

impl BlockCodeSpec {
    pub fn new(n: usize, t_b: usize, ell: usize, s: usize) -> Result<Self> {
        Self::with_mode(n, t_b, ell, s, ThresholdMode::Corrected)
    }

    pub fn with_mode(n: usize, t_b: usize, ell: usize, s: usize, mode: ThresholdMode) -> Result<Self> {
        Self::with_prime(n, t_b, ell, s, default_prime(t_b, ell, s, mode), mode)
    }

    pub fn with_prime(
        n: usize,
        t_b: usize,
        ell: usize,
        s: usize,
        p: u64,
        mode: ThresholdMode,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let need = mode.min_prime(t_b, ell, s);
        if p < need {
            return Err(Error::InvalidParameters(format!("need p >= {need}, got {p}")));
        }
        let bch = bch_for(p, n + 1, designed_distance(t_b, s))?;
        Ok(Self {
            n,
            t_b,
            ell,
            s,
            p,
            mode,
            coset: Vec::new(),
            bch,
        })
    }

    /// The same code shifted to the coset containing `word`.
    pub fn with_coset_of(mut self, word: &[u64]) -> Self {
        self.coset = self.bch.syndromes(word);
        self
    }

    /// `n = 10`, `t_b = ell = 2`, `s = 1`, `p = 11`, coset through `12120`.
    pub fn paper_example() -> Self {
        Self::with_prime(10, 2, 2, 1, 11, ThresholdMode::Corrected)
            .expect("valid parameters")
            .with_coset_of(&[1, 2, 1, 2, 0])
    }

    pub fn bch(&self) -> &BchCode {
        &self.bch
    }
}

fn phi_mod(x: &BitString, p: u64) -> (Vec<usize>, Vec<u64>) {
    let gaps = phi(x).into_gaps();
    let z = gaps.iter().map(|&g| g as u64 % p).collect();
    (gaps, z)
}

pub fn membership_nonsys(x: &BitString, spec: &BlockCodeSpec) -> bool {
    x.len() == spec.n && spec.bch.in_coset(&phi_mod(x, spec.p).1, &spec.coset)
}

pub fn codebook(spec: &BlockCodeSpec) -> Vec<BitString> {
    BitString::all(spec.n)
        .filter(|x| membership_nonsys(x, spec))
        .collect()
}

/// Intermediate values of one non-systematic decode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTrace {
    pub z_prime: Vec<u64>,
    pub z_star: Vec<u64>,
    pub eps_prime: Vec<u64>,
    pub eps: Vec<i64>,
    pub output: BitString,
}

fn lift(eps_prime: &[u64], p: u64, threshold: u64) -> Vec<i64> {
    eps_prime
        .iter()
        .map(|&e| if e <= threshold { e as i64 } else { e as i64 - p as i64 })
        .collect()
}

fn subtract_gaps(gaps: &[usize], eps: &[i64]) -> Result<Vec<usize>> {
    gaps.iter()
        .zip(eps)
        .map(|(&g, &e)| {
            let v = g as i64 - e;
            usize::try_from(v)
                .map_err(|_| Error::DecodeFailure("correction makes a gap negative".into()))
        })
        .collect()
}

pub fn decode_nonsys_trace(y: &BitString, spec: &BlockCodeSpec) -> Result<BlockTrace> {
    let p = spec.p;
    let (gaps, z_prime) = phi_mod(y, p);
    let z_star = spec.bch.decode_in_coset(&z_prime, &spec.coset)?;
    let eps_prime: Vec<u64> = z_prime
        .iter()
        .zip(&z_star)
        .map(|(&a, &b)| (a + p - b) % p)
        .collect();
    let eps = lift(&eps_prime, p, spec.mode.threshold(spec.s));
    let output = phi_inverse_gaps(&subtract_gaps(&gaps, &eps)?);
    if output.len() != spec.n {
        return Err(Error::DecodeFailure(format!(
            "reconstruction has length {}, expected {}",
            output.len(),
            spec.n
        )));
    }
    Ok(BlockTrace {
        z_prime,
        z_star,
        eps_prime,
        eps,
        output,
    })
}

pub fn decode_nonsys(y: &BitString, spec: &BlockCodeSpec) -> Result<BitString> {
    decode_nonsys_trace(y, spec).map(|t| t.output)
}

pub(crate) fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u8);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Output length of [`balance_encode`] for `k` input bits.
pub fn balanced_len(k: usize) -> usize {
    k + ceil_log2(k) + 1
}

/// Number of 1s in every balanced word of length `len`.
pub fn balanced_ones(len: usize) -> usize {
    if len == 0 {
        0
    } else {
        1 + (len - 1) / 2
    }
}

fn balance_capacity_ok(k: usize) -> bool {
    let n = balanced_len(k);
    binomial(n - 1, (n - 1) / 2) >= BigUint::from(1u8) << k
}

/// `1` followed by the `rank(x)`-th string (lexicographic) with
/// `ceil((n-1)/2)` zeros among `n-1` bits.
pub fn balance_encode(x: &BitString) -> Result<BitString> {
    let k = x.len();
    if !balance_capacity_ok(k) {
        return Err(Error::CapacityExceeded(k));
    }
    let len = balanced_len(k) - 1;
    let mut rank = x
        .bits()
        .iter()
        .fold(BigUint::ZERO, |acc, &b| (acc << 1u8) + BigUint::from(b));
    let mut zeros = len.div_ceil(2);
    let mut bits = vec![1u8];
    for pos in 0..len {
        let rest = len - pos - 1;
        let with_zero = if zeros > 0 {
            binomial(rest, zeros - 1)
        } else {
            BigUint::ZERO
        };
        if rank < with_zero {
            bits.push(0);
            zeros -= 1;
        } else {
            rank -= with_zero;
            bits.push(1);
        }
    }
    Ok(BitString::from_vec_unchecked(bits))
}

/// Inverse of [`balance_encode`] for messages of length `k`.
pub fn balance_decode(b: &BitString, k: usize) -> Result<BitString> {
    let n = balanced_len(k);
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: b.len(),
        });
    }
    let body = &b.bits()[1..];
    let len = n - 1;
    let mut zeros = len.div_ceil(2);
    if b.bits()[0] != 1 || body.iter().filter(|&&v| v == 0).count() != zeros {
        return Err(Error::DecodeFailure("word is not balanced".into()));
    }
    let mut rank = BigUint::ZERO;
    for (pos, &bit) in body.iter().enumerate() {
        let rest = len - pos - 1;
        if bit == 0 {
            zeros -= 1;
        } else if zeros > 0 {
            rank += binomial(rest, zeros - 1);
        }
    }
    if rank.bits() as usize > k {
        return Err(Error::DecodeFailure("rank exceeds the message space".into()));
    }
    let bits = (0..k)
        .map(|i| u8::from(rank.bit((k - 1 - i) as u64)))
        .collect();
    Ok(BitString::from_vec_unchecked(bits))
}

fn symbol_width(q: u32) -> usize {
    ceil_log2(q as usize)
}

/// Each symbol as `ceil(log2 q)` big-endian bits.
pub fn binary_map(u: &QaryString) -> BitString {
    let w = symbol_width(u.q());
    let bits = u
        .symbols()
        .iter()
        .flat_map(|&v| (0..w).rev().map(move |i| ((v >> i) & 1) as u8))
        .collect();
    BitString::from_vec_unchecked(bits)
}

pub fn binary_unmap(b: &BitString, q: u32) -> Result<QaryString> {
    let w = symbol_width(q);
    if w == 0 || b.len() % w != 0 {
        return Err(Error::InvalidParameters(format!(
            "{} bits do not split into {w}-bit symbols",
            b.len()
        )));
    }
    let symbols = b
        .bits()
        .chunks(w)
        .map(|c| c.iter().fold(0u32, |acc, &v| (acc << 1) | v as u32))
        .collect();
    QaryString::new(symbols, q)
}

/// Side information that lets `h1` survive the channel.
pub trait Protector {
    fn digest_len(&self, h_len: usize) -> usize;
    fn protect(&self, h: &BitString) -> BitString;
    /// Recovers `h` from its corrupted region and the intact digest.
    fn recover(&self, corrupted: &BitString, digest: &BitString) -> Result<BitString>;
}

/// The digest is `h` itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityProtector;

impl Protector for IdentityProtector {
    fn digest_len(&self, h_len: usize) -> usize {
        h_len
    }

    fn protect(&self, h: &BitString) -> BitString {
        h.clone()
    }

    fn recover(&self, _corrupted: &BitString, digest: &BitString) -> Result<BitString> {
        Ok(digest.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystematicLayout {
    pub k: usize,
    pub t_b: usize,
    pub ell: usize,
    pub s: usize,
    pub p: u64,
    pub m: u32,
    /// Parity symbols reserved for `g`.
    pub n1_pp: usize,
    /// Bits of the binary image of `g`.
    pub n1_p: usize,
    /// Length of `h1`.
    pub n1: usize,
    /// Digest length.
    pub n2_pp: usize,
    /// Length of the balanced digest.
    pub n2_p: usize,
    /// Length of `h2`.
    pub n2: usize,
    /// Total length `k + n1 + n2`.
    pub total: usize,
}

impl SystematicLayout {
    pub fn repetition(&self) -> usize {
        2 * self.t_b * self.ell + 3
    }

    pub fn designed_distance(&self) -> usize {
        designed_distance(self.t_b, self.s)
    }

    pub fn bch(&self) -> Result<BchCode> {
        BchCode::new(self.p, self.m, self.designed_distance())
    }

    pub fn redundancy(&self) -> usize {
        self.total - self.k
    }
}

pub fn layout_for(k: usize, t_b: usize, ell: usize, s: usize) -> SystematicLayout {
    layout_with(k, t_b, ell, s, &IdentityProtector)
}

pub fn layout_with(
    k: usize,
    t_b: usize,
    ell: usize,
    s: usize,
    prot: &dyn Protector,
) -> SystematicLayout {
    let p = default_prime(t_b, ell, s, ThresholdMode::Corrected);
    let d = designed_distance(t_b, s);
    let mut m = 1u32;
    while (p as u128).pow(m) - 1 < (k + 1 + parity_length_formula(p, m, d)) as u128 {
        m += 1;
    }
    let n1_pp = parity_length_formula(p, m, d) + 1;
    let n1_p = n1_pp * ceil_log2(p as usize);
    let n1 = balanced_len(n1_p) + 2;
    let n2_pp = prot.digest_len(n1);
    let n2_p = balanced_len(n2_pp);
    let n2 = (2 * t_b * ell + 3) * n2_p;
    SystematicLayout {
        k,
        t_b,
        ell,
        s,
        p,
        m,
        n1_pp,
        n1_p,
        n1,
        n2_pp,
        n2_p,
        n2,
        total: k + n1 + n2,
    }
}

fn padded_phi(c: &BitString, k: usize, p: u64) -> Result<(Vec<usize>, Vec<u64>)> {
    let (gaps, mut z) = phi_mod(c, p);
    if z.len() > k + 1 {
        return Err(Error::DecodeFailure(format!(
            "{} gaps exceed {}",
            z.len(),
            k + 1
        )));
    }
    z.resize(k + 1, 0);
    Ok((gaps, z))
}

fn repeat_bits(x: &BitString, r: usize) -> BitString {
    BitString::from_vec_unchecked(x.bits().iter().flat_map(|&b| std::iter::repeat_n(b, r)).collect())
}

pub fn encode_systematic(
    c: &BitString,
    layout: &SystematicLayout,
    prot: &dyn Protector,
) -> Result<BitString> {
    if c.len() != layout.k {
        return Err(Error::LengthMismatch {
            expected: layout.k,
            actual: c.len(),
        });
    }
    let bch = layout.bch()?;
    let (_, cbar) = padded_phi(c, layout.k, layout.p)?;
    let parity = bch.parity(&cbar)?;
    let mut g = vec![0u32; layout.n1_pp - parity.len()];
    g.extend(parity.iter().map(|&v| v as u32));
    let gb = binary_map(&QaryString::new(g, layout.p as u32)?);
    let h1 = BitString::ones(2).concat(&balance_encode(&gb)?);
    let h2 = repeat_bits(&balance_encode(&prot.protect(&h1))?, layout.repetition());
    Ok(c.concat(&h1).concat(&h2))
}

/// Index of the `count`-th 1 from the end.
fn nth_one_from_end(d: &BitString, count: usize) -> Option<usize> {
    if count == 0 {
        return Some(d.len());
    }
    d.bits()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &b)| b == 1)
        .nth(count - 1)
        .map(|(i, _)| i)
}

/// Inverts `r`-fold repetition of a word of length `len` after at most
/// `dels` 0-deletions and `s` transpositions. The `i`-th 1 of the region is
/// the `i`-th 1 of the clean word, so each 1-group's preceding zero count
/// is a multiple of `r` within `[-s, dels + s]` of the observed count.
pub fn repetition_decode(
    z: &BitString,
    r: usize,
    len: usize,
    dels: usize,
    s: usize,
) -> Result<BitString> {
    let gaps = phi(z).into_gaps();
    let ones = gaps.len() - 1;
    if r == 0 || ones % r != 0 {
        return Err(Error::RepetitionAmbiguous(ones));
    }
    let snap = |observed: usize| -> Result<usize> {
        let lo = observed.saturating_sub(s);
        let hi = observed + dels + s;
        let q = lo.div_ceil(r) * r;
        if q > hi || q + r <= hi {
            return Err(Error::RepetitionAmbiguous(observed));
        }
        Ok(q / r)
    };
    let mut bits = Vec::with_capacity(len);
    let mut cum = 0usize;
    let mut placed = 0usize;
    for (i, &g) in gaps.iter().enumerate() {
        cum += g;
        let is_group_start = i < ones && i % r == 0;
        if is_group_start || i == ones {
            let zeros = snap(cum)?;
            if zeros < placed {
                return Err(Error::RepetitionAmbiguous(cum));
            }
            bits.extend(std::iter::repeat_n(0u8, zeros - placed));
            placed = zeros;
            if i < ones {
                bits.push(1);
            }
        }
    }
    if bits.len() != len {
        return Err(Error::RepetitionAmbiguous(bits.len()));
    }
    Ok(BitString::from_vec_unchecked(bits))
}

pub fn decode_systematic(
    d: &BitString,
    layout: &SystematicLayout,
    prot: &dyn Protector,
) -> Result<BitString> {
    let r = layout.repetition();
    let dels = layout.t_b * layout.ell;
    let ones_h2 = r * balanced_ones(layout.n2_p);
    let ones_h1 = 2 + balanced_ones(layout.n1 - 2);
    let i_r2 = nth_one_from_end(d, ones_h2)
        .ok_or_else(|| Error::MarkerNotFound(format!("{ones_h2} ones for h2")))?;
    let i_r1 = nth_one_from_end(d, ones_h2 + ones_h1)
        .ok_or_else(|| Error::MarkerNotFound(format!("{} ones for h1", ones_h1 + ones_h2)))?;

    let bal2 = repetition_decode(&d.slice(i_r2, d.len()), r, layout.n2_p, dels, layout.s)?;
    let digest = balance_decode(&bal2, layout.n2_pp)?;
    let h1 = prot.recover(&d.slice(i_r1, i_r2), &digest)?;
    if h1.len() != layout.n1 || h1.bits()[..2] != [1, 1] {
        return Err(Error::DecodeFailure("recovered h1 is malformed".into()));
    }
    let gb = balance_decode(&h1.slice(2, h1.len()), layout.n1_p)?;
    let g = binary_unmap(&gb, layout.p as u32)?;
    if g.symbols().iter().any(|&v| v as u64 >= layout.p) {
        return Err(Error::DecodeFailure("parity symbol out of range".into()));
    }

    let bch = layout.bch()?;
    let plen = bch.parity_len();
    let (pad, parity) = g.symbols().split_at(layout.n1_pp - plen);
    if pad.iter().any(|&v| v != 0) {
        return Err(Error::DecodeFailure("parity padding is nonzero".into()));
    }
    let parity: Vec<u64> = parity.iter().map(|&v| v as u64).collect();

    let msg = d.slice(0, i_r1);
    let (gaps, mut word) = padded_phi(&msg, layout.k, layout.p)?;
    word.extend(&parity);
    let fixed = bch.decode(&word)?;
    if fixed[layout.k + 1..] != parity[..] {
        return Err(Error::BchFailure("decoder altered the known parity".into()));
    }
    let p = layout.p;
    let eps_prime: Vec<u64> = word[..layout.k + 1]
        .iter()
        .zip(&fixed)
        .map(|(&a, &b)| (a + p - b) % p)
        .collect();
    if eps_prime[gaps.len()..].iter().any(|&e| e != 0) {
        return Err(Error::DecodeFailure("correction touches the padding".into()));
    }
    let eps = lift(&eps_prime[..gaps.len()], p, ThresholdMode::Corrected.threshold(layout.s));
    let c = phi_inverse_gaps(&subtract_gaps(&gaps, &eps)?);
    if c.len() != layout.k {
        return Err(Error::DecodeFailure(format!(
            "message has length {}, expected {}",
            c.len(),
            layout.k
        )));
    }
    Ok(c)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn binary_map_round_trip(v in proptest::collection::vec(0u32..11, 0..40)) {
            let u = QaryString::new(v, 11).unwrap();
            prop_assert_eq!(binary_unmap(&binary_map(&u), 11).unwrap(), u);
        }

        #[test]
        fn balance_round_trip(v in proptest::collection::vec(0u8..2, 3..200)) {
            let x = BitString::new(v).unwrap();
            let b = balance_encode(&x).unwrap();
            prop_assert_eq!(b.weight(), balanced_ones(b.len()));
            prop_assert_eq!(balance_decode(&b, x.len()).unwrap(), x);
        }

        #[test]
        fn membership_reads_phi_of_x1(v in proptest::collection::vec(0u8..2, 10)) {
            let spec = BlockCodeSpec::new(10, 1, 1, 0).unwrap();
            let x = BitString::new(v).unwrap();
            let x1 = x.concat(&BitString::ones(1));
            let mut z: Vec<u64> = phi(&x1).gaps().iter().map(|&g| g as u64 % spec.p).collect();
            prop_assert_eq!(z.pop(), Some(0));
            prop_assert_eq!(membership_nonsys(&x, &spec), spec.bch().in_coset(&z, &[]));
        }
    }
}
