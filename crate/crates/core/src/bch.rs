//! Narrow-sense BCH codes over GF(p), shortened to any length up to
//! `p^m - 1`.
//!
//! A word `(w_1, ..., w_L)` stands for the polynomial `sum w_i x^{L-i}`, so the
//! first symbol carries the highest degree. Shortening therefore drops the
//! high-degree positions, and a systematic codeword reads `(msg, parity)`.

use crate::error::{Error, Result};
use crate::galois::{ExtensionField, Polynomial, PrimeField};

#[derive(Clone, Debug)]
pub struct BchCode {
    base: PrimeField,
    ext: ExtensionField,
    d: usize,
    max_len: usize,
    generator: Polynomial,
}

impl BchCode {
    /// BCH code over GF(p) with locators in GF(p^m) and designed distance `d`.
    pub fn new(p: u64, m: u32, d: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let ext = ExtensionField::new(p, m)?;
        let max_len = ext.size() as usize - 1;
        let generator = generator_polynomial(&ext, base, d);
        if generator.degree().unwrap_or(0) > max_len {
            return Err(Error::InvalidParameters(format!(
                "designed distance {d} too large for GF({p}^{m})"
            )));
        }
        Ok(Self {
            base,
            ext,
            d: d.max(1),
            max_len,
            generator,
        })
    }

    /// Smallest extension degree whose primitive length covers `len`.
    pub fn for_length(p: u64, len: usize, d: usize) -> Result<Self> {
        let mut m = 1u32;
        while (p as u128).pow(m) - 1 < len as u128 {
            m += 1;
        }
        Self::new(p, m, d)
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn m(&self) -> u32 {
        self.ext.m()
    }

    pub fn designed_distance(&self) -> usize {
        self.d
    }

    /// Unshortened length `p^m - 1`.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn generator(&self) -> &Polynomial {
        &self.generator
    }

    /// Number of parity symbols, the degree of the generator.
    pub fn parity_len(&self) -> usize {
        self.generator.degree().unwrap_or(0)
    }

    /// Message length of the code shortened to `len`.
    pub fn dimension(&self, len: usize) -> usize {
        len.saturating_sub(self.parity_len())
    }

    pub fn correction_radius(&self) -> usize {
        (self.d - 1) / 2
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len > self.max_len {
            return Err(Error::InvalidParameters(format!(
                "length {len} exceeds {}",
                self.max_len
            )));
        }
        Ok(())
    }

    /// Parity symbols for `msg`, highest degree first.
    pub fn parity(&self, msg: &[u64]) -> Result<Vec<u64>> {
        let r = self.parity_len();
        self.check_len(msg.len() + r)?;
        let mut coeffs = vec![0u64; r];
        coeffs.extend(msg.iter().rev().map(|&c| c % self.p()));
        let shifted = Polynomial::new(coeffs, self.base);
        let (_, rem) = shifted.div_rem(&self.generator)?;
        Ok((0..r).rev().map(|i| self.base.neg(rem.coeff(i))).collect())
    }

    /// `(msg, parity)` divisible by the generator.
    pub fn encode_systematic(&self, msg: &[u64]) -> Result<Vec<u64>> {
        let mut word: Vec<u64> = msg.iter().map(|&c| c % self.p()).collect();
        word.extend(self.parity(msg)?);
        Ok(word)
    }

    /// `S_j = w(alpha^j)` for `j = 1..d-1`.
    pub fn syndromes(&self, word: &[u64]) -> Vec<u32> {
        let f = &self.ext;
        let len = word.len();
        (1..self.d as i64)
            .map(|j| {
                word.iter().enumerate().fold(0u32, |acc, (i, &c)| {
                    if c % self.p() == 0 {
                        return acc;
                    }
                    let deg = (len - 1 - i) as i64;
                    f.add(acc, f.mul(f.from_base(c), f.alpha_pow(j * deg)))
                })
            })
            .collect()
    }

    pub fn is_codeword(&self, word: &[u64]) -> bool {
        word.len() <= self.max_len && self.syndromes(word).iter().all(|&s| s == 0)
    }

    /// Bounded-distance decoding: syndromes, Berlekamp-Massey, locator root
    /// scan over the word's positions, Forney error values.
    pub fn decode(&self, word: &[u64]) -> Result<Vec<u64>> {
        self.decode_in_coset(word, &[])
    }

    /// Decoding in the coset `{w : syndromes(w) = target}`; an empty target
    /// means the code itself.
    pub fn decode_in_coset(&self, word: &[u64], target: &[u32]) -> Result<Vec<u64>> {
        self.check_len(word.len())?;
        let f = &self.ext;
        let mut synd = self.syndromes(word);
        for (s, &t) in synd.iter_mut().zip(target) {
            *s = f.sub(*s, t);
        }
        let reduced: Vec<u64> = word.iter().map(|&c| c % self.p()).collect();
        if synd.iter().all(|&s| s == 0) {
            return Ok(reduced);
        }
        let lambda = berlekamp_massey(f, &synd);
        let nerr = lambda.len() - 1;
        if nerr > self.correction_radius() {
            return Err(Error::BchFailure(format!("locator degree {nerr}")));
        }
        let len = word.len();
        let positions: Vec<usize> = (0..len)
            .filter(|&deg| ext_eval(f, &lambda, f.alpha_pow(-(deg as i64))) == 0)
            .collect();
        if positions.len() != nerr {
            return Err(Error::BchFailure(format!(
                "locator has {} roots in range, expected {nerr}",
                positions.len()
            )));
        }
        let mut omega = ext_mul(f, &synd, &lambda);
        omega.truncate(synd.len());
        let dlambda: Vec<u32> = (1..lambda.len())
            .map(|i| ext_scale_int(f, lambda[i], i as u64))
            .collect();
        let mut out = reduced;
        for deg in positions {
            let xinv = f.alpha_pow(-(deg as i64));
            let num = ext_eval(f, &omega, xinv);
            let den = ext_eval(f, &dlambda, xinv);
            let val = f.neg(f.div(num, den).map_err(|_| {
                Error::BchFailure("vanishing locator derivative".into())
            })?);
            let val = f
                .to_base(val)
                .ok_or_else(|| Error::BchFailure("error value outside GF(p)".into()))?;
            let idx = len - 1 - deg;
            out[idx] = self.base.sub(out[idx], val);
        }
        if !self.in_coset(&out, target) {
            return Err(Error::BchFailure("correction leaves the coset".into()));
        }
        Ok(out)
    }

    pub fn in_coset(&self, word: &[u64], target: &[u32]) -> bool {
        word.len() <= self.max_len
            && self
                .syndromes(word)
                .iter()
                .enumerate()
                .all(|(i, &s)| s == target.get(i).copied().unwrap_or(0))
    }
}

/// `ceil((d-1)(1-1/p)) * m`, the parity count of a narrow-sense code in the
/// regime where every cyclotomic coset below `d` has full size.
pub fn parity_length_formula(p: u64, m: u32, d: usize) -> usize {
    let dm1 = d.saturating_sub(1) as u64;
    let num = dm1 * (p - 1);
    (num.div_ceil(p) * m as u64) as usize
}

fn generator_polynomial(ext: &ExtensionField, base: PrimeField, d: usize) -> Polynomial {
    let order = (ext.size() - 1) as u64;
    let p = ext.p();
    let mut seen = vec![false; order as usize];
    let mut g = Polynomial::one(base);
    for i in 1..d as u64 {
        let i = i % order;
        if seen[i as usize] {
            continue;
        }
        let mut coset = Vec::new();
        let mut j = i;
        while !seen[j as usize] {
            seen[j as usize] = true;
            coset.push(j);
            j = j * p % order;
        }
        let mut minpoly = vec![1u32];
        for &e in &coset {
            let root = ext.alpha_pow(e as i64);
            minpoly = ext_mul(ext, &minpoly, &[ext.neg(root), 1]);
        }
        let coeffs: Vec<u64> = minpoly
            .iter()
            .map(|&c| ext.to_base(c).expect("minimal polynomial lies over GF(p)"))
            .collect();
        g = g.mul(&Polynomial::new(coeffs, base));
    }
    g
}

fn ext_mul(f: &ExtensionField, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn ext_eval(f: &ExtensionField, poly: &[u32], x: u32) -> u32 {
    poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn ext_scale_int(f: &ExtensionField, a: u32, k: u64) -> u32 {
    f.mul(a, f.from_base(k % f.p()))
}

/// Shortest LFSR generating `s_1, s_2, ...`; returns the connection
/// polynomial `1 + c_1 x + ... + c_L x^L` trimmed to degree `L`.
fn berlekamp_massey(f: &ExtensionField, synd: &[u32]) -> Vec<u32> {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last = 1u32;
    for n in 0..synd.len() {
        let mut delta = synd[n];
        for i in 1..=l.min(c.len() - 1) {
            delta = f.add(delta, f.mul(c[i], synd[n - i]));
        }
        if delta == 0 {
            shift += 1;
            continue;
        }
        let coef = f.div(delta, last).expect("last discrepancy is nonzero");
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] = f.sub(next[i + shift], f.mul(coef, bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = c;
            last = delta;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    c.resize(l + 1, 0);
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_msg(rng: &mut ChaCha8Rng, k: usize, p: u64) -> Vec<u64> {
        (0..k).map(|_| rng.gen_range(0..p)).collect()
    }

    #[test]
    fn binary_bch_15_7_5() {
        let code = BchCode::new(2, 4, 5).unwrap();
        // x^8 + x^7 + x^6 + x^4 + 1 for the modulus x^4 + x + 1
        assert_eq!(code.generator().coeffs(), &[1, 0, 0, 0, 1, 0, 1, 1, 1]);
        assert_eq!(code.dimension(15), 7);
    }

    #[test]
    fn zero_message_and_linearity() {
        let code = BchCode::new(11, 2, 7).unwrap();
        let k = 20;
        assert!(code.encode_systematic(&vec![0; k]).unwrap().iter().all(|&c| c == 0));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_msg(&mut rng, k, 11);
        let b = random_msg(&mut rng, k, 11);
        let ca = code.encode_systematic(&a).unwrap();
        let cb = code.encode_systematic(&b).unwrap();
        let sum: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 11).collect();
        assert!(code.is_codeword(&sum));
        assert_eq!(&ca[..k], a.as_slice());
    }

    #[test]
    fn syndromes_vanish_by_direct_evaluation() {
        let code = BchCode::new(11, 1, 7).unwrap();
        let f = PrimeField::new(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let msg = random_msg(&mut rng, 4, 11);
            let cw = code.encode_systematic(&msg).unwrap();
            let alpha = code.ext.primitive() as u64;
            for j in 1..7u64 {
                let x = f.pow(alpha, j);
                let v = cw.iter().fold(0u64, |acc, &c| f.add(f.mul(acc, x), c));
                assert_eq!(v, 0);
            }
        }
    }

    fn inject_and_decode(code: &BchCode, len: usize, trials: usize, seed: u64) {
        let p = code.p();
        let k = code.dimension(len);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for e in 0..=code.correction_radius() {
            for _ in 0..trials {
                let cw = code.encode_systematic(&random_msg(&mut rng, k, p)).unwrap();
                let mut word = cw.clone();
                let mut pos: Vec<usize> = (0..len).collect();
                for i in 0..e {
                    let j = rng.gen_range(i..len);
                    pos.swap(i, j);
                    word[pos[i]] = (word[pos[i]] + rng.gen_range(1..p)) % p;
                }
                assert_eq!(code.decode(&word).unwrap(), cw, "e={e}");
            }
        }
    }

    #[test]
    fn decode_recovers_up_to_radius_gf11() {
        let code = BchCode::new(11, 2, 7).unwrap();
        inject_and_decode(&code, 120, 500, 3);
    }

    #[test]
    fn decode_shortened_instances() {
        inject_and_decode(&BchCode::new(11, 2, 9).unwrap(), 40, 100, 4);
        inject_and_decode(&BchCode::new(2, 5, 7).unwrap(), 20, 100, 5);
        inject_and_decode(&BchCode::new(13, 1, 9).unwrap(), 12, 100, 6);
        inject_and_decode(&BchCode::new(3, 3, 5).unwrap(), 15, 100, 7);
    }

    #[test]
    fn beyond_radius_never_panics() {
        let code = BchCode::new(11, 1, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2000 {
            let word = random_msg(&mut rng, 10, 11);
            if let Ok(c) = code.decode(&word) {
                assert!(code.is_codeword(&c));
            }
        }
    }

    fn min_weight(code: &BchCode, len: usize) -> usize {
        let p = code.p();
        let k = code.dimension(len);
        let total = p.pow(k as u32);
        let mut best = usize::MAX;
        for idx in 1..total {
            let mut v = idx;
            let msg: Vec<u64> = (0..k)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect();
            let cw = code.encode_systematic(&msg).unwrap();
            best = best.min(cw.iter().filter(|&&c| c != 0).count());
        }
        best
    }

    #[test]
    fn minimum_distance_meets_design() {
        for (p, m, d, len) in [
            (2, 4, 5, 15),
            (2, 5, 7, 31),
            (2, 4, 7, 15),
            (3, 2, 5, 8),
            (3, 2, 3, 8),
            (11, 1, 7, 10),
            (13, 1, 9, 12),
            (2, 3, 3, 5),
        ] {
            let code = BchCode::new(p, m, d).unwrap();
            if code.dimension(len) == 0 {
                continue;
            }
            assert!(min_weight(&code, len) >= d, "p={p} m={m} d={d}");
        }
    }

    #[test]
    fn parity_formula_examples() {
        assert_eq!(parity_length_formula(11, 2, 9), 16);
        assert_eq!(parity_length_formula(7, 1, 3), 2);
    }

    #[test]
    fn generator_degree_never_exceeds_formula() {
        for p in [2u64, 3, 11, 13] {
            for m in 1..=3u32 {
                if (p as u128).pow(m) > 3000 {
                    continue;
                }
                for d in 1..=9usize {
                    let Ok(code) = BchCode::new(p, m, d) else { continue };
                    assert!(code.parity_len() <= parity_length_formula(p, m, d));
                }
            }
        }
        // the regime boundary: for p=3, m=2, d=5 the coset of 1 contains 3
        assert_eq!(BchCode::new(3, 2, 5).unwrap().parity_len(), 5);
    }
}
