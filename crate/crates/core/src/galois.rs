//! Arithmetic over GF(p) and GF(p^m), polynomials over GF(p), root scanning
//! and rational reconstruction.

use std::fmt;

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= b`.
pub fn smallest_prime_at_least(b: u64) -> u64 {
    let mut c = b.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Smallest prime `> b`.
pub fn smallest_prime_above(b: u64) -> u64 {
    smallest_prime_at_least(b + 1)
}

/// The prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameters(format!("prime {p} too large")));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        let mut result = 1 % self.p;
        let mut base = a % self.p;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// Polynomial over GF(p), coefficients low-order first, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<u64>,
    p: u64,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?} mod {}", self.coeffs, self.p)
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<u64>, field: PrimeField) -> Self {
        let p = field.p();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs, p }
    }

    pub fn from_signed(coeffs: &[i64], field: PrimeField) -> Self {
        Self::new(coeffs.iter().map(|&c| field.reduce(c)).collect(), field)
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(vec![], field)
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(vec![1], field)
    }

    /// `x^k`.
    pub fn monomial(k: usize, field: PrimeField) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Self::new(c, field)
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[u64], field: PrimeField) -> Self {
        roots.iter().fold(Self::one(field), |acc, &r| {
            acc.mul(&Self::new(vec![field.neg(r), 1], field))
        })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field();
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect(),
            f,
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field();
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect(),
            f,
        )
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field();
        Self::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), f)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out, f)
    }

    /// Reduction modulo `x^k`.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().take(k).copied().collect(), self.field())
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = self.field();
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], lead_inv);
            quot[k] = c;
            if c != 0 {
                for (j, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot, f), Self::new(rem, f)))
    }

    pub fn derivative(&self) -> Self {
        let f = self.field();
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, i as u64))
                .collect(),
            f,
        )
    }

    /// Coefficients reversed with respect to degree `d`: `x^d f(1/x)`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut c: Vec<u64> = (0..=d).map(|i| self.coeff(i)).collect();
        c.reverse();
        Self::new(c, self.field())
    }
}

/// Roots of `f` among `domain`, each repeated by its multiplicity.
pub fn find_roots_with_multiplicity(f: &Polynomial, domain: &[u64]) -> Vec<u64> {
    let field = f.field();
    let mut roots = Vec::new();
    if f.degree().map_or(true, |d| d == 0) {
        return roots;
    }
    for &r in domain {
        let mut g = f.clone();
        let lin = Polynomial::new(vec![field.neg(r), 1], field);
        while g.degree().map_or(false, |d| d > 0) && g.eval(r) == 0 {
            roots.push(r);
            g = g.div_rem(&lin).expect("nonzero divisor").0;
        }
    }
    roots
}

/// Splits `series mod x^{s+1}` into `num / den` with `deg num <= deg_num`,
/// `deg den <= deg_den` and both constant terms equal to 1.
///
/// Requires `deg_num + deg_den <= s`. Uses the extended Euclidean algorithm
/// on `(x^{s+1}, series)`, stopping at the first remainder of degree at
/// most `deg_num`.
pub fn pade_split(
    series: &Polynomial,
    s: usize,
    deg_num: usize,
    deg_den: usize,
) -> Result<(Polynomial, Polynomial)> {
    let f = series.field();
    if deg_num + deg_den > s {
        return Err(Error::InvalidParameters(format!(
            "degree bounds {deg_num}+{deg_den} exceed {s}"
        )));
    }
    let series = series.truncate(s + 1);
    if series.coeff(0) != 1 {
        return Err(Error::InvalidParameters(
            "series must have constant term 1".into(),
        ));
    }
    let mut r_prev = Polynomial::monomial(s + 1, f);
    let mut r_cur = series.clone();
    let mut t_prev = Polynomial::zero(f);
    let mut t_cur = Polynomial::one(f);
    while r_cur.degree().map_or(false, |d| d > deg_num) {
        let (q, r_next) = r_prev.div_rem(&r_cur)?;
        let t_next = t_prev.sub(&q.mul(&t_cur));
        r_prev = std::mem::replace(&mut r_cur, r_next);
        t_prev = std::mem::replace(&mut t_cur, t_next);
    }
    let c0 = t_cur.coeff(0);
    if c0 == 0 {
        return Err(Error::NoSolution("denominator vanishes at 0".into()));
    }
    if t_cur.degree().unwrap_or(0) > deg_den {
        return Err(Error::NoSolution(format!(
            "denominator degree exceeds {deg_den}"
        )));
    }
    let inv = f.inv(c0)?;
    let num = r_cur.scale(inv);
    let den = t_cur.scale(inv);
    debug_assert_eq!(num, series.mul(&den).truncate(s + 1));
    Ok((num, den))
}

/// GF(p^m) with elements encoded as integers `sum c_i p^i` of their
/// polynomial coefficients, so `0..p` are the prime-field constants.
#[derive(Clone, Debug)]
pub struct ExtensionField {
    p: u64,
    m: u32,
    q: u32,
    modulus: Vec<u64>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl ExtensionField {
    /// Builds GF(p^m) on the smallest monic irreducible modulus of degree
    /// `m` (by integer encoding) with the smallest primitive element.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if m == 0 {
            return Err(Error::InvalidParameters("extension degree 0".into()));
        }
        let q = (p as u128).pow(m);
        if q > 1 << 24 {
            return Err(Error::InvalidParameters(format!("field size {q} too large")));
        }
        let modulus = smallest_irreducible(base, m as usize);
        Self::with_modulus(p, m, modulus)
    }

    /// Builds GF(p^m) on an explicit monic modulus (low-order first).
    pub fn with_modulus(p: u64, m: u32, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let poly = Polynomial::new(modulus.clone(), base);
        if poly.degree() != Some(m as usize) || poly.coeff(m as usize) != 1 {
            return Err(Error::InvalidParameters("modulus must be monic of degree m".into()));
        }
        if !is_irreducible(&poly) {
            return Err(Error::NotIrreducible);
        }
        let q = p.pow(m) as u32;
        let mut field = Self {
            p,
            m,
            q,
            modulus: poly.coeffs().to_vec(),
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let order = q - 1;
        let primitive = (1..q)
            .find(|&g| field.slow_order(g) == order)
            .expect("a finite field has a primitive element");
        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..order {
            exp.push(cur);
            log[cur as usize] = i;
            cur = field.slow_mul(cur, primitive);
        }
        for i in 0..order as usize {
            exp.push(exp[i]);
        }
        field.primitive = primitive;
        field.exp = exp;
        field.log = log;
        Ok(field)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of elements `p^m`.
    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    fn digits(&self, a: u32) -> Vec<u64> {
        let mut a = a as u64;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn from_digits(&self, d: &[u64]) -> u32 {
        d.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let f = PrimeField { p: self.p };
        let pa = Polynomial::new(self.digits(a), f);
        let pb = Polynomial::new(self.digits(b), f);
        let modp = Polynomial::new(self.modulus.clone(), f);
        let (_, r) = pa.mul(&pb).div_rem(&modp).expect("monic modulus");
        let mut d: Vec<u64> = r.coeffs().to_vec();
        d.resize(self.m as usize, 0);
        self.from_digits(&d)
    }

    fn slow_order(&self, g: u32) -> u32 {
        let mut cur = g;
        let mut k = 1;
        while cur != 1 {
            cur = self.slow_mul(cur, g);
            k += 1;
            if k > self.q {
                return 0;
            }
        }
        k
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a as u64, 0u64, 1u64);
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// `alpha^i` for the primitive element, any integer exponent.
    pub fn alpha_pow(&self, i: i64) -> u32 {
        let order = (self.q - 1) as i64;
        self.exp[i.rem_euclid(order) as usize]
    }

    /// Discrete logarithm base the primitive element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Prime-field constant as an extension element.
    pub fn from_base(&self, c: u64) -> u32 {
        (c % self.p) as u32
    }

    /// The prime-field value of `a`, if it lies in the prime subfield.
    pub fn to_base(&self, a: u32) -> Option<u64> {
        ((a as u64) < self.p).then_some(a as u64)
    }
}

fn is_irreducible(f: &Polynomial) -> bool {
    let field = f.field();
    let p = field.p();
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    for deg in 1..=d / 2 {
        let count = p.pow(deg as u32);
        for low in 0..count {
            let mut c = Vec::with_capacity(deg + 1);
            let mut v = low;
            for _ in 0..deg {
                c.push(v % p);
                v /= p;
            }
            c.push(1);
            let g = Polynomial::new(c, field);
            if f.div_rem(&g).expect("monic").1.is_zero() {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(field: PrimeField, m: usize) -> Vec<u64> {
    let p = field.p();
    let count = p.pow(m as u32);
    for low in 0..count {
        let mut c = Vec::with_capacity(m + 1);
        let mut v = low;
        for _ in 0..m {
            c.push(v % p);
            v /= p;
        }
        c.push(1);
        let f = Polynomial::new(c.clone(), field);
        if is_irreducible(&f) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
