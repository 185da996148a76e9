//! Size and redundancy bounds, the `phi` cardinality identity and the
//! typical density of `0^i 1` blocks.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `2^n / n^{s+t} * s! * t! * 2^{s+2t}`; asymptotic, so informational.
pub fn upper_bound_size(n: usize, t: usize, s: usize) -> f64 {
    let n_f = n as f64;
    2f64.powi(n as i32) / n_f.powi((s + t) as i32)
        * factorial(s)
        * factorial(t)
        * 2f64.powi((s + 2 * t) as i32)
}

/// `(t + s) log2 n`.
pub fn lower_bound_redundancy(n: usize, t: usize, s: usize) -> f64 {
    if t + s == 0 {
        return 0.0;
    }
    (t + s) as f64 * (n as f64).log2()
}

/// `sum_{w=1}^{n+1} C(n, w-1)`, computed exactly.
pub fn phi_cardinality(n: usize) -> BigUint {
    let mut c = BigUint::from(1u8);
    let mut total = c.clone();
    for j in 0..n {
        c = c * (n - j) / (j + 1);
        total += &c;
    }
    total
}

/// `lambda_i = 2^{-(i+2)}`.
pub fn typical_block_fraction(i: usize) -> f64 {
    2f64.powi(-(i as i32 + 2))
}

/// Number of maximal `0^i 1` blocks summed over all of `Sigma_2^n`. A block
/// is a 1 preceded by exactly `i` zeros, which start the string or follow a 1.
pub fn total_block_count(n: usize, i: usize) -> u128 {
    assert!(n <= 32, "exhaustive count limited to n <= 32");
    (0u64..1 << n)
        .into_par_iter()
        .map(|v| {
            let mut run = 0usize;
            let mut count = 0u128;
            for pos in (0..n).rev() {
                if (v >> pos) & 1 == 1 {
                    count += u128::from(run == i);
                    run = 0;
                } else {
                    run += 1;
                }
            }
            count
        })
        .sum()
}

/// Average `0^i 1` block count over `Sigma_2^n`, divided by `n`.
pub fn empirical_block_fraction(n: usize, i: usize) -> f64 {
    total_block_count(n, i) as f64 / (n as f64 * 2f64.powi(n as i32))
}

/// Whether the empirical fraction is within `pct` percent of `lambda_i`,
/// decided in exact integer arithmetic.
pub fn block_fraction_within(n: usize, i: usize, pct: u128) -> bool {
    // |count / (n 2^n) - 2^{-(i+2)}| <= pct/100 * 2^{-(i+2)}
    let lhs = total_block_count(n, i) << (i + 2);
    let rhs = (n as u128) << n;
    100 * lhs.abs_diff(rhs) <= pct * rhs
}

/// `2^n / (p (n+1)^{ceil(2(t_b+2s)(1-1/p))})`.
pub fn block_code_size_lower_bound(n: usize, t_b: usize, _ell: usize, s: usize, p: u64) -> f64 {
    let e = (2 * (t_b + 2 * s) as u64 * (p - 1)).div_ceil(p);
    2f64.powi(n as i32) / (p as f64 * ((n + 1) as f64).powi(e as i32))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockParams {
    pub t_b: usize,
    pub ell: usize,
    pub p: u64,
    pub size_lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub t: usize,
    pub s: usize,
    pub upper_size: f64,
    pub lower_redundancy_bits: f64,
    pub typicality: BTreeMap<usize, f64>,
    /// The size bound holds only asymptotically.
    pub asymptotic_informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<BlockParams>,
}

pub fn bound_report(
    n: usize,
    t: usize,
    s: usize,
    block: Option<(usize, usize, u64)>,
) -> BoundReport {
    BoundReport {
        n,
        t,
        s,
        upper_size: upper_bound_size(n, t, s),
        lower_redundancy_bits: lower_bound_redundancy(n, t, s),
        typicality: (0..=3).map(|i| (i, typical_block_fraction(i))).collect(),
        asymptotic_informational: true,
        block: block.map(|(t_b, ell, p)| BlockParams {
            t_b,
            ell,
            p,
            size_lower_bound: block_code_size_lower_bound(n, t_b, ell, s, p),
        }),
    }
}
