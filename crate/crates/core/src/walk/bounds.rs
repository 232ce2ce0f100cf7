//! Closed-form bounds on `rho_V` and the integer-shift construction.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::dyadic::Dyadic;

/// `C(n, k)` by the multiplicative formula; each partial quotient is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// The abelian optimum `C(n, floor(n/2)) / 2^n`.
pub fn loe_binomial_bound(n: u32) -> Dyadic {
    Dyadic::new(binomial(n as u64, (n / 2) as u64), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TheoremBound {
    pub value: f64,
    /// The bound is at least 1 and says nothing about a probability.
    pub vacuous: bool,
}

/// `141 * max(1/s, 1/sqrt(n))`; pass the count `N` of high-order elements in
/// place of `n` for the partial-order version.
pub fn theorem_bound(s: u64, n: u64) -> TheoremBound {
    let value = 141.0 * (1.0 / s as f64).max(1.0 / (n as f64).sqrt());
    TheoremBound { value, vacuous: value >= 1.0 }
}

/// `2/p + 120/s + 19/sqrt(n)`.
pub fn main3_bound(p: u64, s: u64, n: u64) -> f64 {
    2.0 / p as f64 + 120.0 / s as f64 + 19.0 / (n as f64).sqrt()
}

/// Exact law of `sum_i ±a_i` and the check `rho >= 1 / (4 K sqrt(n))`.
#[derive(Clone, Debug, Serialize)]
pub struct Example2Report {
    pub n: usize,
    /// `K = max |a_i|`.
    pub height: u64,
    pub rho: Dyadic,
    pub rho_f64: f64,
    /// Sums attaining `rho`, ascending.
    pub maximizers: Vec<i64>,
    pub lower_bound: f64,
    pub pass: bool,
}

/// Exact point probabilities of the signed sum, as `(offset, counts)` with
/// `counts[j]` the number of sign vectors giving `j - offset`.
pub fn signed_sum_counts(shifts: &[i64]) -> (i64, Vec<BigUint>) {
    let span: i64 = shifts.iter().map(|a| a.abs()).sum();
    let width = (2 * span + 1) as usize;
    let mut cur = vec![BigUint::zero(); width];
    cur[span as usize] = BigUint::one();
    let mut reach = 0i64;
    for &a in shifts {
        let a = a.abs();
        let mut next = vec![BigUint::zero(); width];
        let lo = (span - reach) as usize;
        let hi = (span + reach) as usize;
        for j in lo..=hi {
            if cur[j].is_zero() {
                continue;
            }
            next[j + a as usize] += &cur[j];
            next[j - a as usize] += &cur[j];
        }
        reach += a;
        cur = next;
    }
    (span, cur)
}

/// Requires every `a_i` non-zero; returns `None` otherwise.
pub fn example2_check(shifts: &[i64]) -> Option<Example2Report> {
    if shifts.is_empty() || shifts.contains(&0) {
        return None;
    }
    let n = shifts.len();
    let height = shifts.iter().map(|a| a.unsigned_abs()).max().unwrap();
    let (offset, counts) = signed_sum_counts(shifts);
    let max = counts.iter().max().unwrap().clone();
    let maximizers = (0..counts.len())
        .filter(|&j| counts[j] == max)
        .map(|j| j as i64 - offset)
        .collect();
    // count / 2^n >= 1 / (4 K sqrt n)  <=>  (4 K count)^2 n >= 4^n
    let lhs = {
        let t = &max * BigUint::from(4 * height);
        &t * &t * BigUint::from(n)
    };
    let pass = lhs >= BigUint::one() << (2 * n);
    let rho = Dyadic::new(max, n as u32);
    Some(Example2Report {
        n,
        height,
        rho_f64: rho.to_f64(),
        rho,
        maximizers,
        lower_bound: 1.0 / (4.0 * height as f64 * (n as f64).sqrt()),
        pass,
    })
}
