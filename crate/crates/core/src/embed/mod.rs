//! Order-preserving reduction of rational matrices to `GL_m(p)`.
//!
//! For each input `A_i` let `d_i` be its order when finite and `n` otherwise.
//! The identity defect `G(i, j)` of `A_i^j` (sum of squared entries of
//! `A_i^j - I`) is a positive rational for `1 <= j < d_i`; a prime that
//! divides no entry denominator, no determinant, and no numerator of any
//! `G(i, j)` (cleared by the squared denominator lcm) keeps every such power
//! away from the identity mod `p`. Hence finite orders are preserved exactly
//! and infinite orders map to orders at least `n`.

pub mod primes;
pub mod rational;

pub use rational::{format_rational, parse_rational, RationalMatrix};

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Matrix multiplications allowed per input while deciding finiteness.
pub const DEFAULT_POWER_CAP: u64 = 1_000_000;
/// Largest prime considered by [`embed_mod_p`].
pub const PRIME_SEARCH_BOUND: u64 = 1_000_000_000;
/// Largest supported matrix size.
pub const MAX_SIZE: usize = 64;

/// Default lower bound on the chosen prime for `m x m` inputs.
pub fn default_p_min(m: usize) -> u64 {
    (m as u64 + 1).max(5)
}

/// Largest finite order of an element of `GL_m(Q)`: the maximum of `k` with
/// `sum_{p^a || k} phi(p^a) <= m`, where a factor `2^1` costs nothing.
pub fn max_finite_order(m: usize) -> BigUint {
    let primes: Vec<u64> = (2..=m as u64 + 1).filter(|&p| primes::is_prime_u64(p)).collect();
    // best[c]: largest product of prime powers with total cost <= c
    let knapsack = |with_two: bool| {
        let mut best = vec![BigUint::one(); m + 1];
        for &p in primes.iter().filter(|&&p| with_two || p != 2) {
            let mut next = best.clone();
            // 2^1 is handled by the free factor below
            let mut pa = if p == 2 { 4 } else { p };
            loop {
                let cost = (pa / p * (p - 1)) as usize;
                if cost > m {
                    break;
                }
                for c in cost..=m {
                    let cand = &best[c - cost] * BigUint::from(pa);
                    if cand > next[c] {
                        next[c] = cand;
                    }
                }
                pa *= p;
            }
            best = next;
        }
        best.pop().unwrap()
    };
    knapsack(true).max(knapsack(false) * 2u32)
}

/// Order of `a` over `Q`: `Some(k)` when finite, `None` when infinite.
/// `Err(())` when `max_finite_order(m)` exceeds `cap`, so the answer is
/// unknown without more work.
fn rational_order(a: &RationalMatrix, cap: u64) -> std::result::Result<Option<u64>, ()> {
    let bound = max_finite_order(a.size());
    let bound = match bound.to_u64() {
        Some(b) if b <= cap => b,
        _ => return Err(()),
    };
    let mut x = a.clone();
    for k in 1..=bound {
        if x.is_identity() {
            return Ok(Some(k));
        }
        x = x.mul(a);
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    Denominator { matrix: usize },
    Determinant { matrix: usize },
    /// `G(i, j)` vanishes mod `p`, so `A_i^j` might reduce to the identity.
    PowerDefect { matrix: usize, power: u64 },
}

/// The integers whose prime divisors must be avoided, with their reasons.
#[derive(Clone, Debug)]
struct Obstructions {
    orders: Vec<Option<u64>>,
    inconclusive: Vec<bool>,
    items: Vec<(BigUint, Reason)>,
}

fn obstructions(matrices: &[RationalMatrix], n: u64, power_cap: u64) -> Result<Obstructions> {
    let m = matrices.first().ok_or_else(|| Error::InvalidArgument("no matrices given".into()))?.size();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n = {n} must be at least 2")));
    }
    if m > MAX_SIZE {
        return Err(Error::SizeCap { order: m, cap: MAX_SIZE });
    }
    for (i, a) in matrices.iter().enumerate() {
        if a.size() != m {
            return Err(Error::DimensionMismatch(format!("matrix {i} has size {}, expected {m}", a.size())));
        }
        if a.is_identity() {
            return Err(Error::NotNonTrivial { index: i });
        }
        if a.determinant().is_zero() {
            return Err(Error::NotInvertible { index: i });
        }
    }
    let per_matrix: Vec<(Option<u64>, bool, Vec<(BigUint, Reason)>)> = matrices
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let (mut order, inconclusive) = match rational_order(a, power_cap) {
                Ok(o) => (o, false),
                Err(()) => (None, true),
            };
            let mut items = Vec::new();
            for q in a.entries() {
                if !q.denom().is_one() {
                    items.push((q.denom().magnitude().clone(), Reason::Denominator { matrix: i }));
                }
            }
            let det = a.determinant();
            items.push((det.numer().magnitude().clone(), Reason::Determinant { matrix: i }));
            if !det.denom().is_one() {
                items.push((det.denom().magnitude().clone(), Reason::Determinant { matrix: i }));
            }
            // d_i = ord(A_i) when finite, n otherwise
            let d = order.unwrap_or(n);
            let mut x = a.clone();
            for j in 1..d {
                let l = x.denominator_lcm();
                let g = x.identity_defect() * BigInt::from(&l * &l);
                if g.is_zero() {
                    // finite order below n, missed because of the power cap
                    order = Some(j);
                    break;
                }
                items.push((g.numer().magnitude().clone(), Reason::PowerDefect { matrix: i, power: j }));
                x = x.mul(a);
            }
            (order, inconclusive, items)
        })
        .collect();
    let mut out = Obstructions { orders: Vec::new(), inconclusive: Vec::new(), items: Vec::new() };
    for (order, inconclusive, items) in per_matrix {
        out.orders.push(order);
        out.inconclusive.push(inconclusive);
        out.items.extend(items);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BadPrimeSet {
    /// Prime (decimal string) and the reasons it is excluded, ascending.
    pub primes: Vec<(String, Vec<Reason>)>,
    /// Composite cofactors that could not be split; their prime divisors are
    /// bad too but unknown.
    pub unfactored: Vec<String>,
    /// Finite orders over `Q` (`None` for infinite).
    pub orders: Vec<Option<u64>>,
    /// Inputs whose finiteness could not be decided within the power cap;
    /// they are treated as infinite.
    pub power_cap_exceeded: Vec<usize>,
}

impl BadPrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        let s = p.to_string();
        self.primes.iter().any(|(q, _)| *q == s)
    }

    pub fn prime_values(&self) -> Vec<BigUint> {
        self.primes.iter().map(|(q, _)| q.parse().unwrap()).collect()
    }
}

pub fn bad_prime_set(matrices: &[RationalMatrix], n: u64) -> Result<BadPrimeSet> {
    bad_prime_set_with_cap(matrices, n, DEFAULT_POWER_CAP)
}

pub fn bad_prime_set_with_cap(matrices: &[RationalMatrix], n: u64, power_cap: u64) -> Result<BadPrimeSet> {
    let obs = obstructions(matrices, n, power_cap)?;
    let mut primes: BTreeMap<BigUint, Vec<Reason>> = BTreeMap::new();
    let mut unfactored = Vec::new();
    for (value, reason) in &obs.items {
        let f = primes::factor(value);
        for p in f.primes {
            primes.entry(p).or_default().push(reason.clone());
        }
        unfactored.extend(f.unfactored.iter().map(|u| u.to_string()));
    }
    unfactored.sort();
    unfactored.dedup();
    Ok(BadPrimeSet {
        primes: primes
            .into_iter()
            .map(|(p, mut r)| {
                r.sort();
                r.dedup();
                (p.to_string(), r)
            })
            .collect(),
        unfactored,
        orders: obs.orders,
        power_cap_exceeded: obs.inconclusive.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// Finite order, preserved exactly.
    Exact,
    /// Infinite order, image order at least `n`.
    AtLeastN,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    pub index: usize,
    /// `None` for infinite order.
    pub original_order: Option<u64>,
    pub image_order: u64,
    pub clause: Clause,
    pub satisfied: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcludedPrime {
    pub prime: u64,
    pub reasons: Vec<Reason>,
}

#[derive(Clone, Debug)]
pub struct EmbeddingResult {
    pub p: u64,
    pub n: u64,
    pub images: Vec<GroupElement>,
    pub reports: Vec<EmbeddingReport>,
    /// Every prime in `[p_min, p)` with the reasons it was rejected.
    pub excluded: Vec<ExcludedPrime>,
}

impl EmbeddingResult {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "p": self.p,
            "n": self.n,
            "images": self.images.iter().map(crate::group::io::element_to_json).collect::<Vec<_>>(),
            "reports": self.reports,
            "excluded": self.excluded,
        })
    }
}

/// Smallest prime `p >= p_min` outside the bad set, with reduced images and
/// exact order verification in `GL_m(p)`.
pub fn embed_mod_p(matrices: &[RationalMatrix], n: u64, p_min: u64) -> Result<EmbeddingResult> {
    let obs = obstructions(matrices, n, DEFAULT_POWER_CAP)?;
    let mut excluded = Vec::new();
    let mut p = p_min.max(2);
    let chosen = loop {
        p = primes::next_prime(p, PRIME_SEARCH_BOUND).ok_or(Error::PrimeSearchExhausted { bound: PRIME_SEARCH_BOUND })?;
        let bp = BigUint::from(p);
        let mut reasons: Vec<Reason> =
            obs.items.iter().filter(|(v, _)| (v % &bp).is_zero()).map(|(_, r)| r.clone()).collect();
        if reasons.is_empty() {
            break p;
        }
        reasons.sort();
        reasons.dedup();
        excluded.push(ExcludedPrime { prime: p, reasons });
        p += 1;
    };
    if chosen > u32::MAX as u64 {
        return Err(Error::PrimeSearchExhausted { bound: u32::MAX as u64 });
    }

    let mut images = Vec::with_capacity(matrices.len());
    let mut reports = Vec::with_capacity(matrices.len());
    for (i, a) in matrices.iter().enumerate() {
        let rows = a.reduce_mod(chosen).ok_or_else(|| Error::Internal(format!("p = {chosen} divides a denominator")))?;
        let image = GroupElement::matrix(chosen as u32, &rows)?;
        let original = obs.orders[i];
        // |GL_m(p)| bounds every order; stop early once the clause is decided.
        let cap = original.map_or(n, |k| k + 1).max(2);
        let image_order = image.order_capped(cap.max(n)).unwrap_or(u64::MAX);
        let (clause, satisfied) = match original {
            Some(k) => (Clause::Exact, image_order == k),
            None => (Clause::AtLeastN, image_order >= n),
        };
        if !satisfied {
            return Err(Error::Internal(format!(
                "matrix {i}: image order {image_order} violates the embedding clause at p = {chosen}"
            )));
        }
        let image_order = if image_order == u64::MAX {
            image.order_capped(u64::MAX).unwrap_or(u64::MAX)
        } else {
            image_order
        };
        images.push(image);
        reports.push(EmbeddingReport { index: i, original_order: original, image_order, clause, satisfied });
    }
    Ok(EmbeddingResult { p: chosen, n, images, reports, excluded })
}

/// On-disk input: `{"n": 5, "p_min": 2, "matrices": [[["1", "1/2"], ...], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedFile {
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_min: Option<u64>,
    pub matrices: Vec<serde_json::Value>,
}

impl EmbedFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn matrices(&self) -> Result<Vec<RationalMatrix>> {
        self.matrices.iter().map(RationalMatrix::from_json).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn finite_order_bound() {
        // GL_1(Q): +-1; GL_2(Q): 6; GL_3(Q): 6; GL_4(Q): 12; GL_6(Q): 30
        let want = [(1usize, 2u64), (2, 6), (3, 6), (4, 12), (5, 12), (6, 30)];
        for (m, b) in want {
            assert_eq!(max_finite_order(m), BigUint::from(b), "m = {m}");
        }
    }

    #[test]
    fn unipotent_example() {
        let a = RationalMatrix::from_integers(&[vec![1, 1], vec![0, 1]]).unwrap();
        let bad = bad_prime_set(&[a.clone()], 5).unwrap();
        assert_eq!(bad.prime_values(), big(&[2, 3]));
        assert_eq!(bad.orders, vec![None]);
        let e = embed_mod_p(&[a], 5, 2).unwrap();
        assert_eq!(e.p, 5);
        assert_eq!(e.reports[0].image_order, 5);
        assert_eq!(e.reports[0].clause, Clause::AtLeastN);
        assert_eq!(e.excluded.iter().map(|x| x.prime).collect::<Vec<_>>(), vec![2, 3]);
    }

    #[test]
    fn minus_identity_example() {
        let a = RationalMatrix::from_integers(&[vec![-1, 0], vec![0, -1]]).unwrap();
        let bad = bad_prime_set(&[a.clone()], 10).unwrap();
        assert_eq!(bad.prime_values(), big(&[2]));
        let e = embed_mod_p(&[a], 10, 2).unwrap();
        assert_eq!((e.p, e.reports[0].image_order, e.reports[0].clause), (3, 2, Clause::Exact));
    }

    #[test]
    fn diagonal_two_example() {
        // Oracle: G(1, j) = (2^j - 1)^2, det = 2.
        let a = RationalMatrix::from_integers(&[vec![2, 0], vec![0, 1]]).unwrap();
        let bad = bad_prime_set(&[a.clone()], 6).unwrap();
        let mut oracle = std::collections::BTreeSet::from([2u64]);
        for j in 1..6u32 {
            let mut x = 2u64.pow(j) - 1;
            let mut q = 2;
            while x > 1 {
                while x % q == 0 {
                    oracle.insert(q);
                    x /= q;
                }
                q += 1;
            }
        }
        assert_eq!(bad.prime_values(), big(&oracle.into_iter().collect::<Vec<_>>()));
        let e = embed_mod_p(&[a], 6, 2).unwrap();
        assert_eq!(e.p, 11);
        assert_eq!(e.reports[0].image_order, 10);
        assert!(e.reports[0].satisfied);
    }

    #[test]
    fn rejects_bad_inputs() {
        let id = RationalMatrix::identity(2);
        assert!(matches!(bad_prime_set(&[id], 5), Err(Error::NotNonTrivial { index: 0 })));
        let sing = RationalMatrix::from_integers(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(embed_mod_p(&[sing], 5, 2), Err(Error::NotInvertible { index: 0 })));
    }

    #[test]
    fn rational_entries_and_several_inputs() {
        let a = RationalMatrix::from_json(&json!([["1/2", "0"], ["0", "2"]])).unwrap();
        let r = RationalMatrix::from_integers(&[vec![0, -1], vec![1, -1]]).unwrap(); // order 3
        let e = embed_mod_p(&[a.clone(), r.clone()], 8, default_p_min(2)).unwrap();
        assert!(e.p >= 5);
        assert_eq!(e.reports[1].original_order, Some(3));
        assert_eq!(e.reports[1].image_order, 3);
        assert!(e.reports[0].image_order >= 8);
        // same input, same prime
        assert_eq!(embed_mod_p(&[a, r], 8, default_p_min(2)).unwrap().p, e.p);
    }
}
