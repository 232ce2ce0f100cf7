//! Exact law of the signed product `A_1^{±1} .. A_n^{±1}` by convolution.
//!
//! Step `i` pushes the count at `g` to both `g A_i` and `g A_i^{-1}`. It is
//! evaluated in gather form, `D_i(h) = D_{i-1}(h A_i^{-1}) + D_{i-1}(h A_i)`,
//! so every output cell is written by one task and the parallel result is
//! identical to the sequential one. Counts are kept in `u128` while `n < 128`
//! and in arbitrary precision beyond.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::json;

use super::dyadic::Dyadic;
use super::sequence::SignedSequence;
use crate::error::{Error, Result};
use crate::group::io::element_to_json;
use crate::group::FiniteGroup;

/// Counts of `prod_i Â_i = g` for every element index `g`, over `2^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    counts: Vec<BigUint>,
    denom_exp: u32,
}

/// `rho_V` with every element attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoExact {
    pub rho: Dyadic,
    /// Ascending element indices.
    pub maximizers: Vec<usize>,
}

impl ExactDistribution {
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    pub fn probability(&self, element: usize) -> Dyadic {
        Dyadic::new(self.counts[element].clone(), self.denom_exp)
    }

    pub fn probabilities_f64(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|g| self.probability(g).to_f64()).collect()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&g| !self.counts[g].is_zero()).collect()
    }

    pub fn rho(&self) -> RhoExact {
        let max = self.counts.iter().max().cloned().unwrap_or_default();
        let maximizers = (0..self.counts.len()).filter(|&g| self.counts[g] == max).collect();
        RhoExact { rho: Dyadic::new(max, self.denom_exp), maximizers }
    }

    /// `{"denom_exp": n, "entries": [{"element": .., "count": "<decimal>"}, ..]}`
    /// over the support, in element-index order.
    pub fn to_json(&self, group: &FiniteGroup) -> serde_json::Value {
        let entries: Vec<_> = self
            .support()
            .into_iter()
            .map(|g| {
                json!({
                    "index": g,
                    "element": element_to_json(&group.element(g)),
                    "count": self.counts[g].to_str_radix(10),
                })
            })
            .collect();
        json!({ "denom_exp": self.denom_exp, "entries": entries })
    }
}

trait Count: Clone + Send + Sync {
    fn empty() -> Self;
    fn unit() -> Self;
    fn sum(a: &Self, b: &Self) -> Self;
    fn into_big(self) -> BigUint;
}

impl Count for u128 {
    fn empty() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    #[inline]
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Count for BigUint {
    fn empty() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn sum(a: &Self, b: &Self) -> Self {
        a + b
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Caches right translations `h -> h g` for the most recently used elements.
struct Translations<'a> {
    group: &'a FiniteGroup,
    cache: HashMap<usize, Vec<u32>>,
    budget: usize,
}

impl<'a> Translations<'a> {
    fn new(group: &'a FiniteGroup) -> Self {
        // keep roughly 256 MiB of translation tables
        let budget = ((64usize << 20) / group.order().max(1)).max(2);
        Translations { group, cache: HashMap::new(), budget }
    }

    fn get(&mut self, a: usize) -> &[u32] {
        if !self.cache.contains_key(&a) && self.cache.len() >= self.budget {
            self.cache.clear();
        }
        let group = self.group;
        self.cache.entry(a).or_insert_with(|| group.right_translation(a))
    }
}

fn convolve<C: Count>(group: &FiniteGroup, indices: &[usize], mut observe: impl FnMut(usize, &[C])) -> Vec<C> {
    let n = group.order();
    let mut cur = vec![C::empty(); n];
    cur[group.identity()] = C::unit();
    let mut next = vec![C::empty(); n];
    let mut translations = Translations::new(group);
    for (step, &a) in indices.iter().enumerate() {
        let a_inv = group.inverse(a);
        let fwd = translations.get(a).to_vec();
        if a_inv == a {
            next.par_iter_mut().enumerate().for_each(|(h, slot)| {
                let c = &cur[fwd[h] as usize];
                *slot = C::sum(c, c);
            });
        } else {
            let back = translations.get(a_inv);
            next.par_iter_mut().enumerate().for_each(|(h, slot)| {
                *slot = C::sum(&cur[back[h] as usize], &cur[fwd[h] as usize]);
            });
        }
        std::mem::swap(&mut cur, &mut next);
        observe(step + 1, &cur);
    }
    cur
}

fn to_big<C: Count>(counts: &[C]) -> Vec<BigUint> {
    counts.iter().cloned().map(C::into_big).collect()
}

/// The exact law of the signed product over the elements of `group`.
pub fn exact_distribution(group: &FiniteGroup, seq: &SignedSequence) -> Result<ExactDistribution> {
    let indices = seq.indices_in(group).map_err(|_| Error::NotInGroup)?;
    let denom_exp = indices.len() as u32;
    let counts = if indices.len() < 128 {
        to_big(&convolve::<u128>(group, &indices, |_, _| {}))
    } else {
        convolve::<BigUint>(group, &indices, |_, _| {})
    };
    Ok(ExactDistribution { counts, denom_exp })
}

pub fn rho_exact(group: &FiniteGroup, seq: &SignedSequence) -> Result<RhoExact> {
    Ok(exact_distribution(group, seq)?.rho())
}

/// `rho` of every prefix `(A_1, .., A_k)`, `k = 1..=n`, from one pass.
pub fn rho_prefixes(group: &FiniteGroup, seq: &SignedSequence) -> Result<Vec<Dyadic>> {
    let indices = seq.indices_in(group).map_err(|_| Error::NotInGroup)?;
    let mut out = Vec::with_capacity(indices.len());
    if indices.len() < 128 {
        convolve::<u128>(group, &indices, |k, c| {
            out.push(Dyadic::new(BigUint::from(*c.iter().max().unwrap()), k as u32));
        });
    } else {
        convolve::<BigUint>(group, &indices, |k, c| {
            out.push(Dyadic::new(c.iter().max().unwrap().clone(), k as u32));
        });
    }
    Ok(out)
}

/// The same law keyed by canonical words, without enumerating the group.
///
/// Only the support is stored; fails with `CapExceeded` once it grows past
/// `support_cap`.
pub fn exact_distribution_sparse(seq: &SignedSequence, support_cap: usize) -> Result<BTreeMap<Vec<u32>, BigUint>> {
    let ambient = seq.ambient().clone();
    let mut cur: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
    cur.insert(ambient.identity_words(), BigUint::one());
    let mut buf = vec![0u32; ambient.word_len()];
    for g in seq.elements() {
        let steps = [g.words().to_vec(), g.inverse().words().to_vec()];
        let mut next: BTreeMap<Vec<u32>, BigUint> = BTreeMap::new();
        for (h, c) in &cur {
            for s in &steps {
                ambient.mul_into(h, s, &mut buf);
                *next.entry(buf.clone()).or_default() += c;
            }
        }
        if next.len() > support_cap {
            return Err(Error::CapExceeded { cap: support_cap });
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, GroupElement};

    /// Direct enumeration of all 2^n sign vectors.
    fn brute_force(group: &FiniteGroup, indices: &[usize]) -> Vec<BigUint> {
        let mut counts = vec![BigUint::zero(); group.order()];
        for mask in 0u32..(1 << indices.len()) {
            let mut prod = group.identity();
            for (i, &a) in indices.iter().enumerate() {
                let step = if mask >> i & 1 == 1 { group.inverse(a) } else { a };
                prod = group.mul(prod, step);
            }
            counts[prod] += 1u32;
        }
        counts
    }

    fn unipotent_power(p: u32, k: i64) -> GroupElement {
        GroupElement::matrix(p, &[vec![1, k], vec![0, 1]]).unwrap()
    }

    #[test]
    fn single_step_of_high_order_element() {
        let g = catalog::cyclic(7).unwrap();
        let seq = SignedSequence::from_indices(&g, &[1]).unwrap();
        let d = exact_distribution(&g, &seq).unwrap();
        assert_eq!(d.denom_exp(), 1);
        let a = 1;
        assert_eq!(d.counts()[a], BigUint::from(1u32));
        assert_eq!(d.counts()[g.inverse(a)], BigUint::from(1u32));
        assert_eq!(d.support().len(), 2);
    }

    #[test]
    fn involution_gives_point_mass() {
        let g = catalog::symmetric(3).unwrap();
        let t = g.index_of(&GroupElement::from_cycles(3, &[&[0, 1]]).unwrap()).unwrap();
        let seq = SignedSequence::from_indices(&g, &[t, t, t]).unwrap();
        let r = rho_exact(&g, &seq).unwrap();
        assert_eq!(r.rho, Dyadic::new(BigUint::from(8u32), 3));
        assert_eq!(r.maximizers, vec![t]);
    }

    #[test]
    fn four_steps_of_one_element() {
        // enumerating the 16 sign vectors of A^{±1} four times, ord(A) = 11
        let a = unipotent_power(11, 1);
        let g = FiniteGroup::close_generators(&[a.clone()], 100).unwrap();
        let seq = SignedSequence::repeated(a, 4).unwrap();
        let d = exact_distribution(&g, &seq).unwrap();
        let idx = |k: i64| g.index_of(&unipotent_power(11, k)).unwrap();
        let expect = [(0, 6u32), (2, 4), (-2, 4), (4, 1), (-4, 1)];
        for (k, c) in expect {
            assert_eq!(d.counts()[idx(k)], BigUint::from(c), "A^{k}");
        }
        assert_eq!(d.support().len(), 5);
    }

    #[test]
    fn order_three_pair() {
        let g = catalog::cyclic(3).unwrap();
        let seq = SignedSequence::from_indices(&g, &[1, 1]).unwrap();
        let r = rho_exact(&g, &seq).unwrap();
        assert_eq!(r.rho.to_f64(), 0.5);
        assert_eq!(r.maximizers, vec![0]);
    }

    #[test]
    fn matches_enumeration_on_sl2_3() {
        let g = catalog::sl2(3).unwrap();
        let indices = [5usize, 7, 7, 13, 2, 22, 9, 1, 17, 4];
        let seq = SignedSequence::from_indices(&g, &indices).unwrap();
        let d = exact_distribution(&g, &seq).unwrap();
        assert_eq!(d.counts(), brute_force(&g, &indices).as_slice());
        assert_eq!(d.total(), BigUint::one() << 10u32);
    }

    #[test]
    fn big_integer_path_conserves_mass() {
        let a = unipotent_power(13, 1);
        let g = FiniteGroup::close_generators(&[a.clone()], 100).unwrap();
        let seq = SignedSequence::repeated(a, 300).unwrap();
        let d = exact_distribution(&g, &seq).unwrap();
        assert_eq!(d.total(), BigUint::one() << 300u32);
        let prefixes = rho_prefixes(&g, &seq).unwrap();
        assert_eq!(prefixes.len(), 300);
        assert_eq!(prefixes[299], d.rho().rho);
    }

    #[test]
    fn sparse_and_dense_agree() {
        let g = catalog::sl2(5).unwrap();
        let indices = [3usize, 17, 44, 44, 101, 8];
        let seq = SignedSequence::from_indices(&g, &indices).unwrap();
        let dense = exact_distribution(&g, &seq).unwrap();
        let sparse = exact_distribution_sparse(&seq, 1000).unwrap();
        for (words, c) in &sparse {
            assert_eq!(&dense.counts()[g.index_of_words(words).unwrap()], c);
        }
        assert_eq!(sparse.len(), dense.support().len());
        assert!(matches!(exact_distribution_sparse(&seq, 3), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn element_outside_group_is_rejected() {
        let g = catalog::cyclic(5).unwrap();
        let seq = SignedSequence::new(vec![GroupElement::from_cycles(5, &[&[0, 1]]).unwrap()]).unwrap();
        assert!(matches!(exact_distribution(&g, &seq), Err(Error::NotInGroup)));
    }
}
