//! Fully enumerated finite groups with index-based multiplication.

use hashbrown::HashTable;
use rayon::prelude::*;

use super::element::{Ambient, GroupElement};
use crate::error::{Error, Result};

/// Default closure cap; admits SL2(149) (3 307 800 elements).
pub const DEFAULT_CLOSURE_CAP: usize = 4_000_000;

/// A dense multiplication table is kept only up to this order.
pub const DENSE_TABLE_MAX: usize = 4096;

/// Bound on `order^2 * word length` for building the dense table.
const DENSE_TABLE_WORK: usize = 1 << 28;

#[inline]
pub(crate) fn hash_words(words: &[u32]) -> u64 {
    // multiply-rotate mixing; deterministic across runs
    let mut h = 0x243f_6a88_85a3_08d3u64 ^ words.len() as u64;
    for &w in words {
        h = (h ^ w as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29);
    }
    h ^ (h >> 32)
}

/// A finite group stored as an ordered element list with index 0 the identity.
///
/// Elements live in one flat word arena; lookup from canonical encoding goes
/// through a hash table of indices. Immutable after construction.
pub struct FiniteGroup {
    ambient: Ambient,
    stride: usize,
    arena: Vec<u32>,
    lookup: HashTable<u32>,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    /// Breadth-first closure of `generators` under right multiplication by the
    /// generators and their inverses.
    ///
    /// Elements are numbered in discovery order starting from the identity.
    /// The expansion set (generators and inverses, deduplicated) is visited in
    /// lexicographic order of canonical words, so the numbering depends only
    /// on the generating set.
    pub fn close_generators(generators: &[GroupElement], cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::CapExceeded { cap });
        }
        let first = generators
            .first()
            .ok_or_else(|| Error::InvalidGroupSpec("no generators given".into()))?;
        let ambient = first.ambient();
        if generators.iter().any(|g| g.ambient() != ambient) {
            return Err(Error::MixedVariants);
        }
        let stride = ambient.word_len();
        let identity = ambient.identity_words();

        let mut expanders: Vec<Vec<u32>> = generators
            .iter()
            .flat_map(|g| [g.words().to_vec(), g.inverse().words().to_vec()])
            .filter(|w| *w != identity)
            .collect();
        expanders.sort();
        expanders.dedup();

        let mut group = FiniteGroup {
            ambient,
            stride,
            arena: Vec::new(),
            lookup: HashTable::new(),
            table: None,
            inverses: Vec::new(),
            generators: Vec::new(),
        };
        group.push(&identity);

        let mut buf = vec![0u32; stride];
        let mut head = 0usize;
        while head < group.order() {
            for s in &expanders {
                let (arena, ambient) = (&group.arena, &group.ambient);
                ambient.mul_into(&arena[head * stride..(head + 1) * stride], s, &mut buf);
                if group.find(&buf).is_none() {
                    if group.order() >= cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    group.push(&buf);
                }
            }
            head += 1;
        }

        group.generators = generators
            .iter()
            .map(|g| group.find(g.words()).expect("generator lies in its closure"))
            .collect();
        group.inverses = (0..group.order())
            .into_par_iter()
            .map(|i| {
                let mut inv = vec![0u32; stride];
                group.ambient.inverse_into(group.words(i), &mut inv);
                group.find(&inv).expect("closed under inverses") as u32
            })
            .collect();
        if group.order() <= DENSE_TABLE_MAX && group.order().pow(2) * stride <= DENSE_TABLE_WORK {
            let n = group.order();
            let table: Vec<u32> = (0..n)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let group = &group;
                    let mut buf = vec![0u32; stride];
                    (0..n).map(move |j| {
                        group.ambient.mul_into(group.words(i), group.words(j), &mut buf);
                        group.find(&buf).expect("closed under multiplication") as u32
                    })
                })
                .collect();
            group.table = Some(table);
        }
        Ok(group)
    }

    fn push(&mut self, words: &[u32]) {
        let idx = self.order() as u32;
        self.arena.extend_from_slice(words);
        let (arena, stride) = (&self.arena, self.stride);
        self.lookup.insert_unique(hash_words(words), idx, |&i| {
            hash_words(&arena[i as usize * stride..(i as usize + 1) * stride])
        });
    }

    fn find(&self, words: &[u32]) -> Option<usize> {
        let stride = self.stride;
        self.lookup
            .find(hash_words(words), |&i| {
                &self.arena[i as usize * stride..(i as usize + 1) * stride] == words
            })
            .map(|&i| i as usize)
    }

    pub fn order(&self) -> usize {
        self.arena.len() / self.stride
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    /// Index of the identity (always 0).
    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn has_dense_table(&self) -> bool {
        self.table.is_some()
    }

    /// Canonical words of the element at `index`.
    #[inline]
    pub fn words(&self, index: usize) -> &[u32] {
        &self.arena[index * self.stride..(index + 1) * self.stride]
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement::from_words_unchecked(&self.ambient, self.words(index))
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        if g.ambient() != self.ambient {
            return None;
        }
        self.find(g.words())
    }

    pub fn index_of_words(&self, words: &[u32]) -> Option<usize> {
        if words.len() != self.stride {
            return None;
        }
        self.find(words)
    }

    pub fn require_index(&self, g: &GroupElement) -> Result<usize> {
        self.index_of(g).ok_or(Error::NotInGroup)
    }

    /// Index of `g_a * g_b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = &self.table {
            return t[a * self.order() + b] as usize;
        }
        let mut small = [0u32; 16];
        let mut large = Vec::new();
        let buf = if self.stride <= small.len() {
            &mut small[..self.stride]
        } else {
            large.resize(self.stride, 0);
            &mut large[..]
        };
        self.ambient.mul_into(self.words(a), self.words(b), buf);
        self.find(buf).expect("closed under multiplication")
    }

    #[inline]
    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, mut e: u64) -> usize {
        let mut base = a;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The permutation `h -> index(h * g_a)` of all element indices.
    pub fn right_translation(&self, a: usize) -> Vec<u32> {
        let n = self.order();
        if let Some(t) = &self.table {
            return (0..n).map(|h| t[h * n + a]).collect();
        }
        (0..n)
            .into_par_iter()
            .map_init(
                || vec![0u32; self.stride],
                |buf, h| {
                    self.ambient.mul_into(self.words(h), self.words(a), buf);
                    self.find(buf).expect("closed under multiplication") as u32
                },
            )
            .collect()
    }

    /// Smallest `k >= 1` with `g_a^k = 1`.
    pub fn order_of_index(&self, a: usize) -> u64 {
        let mut k = 1u64;
        let mut cur = a;
        while cur != self.identity() {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }

    /// Order of an element given by value.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        let a = self.require_index(g)?;
        Ok(self.order_of_index(a))
    }

    /// Elements that commute with everything, by a direct scan against the generators.
    pub fn center(&self) -> Vec<usize> {
        let gens = &self.generators;
        (0..self.order())
            .into_par_iter()
            .filter(|&z| gens.iter().all(|&x| self.mul(z, x) == self.mul(x, z)))
            .collect()
    }

    /// `|C_G(g_a)|`, counting commuting elements.
    pub fn centralizer_order(&self, a: usize) -> usize {
        (0..self.order())
            .into_par_iter()
            .filter(|&x| self.mul(a, x) == self.mul(x, a))
            .count()
    }

    /// The `(center, |C_G(g)|)` pair for an element given by value.
    pub fn center_and_centralizer(&self, g: &GroupElement) -> Result<(Vec<usize>, usize)> {
        let a = self.require_index(g)?;
        Ok((self.center(), self.centralizer_order(a)))
    }

    /// Order of the subgroup generated by the elements at `indices`.
    pub fn subgroup_order(&self, indices: &[usize], cap: usize) -> Result<usize> {
        let gens: Vec<GroupElement> = indices.iter().map(|&i| self.element(i)).collect();
        if gens.is_empty() {
            return Ok(1);
        }
        Ok(FiniteGroup::close_generators(&gens, cap)?.order())
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("ambient", &self.ambient)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}
