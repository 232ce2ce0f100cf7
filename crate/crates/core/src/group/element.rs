//! Concrete group elements: invertible matrices mod p, permutations, and
//! indices into an explicit Cayley table.
//!
//! Every element has a canonical word encoding (`&[u32]`). Two elements are
//! equal exactly when their ambient parameters agree and their words agree.
//! The byte encoding is the little-endian concatenation of the words.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An explicit multiplication table on `{0, .., size-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    size: usize,
    identity: u32,
    data: Vec<u32>,
    inverse: Vec<u32>,
}

impl CayleyTable {
    /// Validates `rows` as a group table: Latin square, two-sided identity,
    /// and associativity (exhaustively up to 128 elements, on a fixed sample of
    /// triples above that).
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidGroupSpec("empty table".into()));
        }
        let mut data = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidGroupSpec(format!("row {i} has length {}", row.len())));
            }
            if !is_bijection(row) {
                return Err(Error::InvalidGroupSpec(format!("row {i} is not a permutation")));
            }
            data.extend_from_slice(row);
        }
        let identity = (0..size)
            .find(|&e| (0..size).all(|x| data[e * size + x] as usize == x && data[x * size + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroupSpec("table has no identity".into()))? as u32;
        let mut inverse = vec![0u32; size];
        for (x, inv) in inverse.iter_mut().enumerate() {
            let y = (0..size)
                .find(|&y| data[x * size + y] == identity)
                .ok_or_else(|| Error::InvalidGroupSpec(format!("element {x} has no inverse")))?;
            *inv = y as u32;
        }
        let table = CayleyTable { size, identity, data, inverse };
        table.check_associative()?;
        Ok(table)
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.size;
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a as u32, b as u32), c as u32) == self.mul(a as u32, self.mul(b as u32, c as u32))
        };
        let ok = if n <= 128 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c))))
        } else {
            // fixed LCG sample keeps validation deterministic
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            (0..200_000).all(|_| {
                let mut next = || {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % n as u64) as usize
                };
                let (a, b, c) = (next(), next(), next());
                assoc(a, b, c)
            })
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGroupSpec("table is not associative".into()))
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.data[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }
}

fn is_bijection(images: &[u32]) -> bool {
    let mut seen = vec![false; images.len()];
    for &x in images {
        let x = x as usize;
        if x >= images.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// The parameters shared by all elements of one group.
#[derive(Clone, Debug)]
pub enum Ambient {
    MatrixModP { p: u32, m: usize },
    Permutation { degree: usize },
    Table(Arc<CayleyTable>),
}

impl PartialEq for Ambient {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Ambient::MatrixModP { p, m }, Ambient::MatrixModP { p: q, m: k }) => p == q && m == k,
            (Ambient::Permutation { degree: a }, Ambient::Permutation { degree: b }) => a == b,
            (Ambient::Table(a), Ambient::Table(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for Ambient {}

impl Ambient {
    /// Number of `u32` words in the canonical encoding of one element.
    pub fn word_len(&self) -> usize {
        match self {
            Ambient::MatrixModP { m, .. } => m * m,
            Ambient::Permutation { degree } => *degree,
            Ambient::Table(_) => 1,
        }
    }

    pub fn identity_words(&self) -> Vec<u32> {
        match self {
            Ambient::MatrixModP { m, .. } => {
                let mut w = vec![0; m * m];
                for i in 0..*m {
                    w[i * m + i] = 1;
                }
                w
            }
            Ambient::Permutation { degree } => (0..*degree as u32).collect(),
            Ambient::Table(t) => vec![t.identity],
        }
    }

    /// `out = a * b`. For permutations the product acts as `x -> a(b(x))`.
    #[inline]
    pub fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        match self {
            Ambient::MatrixModP { p, m } => mat_mul_mod(*p, *m, a, b, out),
            Ambient::Permutation { .. } => {
                for (o, &bx) in out.iter_mut().zip(b) {
                    *o = a[bx as usize];
                }
            }
            Ambient::Table(t) => out[0] = t.mul(a[0], b[0]),
        }
    }

    pub fn inverse_into(&self, a: &[u32], out: &mut [u32]) {
        match self {
            Ambient::MatrixModP { p, m } => {
                let inv = mat_inverse_mod(*p, *m, a).expect("group elements are invertible");
                out.copy_from_slice(&inv);
            }
            Ambient::Permutation { .. } => {
                for (i, &ai) in a.iter().enumerate() {
                    out[ai as usize] = i as u32;
                }
            }
            Ambient::Table(t) => out[0] = t.inverse(a[0]),
        }
    }

    /// Checks the per-variant invariants of an encoding.
    pub fn validate(&self, words: &[u32]) -> Result<()> {
        if words.len() != self.word_len() {
            return Err(Error::InvalidElement(format!(
                "expected {} words, found {}",
                self.word_len(),
                words.len()
            )));
        }
        match self {
            Ambient::MatrixModP { p, m } => {
                if let Some(x) = words.iter().find(|&&x| x >= *p) {
                    return Err(Error::InvalidElement(format!("entry {x} not reduced mod {p}")));
                }
                if mat_det_mod(*p, *m, words) == 0 {
                    return Err(Error::InvalidElement(format!("matrix is singular mod {p}")));
                }
            }
            Ambient::Permutation { .. } => {
                if !is_bijection(words) {
                    return Err(Error::InvalidElement("image list is not a bijection".into()));
                }
            }
            Ambient::Table(t) => {
                if words[0] as usize >= t.size {
                    return Err(Error::InvalidElement(format!("table index {} out of range", words[0])));
                }
            }
        }
        Ok(())
    }
}

#[inline]
fn mat_mul_mod(p: u32, m: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
    let p = p as u64;
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0u64;
            for k in 0..m {
                acc += a[i * m + k] as u64 * b[k * m + j] as u64;
                // keep the accumulator below 2^63 for primes up to 2^31
                if acc >= 1 << 62 {
                    acc %= p;
                }
            }
            out[i * m + j] = (acc % p) as u32;
        }
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Determinant mod p; cofactor expansion for m <= 4, elimination above.
pub(crate) fn mat_det_mod(p: u32, m: usize, a: &[u32]) -> u32 {
    let p64 = p as u64;
    if m <= 4 {
        let v: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        return cofactor_det(p64, m, &v) as u32;
    }
    let mut w: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let mut det = 1u64;
    for col in 0..m {
        let Some(piv) = (col..m).find(|&r| w[r * m + col] != 0) else {
            return 0;
        };
        if piv != col {
            for k in 0..m {
                w.swap(piv * m + k, col * m + k);
            }
            det = (p64 - det) % p64;
        }
        let d = w[col * m + col];
        det = det * d % p64;
        let dinv = inv_mod(d, p64);
        for r in col + 1..m {
            let f = w[r * m + col] * dinv % p64;
            if f != 0 {
                for k in col..m {
                    w[r * m + k] = (w[r * m + k] + p64 - f * w[col * m + k] % p64) % p64;
                }
            }
        }
    }
    det as u32
}

fn cofactor_det(p: u64, m: usize, a: &[u64]) -> u64 {
    match m {
        0 => 1 % p,
        1 => a[0] % p,
        2 => (a[0] * a[3] % p + p - a[1] * a[2] % p) % p,
        _ => {
            let mut det = 0u64;
            for j in 0..m {
                let minor = minor_of(m, a, 0, j);
                let term = a[j] * cofactor_det(p, m - 1, &minor) % p;
                det = if j % 2 == 0 { (det + term) % p } else { (det + p - term) % p };
            }
            det
        }
    }
}

fn minor_of(m: usize, a: &[u64], row: usize, col: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity((m - 1) * (m - 1));
    for i in (0..m).filter(|&i| i != row) {
        for j in (0..m).filter(|&j| j != col) {
            out.push(a[i * m + j]);
        }
    }
    out
}

/// Inverse mod p via the adjugate for m <= 4 and Gauss-Jordan above.
pub(crate) fn mat_inverse_mod(p: u32, m: usize, a: &[u32]) -> Option<Vec<u32>> {
    let p64 = p as u64;
    if m <= 4 {
        let v: Vec<u64> = a.iter().map(|&x| x as u64).collect();
        let det = cofactor_det(p64, m, &v);
        if det == 0 {
            return None;
        }
        let dinv = inv_mod(det, p64);
        if m == 1 {
            return Some(vec![dinv as u32]);
        }
        let mut out = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                // adj[i][j] = (-1)^(i+j) det(minor(j, i))
                let c = cofactor_det(p64, m - 1, &minor_of(m, &v, j, i));
                let c = if (i + j) % 2 == 0 { c } else { (p64 - c) % p64 };
                out[i * m + j] = (c * dinv % p64) as u32;
            }
        }
        return Some(out);
    }
    let mut w: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let mut inv: Vec<u64> = vec![0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1;
    }
    for col in 0..m {
        let piv = (col..m).find(|&r| w[r * m + col] != 0)?;
        if piv != col {
            for k in 0..m {
                w.swap(piv * m + k, col * m + k);
                inv.swap(piv * m + k, col * m + k);
            }
        }
        let dinv = inv_mod(w[col * m + col], p64);
        for k in 0..m {
            w[col * m + k] = w[col * m + k] * dinv % p64;
            inv[col * m + k] = inv[col * m + k] * dinv % p64;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = w[r * m + col];
            if f != 0 {
                for k in 0..m {
                    w[r * m + k] = (w[r * m + k] + p64 - f * w[col * m + k] % p64) % p64;
                    inv[r * m + k] = (inv[r * m + k] + p64 - f * inv[col * m + k] % p64) % p64;
                }
            }
        }
    }
    Some(inv.into_iter().map(|x| x as u32).collect())
}

/// A concrete group element.
#[derive(Clone)]
pub enum GroupElement {
    /// An invertible `m x m` matrix over `Z/p`, entries row-major in `[0, p)`.
    Matrix { p: u32, m: usize, entries: Vec<u32> },
    /// A permutation of `{0, .., degree-1}` given by its image list.
    Permutation { images: Vec<u32> },
    /// An index into a shared Cayley table.
    Table { table: Arc<CayleyTable>, index: u32 },
}

impl GroupElement {
    /// Builds a matrix element from signed integer entries, reducing them mod `p`.
    pub fn matrix(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidElement("matrix must be square and non-empty".into()));
        }
        if p < 2 || !crate::embed::primes::is_prime_u64(p as u64) {
            return Err(Error::InvalidElement(format!("{p} is not a prime")));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|&x| x.rem_euclid(p as i64) as u32)
            .collect::<Vec<_>>();
        Self::from_words(&Ambient::MatrixModP { p, m }, &entries)
    }

    pub fn permutation(images: Vec<u32>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidElement("permutation of degree 0".into()));
        }
        Self::from_words(&Ambient::Permutation { degree: images.len() }, &images)
    }

    /// Builds a permutation of `degree` points from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x as usize >= degree || y as usize >= degree {
                    return Err(Error::InvalidElement(format!("point out of range in cycle {cycle:?}")));
                }
                images[x as usize] = y;
            }
        }
        Self::permutation(images)
    }

    pub fn table_element(table: Arc<CayleyTable>, index: u32) -> Result<Self> {
        let ambient = Ambient::Table(table);
        Self::from_words(&ambient, &[index])
    }

    /// Decodes an element from its canonical words, validating invariants.
    pub fn from_words(ambient: &Ambient, words: &[u32]) -> Result<Self> {
        ambient.validate(words)?;
        Ok(Self::from_words_unchecked(ambient, words))
    }

    pub(crate) fn from_words_unchecked(ambient: &Ambient, words: &[u32]) -> Self {
        match ambient {
            Ambient::MatrixModP { p, m } => GroupElement::Matrix { p: *p, m: *m, entries: words.to_vec() },
            Ambient::Permutation { .. } => GroupElement::Permutation { images: words.to_vec() },
            Ambient::Table(t) => GroupElement::Table { table: Arc::clone(t), index: words[0] },
        }
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            GroupElement::Matrix { p, m, .. } => Ambient::MatrixModP { p: *p, m: *m },
            GroupElement::Permutation { images } => Ambient::Permutation { degree: images.len() },
            GroupElement::Table { table, .. } => Ambient::Table(Arc::clone(table)),
        }
    }

    /// Canonical word encoding.
    pub fn words(&self) -> &[u32] {
        match self {
            GroupElement::Matrix { entries, .. } => entries,
            GroupElement::Permutation { images } => images,
            GroupElement::Table { index, .. } => std::slice::from_ref(index),
        }
    }

    /// Canonical byte encoding: little-endian words.
    pub fn encode(&self) -> Vec<u8> {
        self.words().iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    pub fn decode(ambient: &Ambient, bytes: &[u8]) -> Result<Self> {
        if bytes.len() % 4 != 0 {
            return Err(Error::InvalidElement("byte encoding length not a multiple of 4".into()));
        }
        let words: Vec<u32> = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        Self::from_words(ambient, &words)
    }

    pub fn identity(ambient: &Ambient) -> Self {
        Self::from_words_unchecked(ambient, &ambient.identity_words())
    }

    pub fn is_identity(&self) -> bool {
        self.words() == self.ambient().identity_words().as_slice()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let ambient = self.ambient();
        if ambient != other.ambient() {
            return Err(Error::MixedVariants);
        }
        let mut out = vec![0; ambient.word_len()];
        ambient.mul_into(self.words(), other.words(), &mut out);
        Ok(Self::from_words_unchecked(&ambient, &out))
    }

    pub fn inverse(&self) -> Self {
        let ambient = self.ambient();
        let mut out = vec![0; ambient.word_len()];
        ambient.inverse_into(self.words(), &mut out);
        Self::from_words_unchecked(&ambient, &out)
    }

    /// Order by repeated multiplication; `None` if it exceeds `cap`.
    pub fn order_capped(&self, cap: u64) -> Option<u64> {
        let ambient = self.ambient();
        let id = ambient.identity_words();
        let mut cur = self.words().to_vec();
        let mut next = vec![0; cur.len()];
        let mut k = 1u64;
        while cur != id {
            if k >= cap {
                return None;
            }
            ambient.mul_into(&cur, self.words(), &mut next);
            std::mem::swap(&mut cur, &mut next);
            k += 1;
        }
        Some(k)
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.ambient() == other.ambient() && self.words() == other.words()
    }
}

impl Eq for GroupElement {}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Matrix { p, m, entries } => {
                let rows: Vec<&[u32]> = entries.chunks(*m).collect();
                write!(f, "Matrix(mod {p}, {rows:?})")
            }
            GroupElement::Permutation { images } => write!(f, "Perm({images:?})"),
            GroupElement::Table { index, .. } => write!(f, "Table({index})"),
        }
    }
}
