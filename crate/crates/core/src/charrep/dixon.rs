//! Dixon-Schneider: characters from the class-sum algebra over a prime field.
//!
//! With `a_ijk = #{(x, y) in C_i x C_j : xy = g_k}`, the central characters
//! `w_k = |C_k| chi(g_k) / chi(1)` satisfy `w_j w_i = sum_k a_ijk w_k`, so
//! `w` is a common eigenvector of the matrices `M_j[i][k] = a_ijk`. Over
//! `F_l` with `l = 1 mod exponent` all eigenvalues lie in the field, the
//! common eigenspaces are lines, and each line determines one character
//! modulo `l`. Eigenvalue multiplicities of `Phi(g)` recovered modulo `l`
//! are honest integers because they are at most `chi(1) < l`, which lifts
//! the character to the complex numbers.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::table::CharacterTable;
use crate::embed::primes::is_prime_u64;
use crate::error::{Error, Result};
use crate::group::{ConjugacyClasses, FiniteGroup};

pub const MAX_CLASSES: usize = 512;

/// Candidates `l = t * exponent + 1` tried before giving up.
const PRIME_SEARCH_STEPS: u64 = 10_000_000;

#[derive(Clone, Copy, Debug)]
struct Fp(u64);

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.0 != 0);
        self.pow(a, self.0 - 2)
    }

    fn reduce(self, a: u64) -> u64 {
        a % self.0
    }
}

/// The smallest prime `l = 1 mod e` with `l > 2 sqrt(order)`.
pub fn dixon_prime(order: usize, e: u64) -> Result<u64> {
    let floor = 2 * (order as f64).sqrt().ceil() as u64;
    (1..=PRIME_SEARCH_STEPS)
        .map(|t| t * e + 1)
        .find(|&l| l > floor && is_prime_u64(l))
        .ok_or(Error::NoSuitablePrime { exponent: e })
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of exact order `e` in `F_l^*`.
fn root_of_unity(f: Fp, e: u64) -> u64 {
    let qs = prime_factors(e);
    (2..f.0)
        .map(|a| f.pow(a, (f.0 - 1) / e))
        .find(|&z| qs.iter().all(|&q| f.pow(z, e / q) != 1))
        .expect("F_l^* is cyclic of order divisible by e")
}

/// `M_j` as columns: `cols[k][i] = a_ijk mod l`.
fn class_matrix(group: &FiniteGroup, classes: &ConjugacyClasses, j: usize, f: Fp) -> Vec<Vec<u64>> {
    let r = classes.len();
    let members = classes.members(j);
    (0..r)
        .into_par_iter()
        .map(|k| {
            let z = classes.representative(k);
            let mut col = vec![0u64; r];
            for &y in members {
                let x = group.mul(z, group.inverse(y as usize));
                col[classes.class_of(x)] += 1;
            }
            col.iter().map(|&c| f.reduce(c)).collect()
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(f: Fp, rows: &mut [Vec<u64>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for k in 0..ncols {
                    let v = f.mul(factor, rows[r][k]);
                    rows[i][k] = f.sub(rows[i][k], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the nullspace of the square matrix `a`.
fn nullspace(f: Fp, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut rows = a.to_vec();
    let pivots = rref(f, &mut rows, n);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.sub(0, rows[r][fc]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial, coefficients low to high, via Hessenberg form.
fn charpoly(f: Fp, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| h[i][c] != 0) else { continue };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let inv = f.inv(h[c + 1][c]);
        for i in c + 2..n {
            if h[i][c] == 0 {
                continue;
            }
            let t = f.mul(h[i][c], inv);
            for k in 0..n {
                let v = f.mul(t, h[c + 1][k]);
                h[i][k] = f.sub(h[i][k], v);
            }
            for row in h.iter_mut() {
                let v = f.mul(t, row[i]);
                row[c + 1] = f.add(row[c + 1], v);
            }
        }
    }
    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let mut next = vec![0u64; m + 2];
        for (k, &c) in polys[m].iter().enumerate() {
            next[k + 1] = f.add(next[k + 1], c);
            next[k] = f.sub(next[k], f.mul(h[m][m], c));
        }
        let mut prod = 1;
        for i in (0..m).rev() {
            prod = f.mul(prod, h[i + 1][i]);
            if prod == 0 {
                break;
            }
            let t = f.mul(h[i][m], prod);
            for (k, &c) in polys[i].iter().enumerate() {
                next[k] = f.sub(next[k], f.mul(t, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Distinct roots in `F_l`, found by evaluation with deflation.
fn roots(f: Fp, mut poly: Vec<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = 0;
    while poly.len() > 1 && x < f.0 {
        let value = poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
        if value == 0 {
            out.push(x);
            // Divide out every copy of (t - x).
            loop {
                let mut q = vec![0u64; poly.len() - 1];
                let mut carry = 0;
                for k in (1..poly.len()).rev() {
                    carry = f.add(poly[k], f.mul(carry, x));
                    q[k - 1] = carry;
                }
                let rem = f.add(poly[0], f.mul(carry, x));
                if rem != 0 {
                    break;
                }
                poly = q;
                if poly.len() == 1 {
                    break;
                }
            }
        }
        x += 1;
    }
    out
}

/// Splits the invariant subspace spanned by `basis` (rows, RREF) under the
/// operator whose columns are `cols`.
fn split(f: Fp, basis: &[Vec<u64>], cols: &[Vec<u64>]) -> Result<Vec<Vec<Vec<u64>>>> {
    let t = basis.len();
    let r = cols.len();
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    // Image of each basis vector, read off at the pivots.
    let mut x = vec![vec![0u64; t]; t];
    for (b, v) in basis.iter().enumerate() {
        let mut image = vec![0u64; r];
        for (k, &vk) in v.iter().enumerate() {
            if vk == 0 {
                continue;
            }
            for i in 0..r {
                image[i] = f.add(image[i], f.mul(cols[k][i], vk));
            }
        }
        for a in 0..t {
            x[a][b] = image[pivots[a]];
        }
    }
    let eig = roots(f, charpoly(f, &x));
    if eig.len() == 1 {
        return Ok(vec![basis.to_vec()]);
    }
    let mut parts = Vec::new();
    let mut dims = 0;
    for lambda in eig {
        let shifted: Vec<Vec<u64>> = (0..t)
            .map(|a| (0..t).map(|b| if a == b { f.sub(x[a][b], lambda) } else { x[a][b] }).collect())
            .collect();
        let mut part: Vec<Vec<u64>> = nullspace(f, &shifted)
            .into_iter()
            .map(|coef| {
                let mut v = vec![0u64; r];
                for (b, &c) in coef.iter().enumerate() {
                    for i in 0..r {
                        v[i] = f.add(v[i], f.mul(c, basis[b][i]));
                    }
                }
                v
            })
            .collect();
        rref(f, &mut part, r);
        dims += part.len();
        parts.push(part);
    }
    if dims != t {
        return Err(Error::CharacterTable(format!(
            "eigenspaces of dimension {dims} do not fill a {t}-dimensional space"
        )));
    }
    Ok(parts)
}

/// Character table by the Dixon-Schneider method.
pub fn character_table_dixon(group: &FiniteGroup) -> Result<CharacterTable> {
    let classes = ConjugacyClasses::compute(group);
    character_table_dixon_with(group, &classes)
}

pub fn character_table_dixon_with(group: &FiniteGroup, classes: &ConjugacyClasses) -> Result<CharacterTable> {
    let r = classes.len();
    if r > MAX_CLASSES {
        return Err(Error::TooManyClasses { classes: r, limit: MAX_CLASSES });
    }
    let order = group.order();
    let orders = classes.orders(group);
    let e = crate::group::exponent(&orders);
    let l = dixon_prime(order, e)?;
    let f = Fp(l);

    let identity_basis: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|k| (i == k) as u64).collect()).collect();
    let mut spaces = vec![identity_basis];
    let mut by_size: Vec<usize> = (1..r).collect();
    by_size.sort_by_key(|&j| (classes.size(j), j));
    for j in by_size {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let cols = class_matrix(group, classes, j, f);
        let mut next = Vec::with_capacity(spaces.len());
        for s in spaces {
            if s.len() == 1 {
                next.push(s);
            } else {
                next.extend(split(f, &s, &cols)?);
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(Error::CharacterTable(format!("class algebra split into {} of {r} lines", spaces.len())));
    }

    let sizes = classes.sizes();
    let inverse: Vec<usize> = (0..r).map(|k| classes.inverse_class(group, k)).collect();
    let g_mod = f.reduce(order as u64);
    let root = f.pow(root_of_unity(f, e), 1);
    let half = (order as f64).sqrt().floor() as u64 + 1;

    let mut power_classes: Vec<Vec<usize>> = Vec::with_capacity(r);
    for k in 0..r {
        let g = classes.representative(k);
        let mut x = group.identity();
        power_classes.push(
            (0..orders[k])
                .map(|_| {
                    let c = classes.class_of(x);
                    x = group.mul(x, g);
                    c
                })
                .collect(),
        );
    }

    let mut values = Vec::with_capacity(r);
    for space in spaces {
        let mut w = space.into_iter().next().unwrap();
        let w0 = w[0];
        if w0 == 0 {
            return Err(Error::CharacterTable("eigenvector vanishes at the identity class".into()));
        }
        let inv0 = f.inv(w0);
        for x in w.iter_mut() {
            *x = f.mul(*x, inv0);
        }
        // sum_k w_k w_{k*} / |C_k| = |G| / chi(1)^2
        let s = (0..r).fold(0, |acc, k| {
            f.add(acc, f.mul(f.mul(w[k], w[inverse[k]]), f.inv(f.reduce(sizes[k] as u64))))
        });
        if s == 0 {
            return Err(Error::CharacterTable("degenerate norm while recovering a degree".into()));
        }
        let target = f.mul(g_mod, f.inv(s));
        let d = (1..=half)
            .find(|&d| f.mul(d, d) == target)
            .ok_or_else(|| Error::CharacterTable("no integer degree matches modulo l".into()))?;
        let chi_mod: Vec<u64> = (0..r).map(|k| f.mul(f.mul(d, w[k]), f.inv(f.reduce(sizes[k] as u64)))).collect();

        let mut row = Vec::with_capacity(r);
        for k in 0..r {
            let o = orders[k];
            let zeta = f.pow(root, e / o);
            let zeta_inv = f.inv(zeta);
            let o_inv = f.inv(f.reduce(o));
            let mut value = Complex64::new(0.0, 0.0);
            let mut total = 0u64;
            for j in 0..o {
                let step = f.pow(zeta_inv, j);
                let mut acc = 0;
                let mut z = 1;
                for t in 0..o as usize {
                    acc = f.add(acc, f.mul(chi_mod[power_classes[k][t]], z));
                    z = f.mul(z, step);
                }
                let m = f.mul(acc, o_inv);
                if m > d {
                    return Err(Error::CharacterTable(format!("multiplicity residue {m} exceeds degree {d}")));
                }
                total += m;
                value += Complex64::from_polar(m as f64, TAU * j as f64 / o as f64);
            }
            if total != d {
                return Err(Error::CharacterTable(format!("multiplicities sum to {total}, degree is {d}")));
            }
            row.push(value);
        }
        values.push(row);
    }
    CharacterTable::from_class_functions(group, classes, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    #[test]
    fn charpoly_and_roots() {
        let f = Fp(101);
        // diag(2, 3, 3) conjugated by an upper unitriangular matrix
        let a = vec![vec![2, 1, 5], vec![0, 3, 0], vec![0, 0, 3]];
        let p = charpoly(f, &a);
        // (x-2)(x-3)^2 = x^3 - 8x^2 + 21x - 18
        assert_eq!(p, vec![101 - 18, 21, 101 - 8, 1]);
        assert_eq!(roots(f, p), vec![2, 3]);
        let a = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(roots(f, charpoly(f, &a)), vec![1, 100]);
    }

    #[test]
    fn cyclic_groups_give_roots_of_unity() {
        for k in [2usize, 5, 12] {
            let g = catalog::cyclic(k).unwrap();
            let t = character_table_dixon(&g).unwrap();
            assert_eq!(t.len(), k);
            assert!(t.degrees().iter().all(|&d| d == 1));
            // every value is a k-th root of unity
            for row in t.characters() {
                for z in row {
                    assert!((z.norm() - 1.0).abs() < 1e-12);
                    assert!((z.powu(k as u32) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn small_nonabelian_degrees() {
        let cases: [(&str, &[u64]); 6] = [
            ("S3", &[1, 1, 2]),
            ("Q8", &[1, 1, 1, 1, 2]),
            ("D4", &[1, 1, 1, 1, 2]),
            ("A4", &[1, 1, 1, 3]),
            ("S4", &[1, 1, 2, 3, 3]),
            ("SL2(5)", &[1, 2, 2, 3, 3, 4, 4, 5, 6]),
        ];
        for (name, degrees) in cases {
            let t = character_table_dixon(&catalog::named(name).unwrap()).unwrap();
            assert_eq!(t.degrees(), degrees, "{name}");
        }
    }

    #[test]
    fn s3_values() {
        let g = catalog::symmetric(3).unwrap();
        let t = character_table_dixon(&g).unwrap();
        // classes: identity, then by smallest index
        let two = t.character(2);
        let mut vals: Vec<i64> = two.iter().map(|z| z.re.round() as i64).collect();
        vals.sort();
        assert_eq!(vals, vec![-1, 0, 2]);
        assert!(two.iter().all(|z| z.im.abs() < 1e-12));
    }

    #[test]
    fn prime_choice() {
        assert_eq!(dixon_prime(6, 6).unwrap(), 7);
        // 2 * sqrt(120) ~ 21.9, exponent 60
        assert_eq!(dixon_prime(120, 60).unwrap(), 61);
        let l = dixon_prime(117_600, 8400).unwrap();
        assert!(l % 8400 == 1 && is_prime_u64(l) && (l as f64) > 2.0 * (117_600f64).sqrt());
    }
}
