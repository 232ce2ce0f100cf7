//! Small library of standard groups with fixed generating sets.
//!
//! The generating sets are part of the contract: element numbering follows
//! from them through [`FiniteGroup::close_generators`].

use super::element::GroupElement;
use super::finite::{FiniteGroup, DEFAULT_CLOSURE_CAP};
use crate::embed::primes::is_prime_u64;
use crate::error::{Error, Result};

fn close(gens: Vec<GroupElement>) -> Result<FiniteGroup> {
    FiniteGroup::close_generators(&gens, DEFAULT_CLOSURE_CAP)
}

/// Cyclic group of order `k` as the rotation of `k` points (`k >= 2`).
pub fn cyclic(k: usize) -> Result<FiniteGroup> {
    close(vec![cyclic_generator(k)?])
}

fn cyclic_generator(k: usize) -> Result<GroupElement> {
    if k < 2 {
        return Err(Error::InvalidGroupSpec("cyclic group needs k >= 2".into()));
    }
    GroupElement::permutation((0..k as u32).map(|i| (i + 1) % k as u32).collect())
}

/// Symmetric group on `n >= 2` points, generated by `(0 1)` and `(0 1 .. n-1)`.
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return Err(Error::InvalidGroupSpec("symmetric group needs n >= 2".into()));
    }
    close(vec![GroupElement::from_cycles(n, &[&[0, 1]])?, cyclic_generator(n)?])
}

/// Alternating group on `n >= 3` points, generated by the 3-cycles `(0 1 i)`.
pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::InvalidGroupSpec("alternating group needs n >= 3".into()));
    }
    let gens = (2..n as u32)
        .map(|i| GroupElement::from_cycles(n, &[&[0, 1, i]]))
        .collect::<Result<Vec<_>>>()?;
    close(gens)
}

/// Dihedral group of order `2k` acting on the vertices of a `k`-gon.
pub fn dihedral(k: usize) -> Result<FiniteGroup> {
    if k < 3 {
        return Err(Error::InvalidGroupSpec("dihedral group needs k >= 3".into()));
    }
    let reflection: Vec<u32> = (0..k as u32).map(|i| (k as u32 - i) % k as u32).collect();
    close(vec![cyclic_generator(k)?, GroupElement::permutation(reflection)?])
}

/// Quaternion group of order 8 inside SL2(3).
pub fn quaternion() -> Result<FiniteGroup> {
    let i = GroupElement::matrix(3, &[vec![0, -1], vec![1, 0]])?;
    let j = GroupElement::matrix(3, &[vec![1, 1], vec![1, -1]])?;
    close(vec![i, j])
}

/// SL2(p) for a prime `p`, generated by `[[1,1],[0,1]]` and `[[0,-1],[1,0]]`.
pub fn sl2(p: u32) -> Result<FiniteGroup> {
    close(sl2_generators(p)?)
}

pub fn sl2_generators(p: u32) -> Result<Vec<GroupElement>> {
    Ok(vec![
        GroupElement::matrix(p, &[vec![1, 1], vec![0, 1]])?,
        GroupElement::matrix(p, &[vec![0, -1], vec![1, 0]])?,
    ])
}

/// Smallest quadratic non-residue mod an odd prime.
pub fn non_residue(p: u32) -> u32 {
    let p64 = p as u64;
    (2..p)
        .find(|&c| super::element::pow_mod(c as u64, (p64 - 1) / 2, p64) == p64 - 1)
        .expect("odd primes have non-residues")
}

/// SL2(p^2) for an odd prime `p`, realized inside GL4(p).
///
/// `F_{p^2} = F_p[t]/(t^2 - c)` with `c` the least non-residue; `a + b t` acts on
/// the basis `{1, t}` by `[[a, b c], [b, a]]`. The group is generated by the
/// upper and lower unitriangular matrices with off-diagonal entries `1` and `t`.
pub fn sl2_prime_square(p: u32) -> Result<FiniteGroup> {
    close(sl2_prime_square_generators(p)?)
}

pub fn sl2_prime_square_generators(p: u32) -> Result<Vec<GroupElement>> {
    if p == 2 || !is_prime_u64(p as u64) {
        return Err(Error::InvalidGroupSpec(format!("SL2(p^2) needs an odd prime, got {p}")));
    }
    let c = non_residue(p) as i64;
    // 2x2 blocks of multiplication by 1 and by t
    let one = [[1, 0], [0, 1]];
    let t = [[0, c], [1, 0]];
    let upper = |x: [[i64; 2]; 2]| -> Vec<Vec<i64>> {
        vec![
            vec![1, 0, x[0][0], x[0][1]],
            vec![0, 1, x[1][0], x[1][1]],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]
    };
    let lower = |x: [[i64; 2]; 2]| -> Vec<Vec<i64>> {
        vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![x[0][0], x[0][1], 1, 0],
            vec![x[1][0], x[1][1], 0, 1],
        ]
    };
    [upper(one), upper(t), lower(one), lower(t)]
        .iter()
        .map(|rows| GroupElement::matrix(p, rows))
        .collect()
}

/// Parses names such as `S4`, `A5`, `D4`, `Q8`, `C12`, `SL2(5)`, `SL2(49)`.
///
/// `Dk` is the dihedral group of order `2k`.
pub fn named(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::InvalidGroupSpec(format!("unknown group name {name:?}"));
    let name = name.trim();
    if let Some(inner) = name.strip_prefix("SL2(").and_then(|r| r.strip_suffix(')')) {
        let q: u32 = inner.parse().map_err(|_| bad())?;
        if is_prime_u64(q as u64) {
            return sl2(q);
        }
        let r = (q as f64).sqrt().round() as u32;
        if r * r == q && is_prime_u64(r as u64) {
            return sl2_prime_square(r);
        }
        return Err(bad());
    }
    if name == "Q8" {
        return quaternion();
    }
    let (head, tail) = name.split_at(1.min(name.len()));
    let k: usize = tail.parse().map_err(|_| bad())?;
    match head {
        "S" => symmetric(k),
        "A" => alternating(k),
        "D" => dihedral(k),
        "C" => cyclic(k),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        for (name, order) in [
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("A5", 60),
            ("D4", 8),
            ("Q8", 8),
            ("C9", 9),
            ("SL2(3)", 24),
            ("SL2(5)", 120),
            ("SL2(7)", 336),
            ("SL2(9)", 720),
        ] {
            assert_eq!(named(name).unwrap().order(), order, "{name}");
        }
        assert!(named("X4").is_err());
        assert!(named("SL2(6)").is_err());
    }

    #[test]
    fn sl2_of_49_has_expected_order() {
        let g = sl2_prime_square(7).unwrap();
        // q (q^2 - 1) with q = 49
        assert_eq!(g.order(), 117_600);
    }
}
