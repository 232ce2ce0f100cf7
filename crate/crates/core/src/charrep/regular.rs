//! Explicit unitary irreducible representations by splitting the regular
//! representation with random elements of its commutant.
//!
//! For `R(g) e_h = e_{gh}` and a Hermitian `H`, the average
//! `(1/|G|) sum_g R(g) H R(g)^{-1}` has entries `f(a^{-1} b)` with
//! `f(x) = (1/|G|) sum_c H[c][cx]`. Its eigenspaces are invariant; for a
//! generic draw each eigenspace is one irreducible copy. Clusters that are
//! not irreducible (character norm above 1) are split again with a fresh
//! random Hermitian averaged over the restricted representation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{hermitian_eigen, CMatrix};

pub const REGULAR_SIZE_CAP: usize = 2048;
pub const MAX_SPLIT_RETRIES: u64 = 8;

/// Unitarity tolerance.
pub const UNITARY_TOL: f64 = 1e-8;
/// Homomorphism tolerance.
pub const HOMOMORPHISM_TOL: f64 = 1e-7;
/// Character norm tolerance.
pub const IRREDUCIBLE_TOL: f64 = 1e-6;

const HOMOMORPHISM_PAIRS: usize = 200;
const MAX_DEPTH: usize = 8;
/// Relative eigenvalue gap that separates clusters.
const CLUSTER_GAP: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct UnitaryIrrep {
    dim: usize,
    matrices: Vec<CMatrix>,
    character: Vec<Complex64>,
}

impl UnitaryIrrep {
    /// Wraps explicit matrices indexed by element; checks nothing.
    pub fn from_matrices(matrices: Vec<CMatrix>) -> Result<Self> {
        let dim = matrices.first().map(|m| m.rows()).unwrap_or(0);
        if dim == 0 || matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch("representation matrices must share one square shape".into()));
        }
        let character = matrices.iter().map(|m| m.trace()).collect();
        Ok(UnitaryIrrep { dim, matrices, character })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, element: usize) -> &CMatrix {
        &self.matrices[element]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// `chi(g)` for every element index `g`.
    pub fn character(&self) -> &[Complex64] {
        &self.character
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrices.iter().map(|m| m.unitarity_defect()).fold(0.0, f64::max)
    }

    /// Largest `|Phi(g)Phi(h) - Phi(gh)|` over `pairs` seeded random pairs.
    pub fn homomorphism_defect(&self, group: &FiniteGroup, pairs: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = group.order();
        (0..pairs)
            .map(|_| {
                let (g, h) = (rng.random_range(0..n), rng.random_range(0..n));
                (&self.matrices[g] * &self.matrices[h]).max_abs_diff(&self.matrices[group.mul(g, h)])
            })
            .fold(0.0, f64::max)
    }

    /// `(1/|G|) sum_g |chi(g)|^2`, which is 1 exactly for irreducibles.
    pub fn character_norm(&self) -> f64 {
        self.character.iter().map(|z| z.norm_sqr()).sum::<f64>() / self.character.len() as f64
    }

    pub fn validate(&self, group: &FiniteGroup, seed: u64) -> Result<()> {
        if self.matrices.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for a group of order {}",
                self.matrices.len(),
                group.order()
            )));
        }
        let u = self.unitarity_defect();
        if u > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: u });
        }
        let h = self.homomorphism_defect(group, HOMOMORPHISM_PAIRS, seed);
        if h > HOMOMORPHISM_TOL {
            return Err(Error::SplitFailure { attempts: 0, reason: format!("homomorphism defect {h:.3e}") });
        }
        let norm = self.character_norm();
        if (norm - 1.0).abs() > IRREDUCIBLE_TOL {
            return Err(Error::SplitFailure { attempts: 0, reason: format!("character norm {norm}") });
        }
        Ok(())
    }
}

/// Groups indices of sorted eigenvalues into runs separated by relative gaps.
fn clusters(values: &[f64]) -> Vec<Vec<usize>> {
    let scale = values.iter().map(|v| v.abs()).fold(1e-300, f64::max);
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(run) if v - values[run[run.len() - 1]] <= CLUSTER_GAP * scale => run.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Character of the subrepresentation on the columns of `q`:
/// `chi(g) = sum_h <Q[gh], Q[h]>`.
fn subspace_character(group: &FiniteGroup, q: &CMatrix) -> Vec<Complex64> {
    let n = group.order();
    (0..n)
        .map(|g| {
            (0..n)
                .map(|h| {
                    let a = q.row(group.mul(g, h));
                    let b = q.row(h);
                    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>()
                })
                .sum()
        })
        .collect()
}

/// `Q* R(g) Q` for every `g`; `(R(g) Q)[gh] = Q[h]`.
fn restricted_matrices(group: &FiniteGroup, q: &CMatrix) -> Vec<CMatrix> {
    let n = group.order();
    let k = q.cols();
    (0..n)
        .map(|g| {
            let mut m = CMatrix::zeros(k, k);
            for h in 0..n {
                let top = q.row(group.mul(g, h));
                let bottom = q.row(h);
                for i in 0..k {
                    let a = top[i].conj();
                    for j in 0..k {
                        m[(i, j)] += a * bottom[j];
                    }
                }
            }
            m
        })
        .collect()
}

fn norm_of(chi: &[Complex64]) -> f64 {
    chi.iter().map(|z| z.norm_sqr()).sum::<f64>() / chi.len() as f64
}

/// Recursively splits the invariant subspace spanned by `q` into irreducibles.
fn split_subspace(
    group: &FiniteGroup,
    q: CMatrix,
    rng: &mut ChaCha8Rng,
    depth: usize,
    out: &mut Vec<CMatrix>,
) -> std::result::Result<(), String> {
    let chi = subspace_character(group, &q);
    let norm = norm_of(&chi);
    if (norm - 1.0).abs() <= IRREDUCIBLE_TOL {
        out.push(q);
        return Ok(());
    }
    if (norm - norm.round()).abs() > 1e-3 || norm < 1.5 {
        return Err(format!("cluster of dimension {} has character norm {norm}", q.cols()));
    }
    if depth >= MAX_DEPTH {
        return Err("splitting did not terminate".into());
    }
    let k = q.cols();
    let reps = restricted_matrices(group, &q);
    let h = CMatrix::random_hermitian(k, rng);
    let mut avg = CMatrix::zeros(k, k);
    for m in &reps {
        avg = &avg + &(&(m * &h) * &m.adjoint());
    }
    avg.scale(1.0 / group.order() as f64);
    let eig = hermitian_eigen(&avg).map_err(|e| e.to_string())?;
    let parts = clusters(&eig.values);
    if parts.len() == 1 {
        return Err("random commutant element is scalar on a reducible cluster".into());
    }
    for part in parts {
        let sub = &q * &eig.vectors.select_columns(&part);
        split_subspace(group, sub, rng, depth + 1, out)?;
    }
    Ok(())
}

fn attempt(group: &FiniteGroup, rng: &mut ChaCha8Rng, tol: f64, check_seed: u64) -> std::result::Result<Vec<UnitaryIrrep>, String> {
    let n = group.order();
    let h = CMatrix::random_hermitian(n, rng);
    // f(x) = (1/|G|) sum_c H[c][cx]
    let mut f = vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for (x, fx) in f.iter_mut().enumerate() {
            *fx += h[(c, group.mul(c, x))];
        }
    }
    for fx in &mut f {
        *fx /= n as f64;
    }
    let avg = CMatrix::from_fn(n, n, |a, b| f[group.mul(group.inverse(a), b)]);
    let eig = hermitian_eigen(&avg).map_err(|e| e.to_string())?;

    let mut blocks = Vec::new();
    for part in clusters(&eig.values) {
        split_subspace(group, eig.vectors.select_columns(&part), rng, 0, &mut blocks)?;
    }

    // One block per isomorphism class, judged by character inner products.
    let mut kept: Vec<(CMatrix, Vec<Complex64>)> = Vec::new();
    for q in blocks {
        let chi = subspace_character(group, &q);
        let mut duplicate = false;
        for (_, other) in &kept {
            let ip: Complex64 = chi.iter().zip(other).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n as f64;
            let rounded = ip.re.round();
            let gap = (ip - Complex64::new(rounded, 0.0)).norm();
            if gap > tol {
                return Err(format!("character inner product {ip} is not an integer"));
            }
            if rounded == 1.0 {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push((q, chi));
        }
    }
    let sum: usize = kept.iter().map(|(q, _)| q.cols() * q.cols()).sum();
    if sum != n {
        return Err(format!("sum of squared dimensions {sum} != {n}"));
    }

    let mut irreps = Vec::with_capacity(kept.len());
    for (q, _) in kept {
        let irrep = UnitaryIrrep::from_matrices(restricted_matrices(group, &q)).map_err(|e| e.to_string())?;
        irrep.validate(group, check_seed).map_err(|e| e.to_string())?;
        irreps.push(irrep);
    }
    let key = |r: &UnitaryIrrep| -> Vec<(i64, i64)> {
        r.character().iter().map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64)).collect()
    };
    irreps.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| key(b).cmp(&key(a))));
    Ok(irreps)
}

/// One unitary irrep per isomorphism class of a group of order at most
/// [`REGULAR_SIZE_CAP`]. `tol` bounds the distance of character inner
/// products from integers (at most 0.1 is used). Deterministic in `seed`.
pub fn decompose_regular(group: &FiniteGroup, seed: u64, tol: f64) -> Result<Vec<UnitaryIrrep>> {
    let n = group.order();
    if n > REGULAR_SIZE_CAP {
        return Err(Error::SizeCap { order: n, cap: REGULAR_SIZE_CAP });
    }
    let tol = tol.min(0.1);
    let mut reason = String::new();
    for retry in 0..=MAX_SPLIT_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(retry);
        match attempt(group, &mut rng, tol, seed ^ retry) {
            Ok(irreps) => return Ok(irreps),
            Err(e) => reason = e,
        }
    }
    Err(Error::SplitFailure { attempts: MAX_SPLIT_RETRIES as usize + 1, reason })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;

    fn dims(name: &str) -> Vec<usize> {
        let g = catalog::named(name).unwrap();
        decompose_regular(&g, 7, 1e-6).unwrap().iter().map(|r| r.dim()).collect()
    }

    #[test]
    fn abelian_groups_are_one_dimensional() {
        assert_eq!(dims("C12"), vec![1; 12]);
    }

    #[test]
    fn classical_dimensions() {
        assert_eq!(dims("S3"), vec![1, 1, 2]);
        assert_eq!(dims("Q8"), vec![1, 1, 1, 1, 2]);
        assert_eq!(dims("SL2(5)"), vec![1, 2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let g = catalog::named("S4").unwrap();
        let a = decompose_regular(&g, 3, 1e-6).unwrap();
        let b = decompose_regular(&g, 3, 1e-6).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.matrices(), y.matrices());
        }
    }

    #[test]
    fn size_cap() {
        let g = catalog::cyclic(2049).unwrap();
        assert!(matches!(decompose_regular(&g, 0, 1e-6), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn explicit_rotation_rep_of_s3_is_accepted() {
        // Oracle: the 2-dimensional representation of S3 on the plane x+y+z = 0.
        let g = catalog::symmetric(3).unwrap();
        let basis = [[1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt(), 0.0], [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), -2.0 / 6f64.sqrt()]];
        let mats = (0..6)
            .map(|i| {
                let images = g.element(i).words().to_vec();
                CMatrix::from_fn(2, 2, |a, b| {
                    // <basis_a, P basis_b>, P e_x = e_{images[x]}
                    let mut s = 0.0;
                    for x in 0..3 {
                        s += basis[a][images[x] as usize] * basis[b][x];
                    }
                    Complex64::new(s, 0.0)
                })
            })
            .collect();
        let rep = UnitaryIrrep::from_matrices(mats).unwrap();
        rep.validate(&g, 1).unwrap();
        let ours = decompose_regular(&g, 1, 1e-6).unwrap();
        let two = ours.iter().find(|r| r.dim() == 2).unwrap();
        for (a, b) in two.character().iter().zip(rep.character()) {
            assert!((a - b).norm() < 1e-9);
        }
    }
}
