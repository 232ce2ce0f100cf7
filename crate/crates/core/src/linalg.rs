//! Dense complex matrices and the Jacobi-type factorizations built on them.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Off-diagonal mass (relative) at which the Jacobi iterations stop.
pub const JACOBI_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        CMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Entries drawn as `x + iy` with `x, y` standard normal.
    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self::from_fn(rows, cols, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    }

    /// Random Hermitian matrix `(G + G*)/2` with `G` complex Gaussian.
    pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let g = Self::gaussian(n, n, rng);
        let mut h = &g + &g.adjoint();
        h.scale(0.5);
        h
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |(M M*) - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.rows))
    }

    /// Columns `cols` as a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (d, b) in dst.iter_mut().zip(rhs.row(k)) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Eigen-decomposition `H = V diag(values) V*` of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector for `values[j]`.
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi. Only the Hermitian part of `h` is used.
pub fn hermitian_eigen(h: &CMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", h.rows, h.cols)));
    }
    let n = h.rows;
    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius().max(f64::MIN_POSITIVE);

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > JACOBI_TOL * scale {
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                // Phase-shift column q so the pivot is real, then rotate.
                let w = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J = [[c, s], [-s conj(w), c conj(w)]] on the (p, q) plane.
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -w.conj() * s;
                let jqq = w.conj() * c;
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                for k in 0..n {
                    let (x, y) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: v.select_columns(&order),
    })
}

/// `M = U diag(values) V*` with `values` nonincreasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: CMatrix,
    pub values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let s: Vec<Complex64> = self.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        &(&self.u * &CMatrix::diagonal(&s)) * &self.v.adjoint()
    }
}

/// One-sided (Hestenes) Jacobi SVD of a square matrix.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", m.rows, m.cols)));
    }
    let n = m.rows;
    // Work on columns stored contiguously.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| m.column(j)).collect();
    let mut vcols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt()) };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for set in [&mut cols, &mut vcols] {
                    let (lo, hi) = set.split_at_mut(q);
                    for (x, y) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = *y * phase;
                        let xp = *x;
                        *x = xp * c - yq * s;
                        *y = xp * s + yq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let top = norms.iter().cloned().fold(0.0, f64::max);

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut pending = 0;
    for &j in &order {
        let s = norms[j];
        if s > top * f64::EPSILON * n as f64 && s > 0.0 {
            u_cols.push(cols[j].iter().map(|z| z / s).collect());
            values.push(s);
        } else {
            values.push(s);
            pending += 1;
        }
    }
    // Null directions: complete U to a unitary basis.
    if pending > 0 {
        let mut e = 0;
        while u_cols.len() < n && e < n {
            let mut w: Vec<Complex64> = (0..n).map(|i| Complex64::new(if i == e { 1.0 } else { 0.0 }, 0.0)).collect();
            for _ in 0..2 {
                for u in &u_cols {
                    let d: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in w.iter_mut().zip(u) {
                        *x -= d * y;
                    }
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                u_cols.push(w.iter().map(|z| z / norm).collect());
            }
            e += 1;
        }
    }
    let u = CMatrix::from_fn(n, n, |i, j| u_cols[j][i]);
    let v = CMatrix::from_fn(n, n, |i, j| vcols[order[j]][i]);
    Ok(Svd { u, values, v })
}

/// Eigenvalues of a normal matrix `U`: the Hermitian pair `(U + U*)/2` and
/// `(U - U*)/2i` commutes, so an eigenbasis of `H1 + H2/pi` diagonalizes
/// both, and `lambda = v* U v`. Two distinct unimodular values never
/// share a value of `Re + Im/pi` when their arguments are rational
/// multiples of `pi`.
pub fn unitary_eigenvalues(u: &CMatrix) -> Result<Vec<Complex64>> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", u.rows, u.cols)));
    }
    let adj = u.adjoint();
    let gamma = std::f64::consts::FRAC_1_PI;
    let h = CMatrix::from_fn(u.rows, u.cols, |i, j| {
        let (a, b) = (u[(i, j)], adj[(i, j)]);
        (a + b) * 0.5 + (a - b) * Complex64::new(0.0, -0.5 * gamma)
    });
    let e = hermitian_eigen(&h)?;
    let uv = u * &e.vectors;
    Ok((0..u.rows)
        .map(|j| (0..u.rows).map(|i| e.vectors[(i, j)].conj() * uv[(i, j)]).sum())
        .collect())
}

/// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix.
/// Gram-Schmidt leaves `R` with a positive real diagonal, which is the phase
/// normalization that makes `Q` Haar.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::gaussian(n, n, rng);
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut w = g.column(j);
        for _ in 0..2 {
            for u in &q {
                let d: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in w.iter_mut().zip(u) {
                    *x -= d * y;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        q.push(w.iter().map(|z| z / norm).collect());
    }
    CMatrix::from_fn(n, n, |i, j| q[j][i])
}
