//! Singular values and the inequalities used to bound traces of products.
//!
//! * `|tr M| <= sum_i s_i(M)`;
//! * `s_k(MM') <= min(s_k(M) s_1(M'), s_1(M) s_k(M'))` and
//!   `prod_{j<=k} s_j(MM') <= prod_{j<=k} s_j(M) prod_{j<=k} s_j(M')`;
//! * for unitary `U` with eigenvalues `lambda_i`, the singular values of
//!   `(U + U^{-1})/2` are `|Re lambda_i|`;
//! * `sin t >= t/2` on `[0, pi/2]` and `cos t <= exp(-t^2/4)` on `[0, pi]`.

pub mod diagnostics;

pub use diagnostics::{proof_diagnostics, CascadeRow, ProofDiagnostics, StepParameters};

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{svd, unitary_eigenvalues, CMatrix};

/// Singular values are computed for matrices up to this size.
pub const MAX_SVD_SIZE: usize = 2048;

/// Unitarity required by [`cos_spectrum`].
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularProfile {
    pub size: usize,
    /// Nonincreasing and nonnegative.
    pub values: Vec<f64>,
}

impl SingularProfile {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `s_k`, one-based.
    pub fn s(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    /// `ln prod_{j<=k} s_j` for `k = 1..=size`.
    pub fn log_prefix_products(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, &s| {
                *acc += s.ln();
                Some(*acc)
            })
            .collect()
    }
}

pub fn singular_values(m: &CMatrix) -> Result<SingularProfile> {
    if m.rows() > MAX_SVD_SIZE {
        return Err(Error::SizeCap { order: m.rows(), cap: MAX_SVD_SIZE });
    }
    let values = svd(m)?.values.into_iter().map(|s| if s < 0.0 { 0.0 } else { s }).collect();
    Ok(SingularProfile { size: m.rows(), values })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceBound {
    pub trace_abs: f64,
    pub singular_sum: f64,
    pub pass: bool,
}

pub fn verify_trace_bound(m: &CMatrix) -> Result<TraceBound> {
    let trace_abs = m.trace().norm();
    let singular_sum = singular_values(m)?.sum();
    Ok(TraceBound { trace_abs, singular_sum, pass: trace_abs <= singular_sum + 1e-9 * m.rows() as f64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductBounds {
    pub product: SingularProfile,
    /// Indices `k` (one-based) where `s_k(MM')` exceeds its bound.
    pub single_failures: Vec<usize>,
    /// Indices `k` where the prefix product exceeds its bound.
    pub prefix_failures: Vec<usize>,
    pub pass: bool,
}

/// Relative slack of [`verify_product_bounds`].
pub const PRODUCT_SLACK: f64 = 1e-9;

pub fn verify_product_bounds(m: &CMatrix, m2: &CMatrix) -> Result<ProductBounds> {
    if m.rows() != m2.rows() || !m.is_square() || !m2.is_square() {
        return Err(Error::DimensionMismatch("product bounds need square matrices of one size".into()));
    }
    let a = singular_values(m)?;
    let b = singular_values(m2)?;
    let ab = singular_values(&(m * m2))?;
    let d = m.rows();
    let slack = (1.0 + PRODUCT_SLACK).ln();
    let (la, lb, lab) = (a.log_prefix_products(), b.log_prefix_products(), ab.log_prefix_products());
    let mut single_failures = Vec::new();
    let mut prefix_failures = Vec::new();
    for k in 1..=d {
        let bound = (a.s(k) * b.s(1)).min(a.s(1) * b.s(k));
        if ab.s(k) > bound * (1.0 + PRODUCT_SLACK) + f64::MIN_POSITIVE {
            single_failures.push(k);
        }
        if lab[k - 1] > la[k - 1] + lb[k - 1] + slack {
            prefix_failures.push(k);
        }
    }
    let pass = single_failures.is_empty() && prefix_failures.is_empty();
    Ok(ProductBounds { product: ab, single_failures, prefix_failures, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct CosSpectrum {
    /// `|Re lambda_i|`, nonincreasing.
    pub real_parts: Vec<f64>,
    /// Singular values of `(U + U*)/2`, nonincreasing.
    pub singular_values: Vec<f64>,
    pub max_deviation: f64,
}

pub fn cos_spectrum(u: &CMatrix) -> Result<CosSpectrum> {
    let defect = if u.is_square() { u.unitarity_defect() } else { f64::INFINITY };
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation: defect });
    }
    let mut real_parts: Vec<f64> = unitary_eigenvalues(u)?.iter().map(|z| z.re.abs()).collect();
    real_parts.sort_by(|a, b| b.total_cmp(a));
    let mut h = u + &u.adjoint();
    h.scale(0.5);
    let singular_values = singular_values(&h)?.values;
    let max_deviation = real_parts.iter().zip(&singular_values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(CosSpectrum { real_parts, singular_values, max_deviation })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrigReport {
    pub step: f64,
    /// `max (t/2 - sin t)` over the grid on `[0, pi/2]`.
    pub sin_violation: f64,
    /// `max (cos t - exp(-t^2/4))` over the grid on `[0, pi]`.
    pub cos_violation: f64,
}

impl TrigReport {
    pub fn pass(&self) -> bool {
        self.sin_violation <= 1e-12 && self.cos_violation <= 1e-12
    }
}

/// Evaluates both inequalities on the grid `{0, h, 2h, ..}` plus the endpoint.
pub fn trig_bounds(h: f64) -> Result<TrigReport> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::InvalidArgument(format!("grid step {h} must lie in (0, 1e-3]")));
    }
    let grid = |end: f64| {
        let steps = (end / h).floor() as usize;
        (0..=steps).map(move |i| i as f64 * h).chain(std::iter::once(end))
    };
    let sin_violation = grid(PI / 2.0).map(|t| t / 2.0 - t.sin()).fold(f64::NEG_INFINITY, f64::max);
    let cos_violation = grid(PI).map(|t| t.cos() - (-t * t / 4.0).exp()).fold(f64::NEG_INFINITY, f64::max);
    Ok(TrigReport { step: h, sin_violation, cos_violation })
}
