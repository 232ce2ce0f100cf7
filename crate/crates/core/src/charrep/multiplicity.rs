//! Eigenvalue multiplicities of `Phi(g)` from character values, and the
//! bound `(1/k1 - a) chi(1) < m < (1/k1 + a) chi(1)` that holds whenever
//! `|chi(x)| <= a chi(1)` off the center.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::table::CharacterTable;
use crate::error::{Error, Result};

/// Distance from an integer tolerated before rounding a multiplicity.
pub const MULTIPLICITY_TOL: f64 = 1e-6;

/// Slack on the hypothesis `|chi(x)|/chi(1) <= alpha`; the bound is attained
/// exactly in some tables, and floating character values may overshoot it.
pub const HYPOTHESIS_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicityProfile {
    /// Element (or class representative) index.
    pub element: usize,
    /// `k = ord(g)`.
    pub order: u64,
    /// `k1`, the order of `g Z(G)` in `G/Z(G)`.
    pub central_order: u64,
    /// `eps = exp(2 pi i / k)` as `[re, im]`.
    pub epsilon: [f64; 2],
    /// `multiplicities[j]` belongs to the eigenvalue `eps^j`.
    pub multiplicities: Vec<u64>,
}

/// `mult_j = (1/k) sum_i chi(g^i) eps^{-ij}` from `powers[i] = chi(g^i)`.
pub fn eigenvalue_multiplicities(
    powers: &[Complex64],
    element: usize,
    central_order: u64,
    degree: u64,
) -> Result<MultiplicityProfile> {
    let k = powers.len();
    if k == 0 {
        return Err(Error::InvalidArgument("no powers given".into()));
    }
    let mut multiplicities = Vec::with_capacity(k);
    for j in 0..k {
        let sum: Complex64 = powers
            .iter()
            .enumerate()
            .map(|(i, &chi)| chi * Complex64::from_polar(1.0, -TAU * ((i * j) % k) as f64 / k as f64))
            .sum();
        let value = sum / k as f64;
        let rounded = value.re.round();
        if (value - Complex64::new(rounded, 0.0)).norm() > MULTIPLICITY_TOL || rounded < 0.0 {
            return Err(Error::NonIntegralMultiplicity { value: value.re });
        }
        multiplicities.push(rounded as u64);
    }
    let total: u64 = multiplicities.iter().sum();
    if total != degree {
        return Err(Error::NonIntegralMultiplicity { value: total as f64 });
    }
    let eps = Complex64::from_polar(1.0, TAU / k as f64);
    Ok(MultiplicityProfile { element, order: k as u64, central_order, epsilon: [eps.re, eps.im], multiplicities })
}

impl CharacterTable {
    /// Profile of `chi_i` at the representative of `class`.
    pub fn multiplicity_profile(&self, i: usize, class: usize) -> Result<MultiplicityProfile> {
        eigenvalue_multiplicities(
            &self.values_on_powers(i, class),
            self.representatives()[class],
            self.central_order(class),
            self.degrees()[i],
        )
    }
}

/// `max |chi(x)|/chi(1)` over nonlinear `chi` and noncentral `x`, or `None`
/// when every character is linear.
pub fn gluck_alpha(table: &CharacterTable) -> Option<f64> {
    (0..table.len())
        .filter(|&i| table.degrees()[i] > 1)
        .map(|i| character_ratio(table, i))
        .reduce(f64::max)
}

fn character_ratio(table: &CharacterTable, i: usize) -> f64 {
    let d = table.degrees()[i] as f64;
    (0..table.len())
        .filter(|&c| !table.is_central(c))
        .map(|c| table.character(i)[c].norm() / d)
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Pass,
    Fail,
    /// `|chi(x)|/chi(1) > alpha` somewhere off the center; nothing asserted.
    HypothesisFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub character: usize,
    pub class: usize,
    pub degree: u64,
    pub profile: MultiplicityProfile,
    pub lower: f64,
    pub upper: f64,
    /// The open interval contains `[0, chi(1)]`.
    pub vacuous: bool,
    pub status: BoundStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityReport {
    pub alpha: f64,
    pub max_ratio: Option<f64>,
    pub entries: Vec<BoundEntry>,
    pub passed: usize,
    pub failed: usize,
    pub hypothesis_failed: usize,
    pub vacuous: usize,
}

impl MultiplicityReport {
    /// No entry violates the bound while its hypothesis holds.
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Checks every nonlinear character at every noncentral class. Only
/// eigenvalues that occur (positive multiplicity) are tested.
pub fn check_multiplicity_bounds(table: &CharacterTable, alpha: f64) -> Result<MultiplicityReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha = {alpha} is outside (0, 1)")));
    }
    let mut entries = Vec::new();
    for i in 0..table.len() {
        let degree = table.degrees()[i];
        if degree == 1 {
            continue;
        }
        let hypothesis = character_ratio(table, i) <= alpha + HYPOTHESIS_SLACK;
        for class in (0..table.len()).filter(|&c| !table.is_central(c)) {
            let profile = table.multiplicity_profile(i, class)?;
            let k1 = profile.central_order as f64;
            let d = degree as f64;
            let lower = (1.0 / k1 - alpha) * d;
            let upper = (1.0 / k1 + alpha) * d;
            let inside = profile.multiplicities.iter().filter(|&&m| m > 0).all(|&m| lower < m as f64 && (m as f64) < upper);
            let status = match (hypothesis, inside) {
                (false, _) => BoundStatus::HypothesisFailed,
                (true, true) => BoundStatus::Pass,
                (true, false) => BoundStatus::Fail,
            };
            entries.push(BoundEntry {
                character: i,
                class,
                degree,
                profile,
                lower,
                upper,
                vacuous: lower < 0.0 && upper > d,
                status,
            });
        }
    }
    let count = |s: BoundStatus| entries.iter().filter(|e| e.status == s).count();
    Ok(MultiplicityReport {
        alpha,
        max_ratio: gluck_alpha(table),
        passed: count(BoundStatus::Pass),
        failed: count(BoundStatus::Fail),
        hypothesis_failed: count(BoundStatus::HypothesisFailed),
        vacuous: entries.iter().filter(|e| e.vacuous).count(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charrep::character_table_dixon;
    use crate::group::catalog;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn identity_and_linear_cases() {
        let p = eigenvalue_multiplicities(&[c(3.0)], 0, 1, 3).unwrap();
        assert_eq!(p.multiplicities, vec![3]);
        let w = Complex64::from_polar(1.0, TAU / 3.0);
        let p = eigenvalue_multiplicities(&[c(1.0), w, w * w], 4, 3, 1).unwrap();
        assert_eq!(p.multiplicities, vec![0, 1, 0]);
    }

    #[test]
    fn s3_rotation_representation() {
        // Oracle: the plane rotation by 2pi/3 has eigenvalues w, w^2.
        let p = eigenvalue_multiplicities(&[c(2.0), c(-1.0), c(-1.0)], 1, 3, 2).unwrap();
        assert_eq!(p.multiplicities, vec![0, 1, 1]);
        assert!(eigenvalue_multiplicities(&[c(2.0), c(-0.5), c(-1.0)], 1, 3, 2).is_err());
    }

    #[test]
    fn alpha_values() {
        let t = character_table_dixon(&catalog::symmetric(3).unwrap()).unwrap();
        assert!((gluck_alpha(&t).unwrap() - 0.5).abs() < 1e-12);
        let t = character_table_dixon(&catalog::cyclic(7).unwrap()).unwrap();
        assert_eq!(gluck_alpha(&t), None);
        let report = check_multiplicity_bounds(&t, 0.3).unwrap();
        assert!(report.entries.is_empty() && report.all_pass());
    }

    #[test]
    fn small_alpha_reports_hypothesis_failures() {
        let t = character_table_dixon(&catalog::symmetric(4).unwrap()).unwrap();
        let report = check_multiplicity_bounds(&t, 0.05).unwrap();
        assert_eq!(report.hypothesis_failed, report.entries.len());
        assert!(report.all_pass() && report.passed == 0);
    }

    #[test]
    fn central_order_in_sl2_5() {
        let g = catalog::sl2(5).unwrap();
        let t = character_table_dixon(&g).unwrap();
        for class in 0..t.len() {
            let k1 = t.central_order(class);
            let k = t.element_orders()[class];
            if t.is_central(class) {
                assert_eq!(k1, 1);
            } else {
                // Z = {+-1}, so k1 is k or k/2
                assert!(k1 == k || 2 * k1 == k, "{k1} vs {k}");
            }
        }
    }
}
