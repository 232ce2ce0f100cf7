//! Characters and explicit irreducible representations.
//!
//! Two backends cover different sizes. [`character_table_dixon`] works from
//! class data alone and handles groups with up to a few hundred classes.
//! [`decompose_regular`] produces unitary matrices, which the trace formula
//! in [`fourier`] needs, but is limited to small groups.

pub mod dixon;
pub mod fourier;
pub mod multiplicity;
pub mod regular;
pub mod table;

pub use dixon::{character_table_dixon, character_table_dixon_with, MAX_CLASSES};
pub use fourier::{fourier_distribution, fourier_probability};
pub use multiplicity::{
    check_multiplicity_bounds, eigenvalue_multiplicities, gluck_alpha, BoundStatus, MultiplicityProfile,
    MultiplicityReport,
};
pub use regular::{decompose_regular, UnitaryIrrep, REGULAR_SIZE_CAP};
pub use table::CharacterTable;

use num_complex::Complex64;

use crate::error::Result;
use crate::group::{ConjugacyClasses, FiniteGroup};

/// The character table spanned by explicit irreps, in the class order of
/// `classes`.
pub fn table_from_irreps(
    group: &FiniteGroup,
    classes: &ConjugacyClasses,
    irreps: &[UnitaryIrrep],
) -> Result<CharacterTable> {
    let values: Vec<Vec<Complex64>> = irreps
        .iter()
        .map(|r| classes.representatives().iter().map(|&g| r.character()[g]).collect())
        .collect();
    CharacterTable::from_class_functions(group, classes, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog;
    use crate::linalg::hermitian_eigen;

    #[test]
    fn dixon_agrees_with_regular_splitting() {
        for name in ["S3", "Q8", "D4", "A4", "S4", "SL2(3)", "SL2(5)"] {
            let g = catalog::named(name).unwrap();
            let classes = ConjugacyClasses::compute(&g);
            let dixon = character_table_dixon_with(&g, &classes).unwrap();
            let irreps = decompose_regular(&g, 11, 1e-6).unwrap();
            let regular = table_from_irreps(&g, &classes, &irreps).unwrap();
            assert!(dixon.same_characters(&regular, 1e-6), "{name}");
        }
    }

    #[test]
    fn multiplicities_match_explicit_eigenvalues() {
        let g = catalog::sl2(5).unwrap();
        let classes = ConjugacyClasses::compute(&g);
        let irreps = decompose_regular(&g, 2, 1e-6).unwrap();
        let table = table_from_irreps(&g, &classes, &irreps).unwrap();
        for (i, irrep) in irreps.iter().enumerate() {
            for class in 0..table.len() {
                let profile = table.multiplicity_profile(i, class).unwrap();
                let k = profile.order as usize;
                // Oracle: eigen-decompose the unitary Phi(g) through the
                // commuting Hermitian pair (U + U*)/2, (U - U*)/2i.
                let u = irrep.matrix(table.representatives()[class]);
                let mut combo = u + &u.adjoint();
                combo.scale(0.5);
                let mut skew = u - &u.adjoint();
                skew.scale(0.5 * std::f64::consts::FRAC_1_PI);
                let h = &combo + &crate::linalg::CMatrix::from_fn(u.rows(), u.cols(), |a, b| skew[(a, b)] * Complex64::new(0.0, -1.0));
                let e = hermitian_eigen(&h).unwrap();
                let mut counts = vec![0u64; k];
                for col in 0..u.rows() {
                    let v = e.vectors.column(col);
                    let uv: Vec<Complex64> = (0..u.rows()).map(|a| (0..u.rows()).map(|b| u[(a, b)] * v[b]).sum()).collect();
                    let lambda: Complex64 = v.iter().zip(&uv).map(|(x, y)| x.conj() * y).sum();
                    let j = (lambda.arg() / std::f64::consts::TAU * k as f64).round().rem_euclid(k as f64) as usize;
                    counts[j] += 1;
                }
                assert_eq!(counts, profile.multiplicities, "irrep {i}, class {class}");
            }
        }
    }
}
