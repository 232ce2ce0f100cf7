//! Point probabilities of the signed product from the irreducible
//! representations:
//! `P(prod = B) = (1/|G|) sum_Phi dim(Phi) tr(prod_i (Phi(A_i) + Phi(A_i^{-1}))/2 * Phi(B^{-1}))`.

use num_complex::Complex64;

use super::regular::UnitaryIrrep;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::linalg::CMatrix;
use crate::walk::SignedSequence;

/// Largest tolerated imaginary part of a probability.
pub const IMAG_TOL: f64 = 1e-9;

fn check_complete(group: &FiniteGroup, irreps: &[UnitaryIrrep]) -> Result<()> {
    let sum: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
    if sum != group.order() || irreps.iter().any(|r| r.matrices().len() != group.order()) {
        return Err(Error::IncompleteIrreps { sum, order: group.order() });
    }
    Ok(())
}

/// `prod_i B_i` with `B_i = (Phi(A_i) + Phi(A_i^{-1}))/2`, left to right.
pub fn averaged_product(group: &FiniteGroup, irrep: &UnitaryIrrep, indices: &[usize]) -> CMatrix {
    let mut m = CMatrix::identity(irrep.dim());
    for &a in indices {
        m = &m * &averaged_step(group, irrep, a);
    }
    m
}

/// `B_i = (Phi(A) + Phi(A^{-1}))/2`.
pub fn averaged_step(group: &FiniteGroup, irrep: &UnitaryIrrep, a: usize) -> CMatrix {
    let mut b = irrep.matrix(a) + irrep.matrix(group.inverse(a));
    b.scale(0.5);
    b
}

fn real_part(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::ImagTooLarge { imag: z.im });
    }
    Ok(z.re)
}

/// `tr(M N)` without forming the product.
fn trace_of_product(m: &CMatrix, n: &CMatrix) -> Complex64 {
    let d = m.rows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            s += m[(i, j)] * n[(j, i)];
        }
    }
    s
}

pub fn fourier_probability(
    group: &FiniteGroup,
    irreps: &[UnitaryIrrep],
    seq: &SignedSequence,
    target: &GroupElement,
) -> Result<f64> {
    check_complete(group, irreps)?;
    let indices = seq.indices_in(group)?;
    let b_inv = group.inverse(group.require_index(target)?);
    let total: Complex64 = irreps
        .iter()
        .map(|r| trace_of_product(&averaged_product(group, r, &indices), r.matrix(b_inv)) * r.dim() as f64)
        .sum();
    real_part(total / group.order() as f64)
}

/// The whole law at once, indexed by element.
pub fn fourier_distribution(group: &FiniteGroup, irreps: &[UnitaryIrrep], seq: &SignedSequence) -> Result<Vec<f64>> {
    check_complete(group, irreps)?;
    let indices = seq.indices_in(group)?;
    let products: Vec<CMatrix> = irreps.iter().map(|r| averaged_product(group, r, &indices)).collect();
    (0..group.order())
        .map(|b| {
            let b_inv = group.inverse(b);
            let total: Complex64 = irreps
                .iter()
                .zip(&products)
                .map(|(r, m)| trace_of_product(m, r.matrix(b_inv)) * r.dim() as f64)
                .sum();
            real_part(total / group.order() as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charrep::decompose_regular;
    use crate::group::catalog;

    #[test]
    fn three_cycle_twice_returns_with_probability_half() {
        let g = catalog::symmetric(3).unwrap();
        let irreps = decompose_regular(&g, 5, 1e-6).unwrap();
        let a = GroupElement::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let seq = SignedSequence::repeated(a, 2).unwrap();
        let id = GroupElement::identity(g.ambient());
        assert!((fourier_probability(&g, &irreps, &seq, &id).unwrap() - 0.5).abs() < 1e-12);
        // a transposition is outside <(0 1 2)>
        let t = GroupElement::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(fourier_probability(&g, &irreps, &seq, &t).unwrap().abs() < 1e-9);
        let law = fourier_distribution(&g, &irreps, &seq).unwrap();
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn incomplete_sets_are_rejected() {
        let g = catalog::symmetric(3).unwrap();
        let mut irreps = decompose_regular(&g, 5, 1e-6).unwrap();
        irreps.pop();
        let a = g.element(1);
        let seq = SignedSequence::repeated(a.clone(), 2).unwrap();
        assert!(matches!(
            fourier_probability(&g, &irreps, &seq, &a),
            Err(Error::IncompleteIrreps { sum: 2, order: 6 })
        ));
    }
}
