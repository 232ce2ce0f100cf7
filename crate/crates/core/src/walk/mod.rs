//! Random signed products `prod_i Â_i`, where `Â_i` is `A_i` or `A_i^{-1}`
//! with probability 1/2, and the anti-concentration constant
//! `rho_V = sup_B P(prod_i Â_i = B)`.

pub mod bounds;
pub mod dyadic;
pub mod exact;
pub mod monte_carlo;
pub mod sequence;

pub use bounds::{example2_check, loe_binomial_bound, main3_bound, theorem_bound, Example2Report, TheoremBound};
pub use dyadic::Dyadic;
pub use exact::{exact_distribution, rho_exact, rho_prefixes, ExactDistribution, RhoExact};
pub use monte_carlo::{rho_monte_carlo, MonteCarloEstimate};
pub use sequence::{SequenceFile, SignedSequence};

#[cfg(test)]
mod properties {
    use num_bigint::BigUint;
    use proptest::prelude::*;

    use super::*;
    use crate::group::{catalog, FiniteGroup, GroupElement};

    fn groups() -> Vec<FiniteGroup> {
        ["S3", "Q8", "A4", "SL2(3)", "D5"].iter().map(|n| catalog::named(n).unwrap()).collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn conservation_and_enumeration(which in 0usize..5, raw in prop::collection::vec(1usize..1000, 1..12)) {
            let g = &groups()[which];
            let indices: Vec<usize> = raw.iter().map(|r| 1 + r % (g.order() - 1)).collect();
            let seq = SignedSequence::from_indices(g, &indices).unwrap();
            let d = exact_distribution(g, &seq).unwrap();
            prop_assert_eq!(d.total(), BigUint::from(1u32) << indices.len());

            let mut brute = vec![0u64; g.order()];
            for mask in 0u32..(1 << indices.len()) {
                let mut prod = 0;
                for (i, &a) in indices.iter().enumerate() {
                    prod = g.mul(prod, if mask >> i & 1 == 1 { g.inverse(a) } else { a });
                }
                brute[prod] += 1;
            }
            for (c, b) in d.counts().iter().zip(&brute) {
                prop_assert_eq!(c, &BigUint::from(*b));
            }

            // support lies in the generated subgroup
            let sub = FiniteGroup::close_generators(seq.elements(), 10_000).unwrap();
            for h in d.support() {
                prop_assert!(sub.index_of(&g.element(h)).is_some());
            }
        }

        #[test]
        fn reversal_is_inversion(which in 0usize..5, raw in prop::collection::vec(1usize..1000, 1..10)) {
            let g = &groups()[which];
            let indices: Vec<usize> = raw.iter().map(|r| 1 + r % (g.order() - 1)).collect();
            let seq = SignedSequence::from_indices(g, &indices).unwrap();
            let fwd = exact_distribution(g, &seq).unwrap();
            let rev = exact_distribution(g, &seq.reversed()).unwrap();
            for h in 0..g.order() {
                prop_assert_eq!(&rev.counts()[g.inverse(h)], &fwd.counts()[h]);
            }
            prop_assert_eq!(fwd.rho().rho, rev.rho().rho);
        }

        #[test]
        fn torsion_lower_bound(order in 3u32..14, n in 1usize..40) {
            let a = GroupElement::permutation((0..order).map(|i| (i + 1) % order).collect()).unwrap();
            let g = FiniteGroup::close_generators(&[a.clone()], 100).unwrap();
            let seq = SignedSequence::repeated(a, n).unwrap();
            prop_assert!(rho_exact(&g, &seq).unwrap().rho.ge_reciprocal(order as u64));
        }
    }
}
