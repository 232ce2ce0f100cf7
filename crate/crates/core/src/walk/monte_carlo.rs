//! Monte-Carlo estimate of `rho_V` from raw elements.
//!
//! Sample `i` draws its signs from a ChaCha8 stream selected by `i` under the
//! user seed, so the set of sampled products, and hence every reported number,
//! is independent of how samples are split across threads.

use std::collections::HashMap;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sequence::SignedSequence;
use crate::error::{Error, Result};

/// Samples handled by one task.
const BLOCK: u64 = 4096;

/// Default bound on the number of distinct products tracked.
pub const DEFAULT_DISTINCT_CAP: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub samples: u64,
    pub seed: u64,
    /// Largest observed frequency; biased upward as an estimate of the supremum.
    pub plug_in: f64,
    pub max_count: u64,
    /// Words of the most frequent product (lexicographically least on ties).
    pub argmax: Vec<u32>,
    pub distinct_products: usize,
    /// `sqrt(p(1-p)/samples)` at the plug-in value.
    pub std_error: f64,
}

/// Signs for one sample: bit `i` selects `A_i^{-1}`.
fn sample_signs(seed: u64, index: u64, n: usize, out: &mut Vec<u64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    out.clear();
    out.extend((0..n.div_ceil(64)).map(|_| rng.next_u64()));
}

pub fn rho_monte_carlo(
    seq: &SignedSequence,
    samples: u64,
    seed: u64,
    threads: usize,
    distinct_cap: usize,
) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let ambient = seq.ambient().clone();
    let width = ambient.word_len();
    let steps: Vec<(Vec<u32>, Vec<u32>)> = seq
        .elements()
        .iter()
        .map(|g| (g.words().to_vec(), g.inverse().words().to_vec()))
        .collect();
    let n = steps.len();
    let identity = ambient.identity_words();

    let run_block = |block: u64| -> HashMap<Vec<u32>, u64> {
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        let mut signs = Vec::new();
        let mut cur = vec![0u32; width];
        let mut next = vec![0u32; width];
        let end = ((block + 1) * BLOCK).min(samples);
        for index in block * BLOCK..end {
            sample_signs(seed, index, n, &mut signs);
            cur.copy_from_slice(&identity);
            for (i, (fwd, back)) in steps.iter().enumerate() {
                let s = if signs[i / 64] >> (i % 64) & 1 == 1 { back } else { fwd };
                ambient.mul_into(&cur, s, &mut next);
                std::mem::swap(&mut cur, &mut next);
            }
            *counts.entry(cur.clone()).or_insert(0) += 1;
        }
        counts
    };

    let blocks = samples.div_ceil(BLOCK);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let partials: Vec<HashMap<Vec<u32>, u64>> =
        pool.install(|| (0..blocks).into_par_iter().map(run_block).collect());

    let mut merged: HashMap<Vec<u32>, u64> = HashMap::new();
    for part in partials {
        for (k, v) in part {
            *merged.entry(k).or_insert(0) += v;
        }
        if merged.len() > distinct_cap {
            return Err(Error::CapExceeded { cap: distinct_cap });
        }
    }
    let (argmax, max_count) = merged
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, &v)| (k.clone(), v))
        .expect("at least one sample");
    let plug_in = max_count as f64 / samples as f64;
    Ok(MonteCarloEstimate {
        samples,
        seed,
        plug_in,
        max_count,
        argmax,
        distinct_products: merged.len(),
        std_error: (plug_in * (1.0 - plug_in) / samples as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog, GroupElement};
    use crate::walk::exact::rho_exact;

    #[test]
    fn involutions_are_deterministic() {
        let t = GroupElement::from_cycles(3, &[&[0, 1]]).unwrap();
        let seq = SignedSequence::repeated(t, 3).unwrap();
        let est = rho_monte_carlo(&seq, 1000, 7, 2, 100).unwrap();
        assert_eq!(est.plug_in, 1.0);
        assert_eq!(est.distinct_products, 1);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let g = catalog::sl2(5).unwrap();
        let seq = SignedSequence::from_indices(&g, &[3, 9, 27, 81, 100, 5, 60, 7]).unwrap();
        let a = rho_monte_carlo(&seq, 20_000, 42, 1, DEFAULT_DISTINCT_CAP).unwrap();
        let b = rho_monte_carlo(&seq, 20_000, 42, 4, DEFAULT_DISTINCT_CAP).unwrap();
        assert_eq!(a, b);
        let c = rho_monte_carlo(&seq, 20_000, 43, 4, DEFAULT_DISTINCT_CAP).unwrap();
        assert_ne!(a.max_count, 0);
        assert_eq!(c.samples, 20_000);
    }

    #[test]
    fn agrees_with_exact_oracle_on_sl2_5() {
        let g = catalog::sl2(5).unwrap();
        let seq = SignedSequence::from_indices(&g, &[1, 14, 33, 52, 71, 90, 109, 2]).unwrap();
        let exact = rho_exact(&g, &seq).unwrap().rho.to_f64();
        let est = rho_monte_carlo(&seq, 100_000, 2024, 4, DEFAULT_DISTINCT_CAP).unwrap();
        let sigma = (exact * (1.0 - exact) / 1e5).sqrt();
        assert!((est.plug_in - exact).abs() <= 5.0 * sigma, "{} vs {exact}", est.plug_in);
    }

    #[test]
    fn distinct_cap_is_enforced() {
        let g = catalog::sl2(5).unwrap();
        let seq = SignedSequence::from_indices(&g, &[3, 9, 27, 81, 100, 5]).unwrap();
        assert!(matches!(rho_monte_carlo(&seq, 10_000, 1, 1, 4), Err(Error::CapExceeded { cap: 4 })));
        assert!(rho_monte_carlo(&seq, 0, 1, 1, 4).is_err());
    }
}
