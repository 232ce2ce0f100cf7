//! End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
//! process exits non-zero if any fails.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use anticonc::charrep::{
    character_table_dixon, character_table_dixon_with, check_multiplicity_bounds, decompose_regular,
    fourier_distribution, table_from_irreps, BoundStatus,
};
use anticonc::embed::{embed_mod_p, Clause, RationalMatrix};
use anticonc::group::{catalog, ConjugacyClasses, FiniteGroup, GroupElement};
use anticonc::linalg::{random_unitary, CMatrix};
use anticonc::spectral::{cos_spectrum, proof_diagnostics, trig_bounds, verify_product_bounds, verify_trace_bound};
use anticonc::walk::{exact_distribution, rho_exact, rho_monte_carlo, theorem_bound, Dyadic, SignedSequence};

type Outcome = Result<String, String>;

/// `(rho, s, n)` of every exact computation, for the uniform-bound sweep.
type Record = (Dyadic, u64, u64);

fn random_sequence(g: &FiniteGroup, n: usize, rng: &mut ChaCha8Rng) -> SignedSequence {
    let id = g.identity();
    let indices: Vec<usize> = (0..n)
        .map(|_| {
            let r = rng.random_range(0..g.order() - 1);
            if r >= id {
                r + 1
            } else {
                r
            }
        })
        .collect();
    SignedSequence::from_indices(g, &indices).unwrap()
}

fn fourier_inversion(records: &mut Vec<Record>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0);
    let mut worst = 0.0f64;
    for name in ["S3", "D4", "Q8", "A4", "S4", "SL2(3)", "SL2(5)"] {
        let g = catalog::named(name).unwrap();
        let irreps = decompose_regular(&g, 1, 1e-6).map_err(|e| format!("{name}: {e}"))?;
        for _ in 0..50 {
            let n = rng.random_range(1..=16);
            let seq = random_sequence(&g, n, &mut rng);
            let exact = exact_distribution(&g, &seq).unwrap();
            let fourier = fourier_distribution(&g, &irreps, &seq).map_err(|e| format!("{name}: {e}"))?;
            let dev = exact
                .probabilities_f64()
                .iter()
                .zip(&fourier)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
            records.push((exact.rho().rho, seq.min_order(), n as u64));
        }
    }
    let detail = format!("max deviation {worst:.2e} over 350 sequences");
    if worst <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Row `n` of Pascal's triangle, built by additions only.
fn pascal_rows(max: usize) -> Vec<Vec<BigUint>> {
    let mut rows = vec![vec![BigUint::one()]];
    for n in 1..=max {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let a = if k > 0 { prev[k - 1].clone() } else { BigUint::zero() };
                let b = if k < n { prev[k].clone() } else { BigUint::zero() };
                a + b
            })
            .collect();
        rows.push(row);
    }
    rows
}

fn binomial_law_of_repeated_element(records: &mut Vec<Record>) -> Outcome {
    let pascal = pascal_rows(64);
    // unipotent of order 131 > 2n, and the cyclic group of least odd order > n
    let u = GroupElement::matrix(131, &[vec![1, 1], vec![0, 1]]).unwrap();
    let big = FiniteGroup::close_generators(&[u.clone()], 1000).unwrap();
    let mut checked = 0;
    for n in 1..=64usize {
        let want = &pascal[n][n / 2];
        let seq = SignedSequence::repeated(u.clone(), n).unwrap();
        let r = rho_exact(&big, &seq).unwrap();
        if r.rho.denom_exp as usize != n || &r.rho.count != want {
            return Err(format!("order 131, n = {n}: got {}/2^{}", r.rho.count, r.rho.denom_exp));
        }
        records.push((r.rho, seq.min_order(), n as u64));

        let k = if (n + 1) % 2 == 1 { n + 1 } else { n + 2 };
        let c = catalog::cyclic(k.max(3)).unwrap();
        let gen = c.element(c.generators()[0]);
        let seq = SignedSequence::repeated(gen, n).unwrap();
        let r = rho_exact(&c, &seq).unwrap();
        if &r.rho.count != want {
            return Err(format!("cyclic order {k}, n = {n}: got {}/2^{}", r.rho.count, r.rho.denom_exp));
        }
        checked += 2;
    }
    Ok(format!("{checked} exact matches for n = 1..64"))
}

fn torsion_lower_bound(records: &mut Vec<Record>) -> Outcome {
    let mut min_margin = f64::INFINITY;
    for s in 3..=12usize {
        let g = catalog::cyclic(s).unwrap();
        let a = g.element(g.generators()[0]);
        if g.element_order(&a).unwrap() != s as u64 {
            return Err(format!("generator of C{s} has the wrong order"));
        }
        for n in [10usize, 50, 100] {
            let r = rho_exact(&g, &SignedSequence::repeated(a.clone(), n).unwrap()).unwrap().rho;
            // rho >= 1/s  <=>  count * s >= 2^n
            if &r.count * BigUint::from(s) < BigUint::one() << n {
                return Err(format!("s = {s}, n = {n}: rho = {} < 1/s", r.to_f64()));
            }
            min_margin = min_margin.min(r.to_f64() * s as f64);
            records.push((r, s as u64, n as u64));
        }
    }
    Ok(format!("30 cases, min s*rho = {min_margin:.4}"))
}

fn integer_shift_lower_bound(records: &mut Vec<Record>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE2);
    let mut tightest = f64::INFINITY;
    for i in 0..100 {
        let k: i64 = rng.random_range(1..=5);
        let n: usize = rng.random_range(20..=200);
        let shifts: Vec<i64> = (0..n).map(|_| rng.random_range(1..=k) * if rng.random() { 1 } else { -1 }).collect();
        // independent law of the signed sum
        let mut law: HashMap<i64, BigUint> = HashMap::from([(0, BigUint::one())]);
        for &a in &shifts {
            let mut next: HashMap<i64, BigUint> = HashMap::new();
            for (x, c) in &law {
                *next.entry(x + a).or_default() += c;
                *next.entry(x - a).or_default() += c;
            }
            law = next;
        }
        let max = law.values().max().unwrap().clone();
        let report = anticonc::walk::example2_check(&shifts).unwrap();
        if report.rho.count != max {
            return Err(format!("instance {i}: library law disagrees with the direct one"));
        }
        let kk = shifts.iter().map(|a| a.unsigned_abs()).max().unwrap();
        // max / 2^n >= 1 / (4 K sqrt n)  <=>  16 K^2 max^2 n >= 4^n
        let lhs = &max * &max * BigUint::from(16 * kk * kk * n as u64);
        if lhs < BigUint::one() << (2 * n) || !report.pass {
            return Err(format!("instance {i}: K = {kk}, n = {n}, rho = {}", report.rho_f64));
        }
        tightest = tightest.min(report.rho_f64 * 4.0 * kk as f64 * (n as f64).sqrt());
        // integer shifts have infinite order; use s = u64::MAX
        records.push((report.rho, u64::MAX, n as u64));
    }
    Ok(format!("100 instances, min rho*4K*sqrt(n) = {tightest:.3}"))
}

/// An element of order `p + 1` in `SL_2(p)`, from the companion matrices
/// `[[0, -1], [1, t]]`.
fn nonsplit_torus_generator(p: u32) -> GroupElement {
    (0..p as i64)
        .map(|t| GroupElement::matrix(p, &[vec![0, -1], vec![1, t]]).unwrap())
        .find(|a| a.order_capped(p as u64 + 2) == Some(p as u64 + 1))
        .expect("SL2(p) contains elements of order p + 1")
}

fn uniform_bound_consistency(records: &[Record]) -> Outcome {
    let mut vacuous = 0;
    for (rho, s, n) in records {
        if !rho.le_scaled_max_bound(141, *s, *n) {
            return Err(format!("rho = {} exceeds 141 max(1/s, 1/sqrt n) at s = {s}, n = {n}", rho.to_f64()));
        }
        if theorem_bound(*s, *n).vacuous {
            vacuous += 1;
        }
    }
    // spot check: order 150 in SL2(149), n = 256
    let a = nonsplit_torus_generator(149);
    let h = FiniteGroup::close_generators(&[a.clone()], 1000).unwrap();
    let seq = SignedSequence::repeated(a, 256).unwrap();
    let r = rho_exact(&h, &seq).unwrap().rho;
    // rho <= 141/150  <=>  150 count <= 141 2^256
    let holds = &r.count * BigUint::from(150u32) <= BigUint::from(141u32) << 256;
    let spot = theorem_bound(150, 256);
    let detail = format!(
        "{} exact values, {vacuous} vacuous; |<A>| = {}, rho = {:.5} <= 0.94 (bound at s = 150, n = 256 is {:.2}, vacuous = {})",
        records.len(),
        h.order(),
        r.to_f64(),
        spot.value,
        spot.vacuous
    );
    if holds && h.order() == 150 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn multiplicity_bounds_sl2_49() -> Outcome {
    let g = catalog::named("SL2(49)").unwrap();
    let table = character_table_dixon(&g).map_err(|e| e.to_string())?;
    let sum: u64 = table.degrees().iter().map(|d| d * d).sum();
    if sum != 117_600 || g.order() != 117_600 {
        return Err(format!("sum of squared degrees {sum}, |G| = {}", g.order()));
    }
    let report = check_multiplicity_bounds(&table, 1.0 / 6.0).map_err(|e| e.to_string())?;
    let bad: Vec<_> = report.entries.iter().filter(|e| e.status != BoundStatus::Pass).collect();
    let detail = format!(
        "{} classes, {} (character, class) pairs, max ratio {:.12}",
        table.len(),
        report.entries.len(),
        report.max_ratio.unwrap_or(0.0)
    );
    if bad.is_empty() && !report.entries.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {} entries not passing, first {:?}", bad.len(), bad[0].status))
    }
}

fn singular_value_inequalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    for i in 0..1000 {
        let d = rng.random_range(2..=20);
        let a = CMatrix::gaussian(d, d, &mut rng);
        let b = CMatrix::gaussian(d, d, &mut rng);
        if !verify_trace_bound(&a).unwrap().pass || !verify_product_bounds(&a, &b).unwrap().pass {
            return Err(format!("pair {i} (size {d}) violates a singular-value inequality"));
        }
    }
    let mut cos_worst = 0.0f64;
    for d in 2..=16 {
        for _ in 0..200 {
            cos_worst = cos_worst.max(cos_spectrum(&random_unitary(d, &mut rng)).unwrap().max_deviation);
        }
    }
    let trig = trig_bounds(1e-4).unwrap();
    let detail = format!(
        "1000 pairs; cos identity max deviation {cos_worst:.1e} over 3000 unitaries; trig violations {:.1e}, {:.1e}",
        trig.sin_violation, trig.cos_violation
    );
    if cos_worst <= 1e-8 && trig.pass() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn prefix_product_inequality() -> Outcome {
    let g = catalog::sl2(5).unwrap();
    let irreps = decompose_regular(&g, 1, 1e-6).map_err(|e| e.to_string())?;
    let rho = irreps.iter().find(|r| r.dim() == 5).ok_or("no 5-dimensional irrep")?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x56);
    let id = GroupElement::identity(g.ambient());
    let mut worst = f64::NEG_INFINITY;
    for i in 0..20 {
        let seq = random_sequence(&g, 10, &mut rng);
        let d = proof_diagnostics(5, 2, &g, rho, &seq, &id).map_err(|e| e.to_string())?;
        for r in &d.rows {
            worst = worst.max(r.for_s6_lhs / r.for_s6_rhs);
        }
        if !d.for_s6_holds {
            return Err(format!("sequence {i} violates the prefix inequality"));
        }
    }
    Ok(format!("20 sequences, max lhs/rhs = {worst:.6}"))
}

fn monte_carlo_consistency() -> Outcome {
    let g = catalog::sl2(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9C);
    let samples = 100_000u64;
    let mut within = 0;
    for i in 0..20u64 {
        let n = rng.random_range(4..=16);
        let seq = random_sequence(&g, n, &mut rng);
        let exact = rho_exact(&g, &seq).unwrap().rho.to_f64();
        let one = rho_monte_carlo(&seq, samples, i, 1, 1 << 20).map_err(|e| e.to_string())?;
        let four = rho_monte_carlo(&seq, samples, i, 4, 1 << 20).map_err(|e| e.to_string())?;
        if one != four {
            return Err(format!("sequence {i}: estimates differ between 1 and 4 threads"));
        }
        if (one.plug_in - exact).abs() <= 5.0 * (exact * (1.0 - exact) / samples as f64).sqrt() {
            within += 1;
        }
    }
    let detail = format!("{within}/20 within 5 sigma; threads 1 and 4 identical");
    if within >= 19 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn order_preserving_embedding() -> Outcome {
    let cases: [(Vec<Vec<i64>>, u64, Option<u64>, Clause); 3] = [
        (vec![vec![1, 1], vec![0, 1]], 5, Some(5), Clause::AtLeastN),
        (vec![vec![-1, 0], vec![0, -1]], 10, Some(3), Clause::Exact),
        (vec![vec![2, 0], vec![0, 1]], 6, None, Clause::AtLeastN),
    ];
    let mut summary = Vec::new();
    for (rows, n, want_p, clause) in cases {
        let a = RationalMatrix::from_integers(&rows).unwrap();
        let e = embed_mod_p(&[a], n, 2).map_err(|e| e.to_string())?;
        let r = &e.reports[0];
        // independent order count in GL_2(p)
        let img = &e.images[0];
        let mut x = img.clone();
        let mut k = 1u64;
        while !x.is_identity() {
            x = x.mul(img).unwrap();
            k += 1;
        }
        let ok = want_p.is_none_or(|p| p == e.p)
            && r.clause == clause
            && r.satisfied
            && k == r.image_order
            && match clause {
                Clause::Exact => Some(k) == r.original_order,
                Clause::AtLeastN => k >= n,
            };
        if !ok {
            return Err(format!("{rows:?}: p = {}, image order {k}, report {r:?}", e.p));
        }
        summary.push(format!("p = {} order {k}", e.p));
    }
    Ok(summary.join("; "))
}

fn character_engine_agreement() -> Outcome {
    let mut out = Vec::new();
    for name in ["S4", "SL2(3)"] {
        let g = catalog::named(name).unwrap();
        let classes = ConjugacyClasses::compute(&g);
        let dixon = character_table_dixon_with(&g, &classes).map_err(|e| e.to_string())?;
        let irreps = decompose_regular(&g, 3, 1e-6).map_err(|e| e.to_string())?;
        let regular = table_from_irreps(&g, &classes, &irreps).map_err(|e| e.to_string())?;
        let sd: u64 = dixon.degrees().iter().map(|d| d * d).sum();
        let sr: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
        if !dixon.same_characters(&regular, 1e-6) || sd != g.order() as u64 || sr != g.order() {
            return Err(format!("{name}: tables differ or degree sums {sd}, {sr} != {}", g.order()));
        }
        out.push(format!("{name}: {} characters agree", dixon.len()));
    }
    Ok(out.join("; "))
}

fn main() {
    let mut records = Vec::new();
    let mut failures = 0;
    let mut report = |label: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("PASS  {label:<36} {d} ({secs:.1}s)"),
            Err(d) => {
                failures += 1;
                println!("FAIL  {label:<36} {d} ({secs:.1}s)");
            }
        }
    };
    report("1  fourier inversion", &mut || fourier_inversion(&mut records));
    report("2  binomial law, repeated element", &mut || binomial_law_of_repeated_element(&mut records));
    report("3  torsion lower bound 1/s", &mut || torsion_lower_bound(&mut records));
    report("4  integer-shift lower bound", &mut || integer_shift_lower_bound(&mut records));
    let snapshot = records.clone();
    report("5  uniform upper bound consistency", &mut || uniform_bound_consistency(&snapshot));
    report("6  multiplicity bounds on SL2(49)", &mut multiplicity_bounds_sl2_49);
    report("7  singular-value inequalities", &mut singular_value_inequalities);
    report("8  prefix product inequality", &mut prefix_product_inequality);
    report("9  monte-carlo consistency", &mut monte_carlo_consistency);
    report("10 order-preserving embedding", &mut order_preserving_embedding);
    report("11 character engine agreement", &mut character_engine_agreement);
    if failures > 0 {
        println!("{failures} acceptance check(s) failed");
        std::process::exit(1);
    }
}
