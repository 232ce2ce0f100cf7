use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use anticonc::charrep::{
    self, character_table_dixon, check_multiplicity_bounds, decompose_regular, fourier_distribution, gluck_alpha,
    MultiplicityReport, UnitaryIrrep,
};
use anticonc::embed::{self, EmbedFile};
use anticonc::group::io::element_to_json;
use anticonc::group::{catalog, exponent, ConjugacyClasses, FiniteGroup, GroupElement, GroupFile, DEFAULT_CLOSURE_CAP};
use anticonc::linalg::{random_unitary, CMatrix};
use anticonc::spectral::{self, proof_diagnostics};
use anticonc::walk::{
    self, example2_check, loe_binomial_bound, main3_bound, rho_exact, rho_monte_carlo, rho_prefixes, theorem_bound,
    SequenceFile, SignedSequence,
};
use anticonc::walk::sequence::MAX_SEQUENCE_LENGTH;
use anticonc::{Error, Result};

use crate::config::{Format, RunConfig};

pub enum Body {
    Json(Value),
    Csv(String),
}

pub struct Outcome {
    pub body: Body,
    /// False when a verification failed (exit code 1).
    pub pass: bool,
}

impl Outcome {
    fn json(value: Value, pass: bool) -> Self {
        Outcome { body: Body::Json(value), pass }
    }
}

const DEFAULT_SAMPLES: u64 = 100_000;
const MAX_LISTED_MAXIMIZERS: usize = 64;

fn group_file(cfg: &RunConfig) -> Result<GroupFile> {
    let spec = cfg.group.as_deref().ok_or_else(|| Error::InvalidArgument("--group is required".into()))?;
    if Path::new(spec).exists() {
        GroupFile::load(Path::new(spec))
    } else {
        // not a file: try the catalog
        catalog::named(spec).map_err(|_| {
            Error::InvalidGroupSpec(format!("{spec:?} is neither a readable file nor a known group name"))
        })?;
        Ok(GroupFile::Named { name: spec.to_string() })
    }
}

fn build_group(cfg: &RunConfig) -> Result<FiniteGroup> {
    group_file(cfg)?.build(cfg.cap.unwrap_or(DEFAULT_CLOSURE_CAP))
}

/// Uniform non-identity elements, drawn from one seeded stream.
pub fn random_sequence(group: &FiniteGroup, n: usize, seed: u64) -> Result<SignedSequence> {
    if group.order() < 2 {
        return Err(Error::InvalidArgument("the trivial group has no non-identity elements".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = group.identity();
    let indices: Vec<usize> = (0..n)
        .map(|_| {
            let r = rng.random_range(0..group.order() - 1);
            if r >= id {
                r + 1
            } else {
                r
            }
        })
        .collect();
    SignedSequence::from_indices(group, &indices)
}

fn needs_group_for_sequence(cfg: &RunConfig, file: &GroupFile) -> Result<bool> {
    if cfg.random.is_some() {
        return Ok(true);
    }
    let path = cfg.seq.as_ref().ok_or_else(|| Error::InvalidArgument("--seq or --random is required".into()))?;
    Ok(SequenceFile::load(path)?.uses_indices(&file.generators()?.ambient))
}

fn load_sequence(cfg: &RunConfig, file: &GroupFile, group: Option<&FiniteGroup>) -> Result<SignedSequence> {
    if let Some(n) = cfg.random {
        let group = group.ok_or_else(|| Error::InvalidArgument("--random needs the enumerated group".into()))?;
        return random_sequence(group, n, cfg.seed());
    }
    let path = cfg.seq.as_ref().ok_or_else(|| Error::InvalidArgument("--seq or --random is required".into()))?;
    SequenceFile::load(path)?.resolve(&file.generators()?.ambient, group)
}

fn ambient_prime(group: &anticonc::group::Ambient) -> Option<u64> {
    match group {
        anticonc::group::Ambient::MatrixModP { p, .. } => Some(*p as u64),
        _ => None,
    }
}

fn cmatrix_json(m: &CMatrix) -> Value {
    json!((0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn order(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let group = file.build(cfg.cap.unwrap_or(DEFAULT_CLOSURE_CAP));
    let (group_order, cap_exceeded) = match &group {
        Ok(g) => (Some(g.order()), false),
        Err(e) if e.is_resource_cap() => (None, true),
        Err(_) => return Err(group.err().unwrap()),
    };
    let mut out = json!({ "group_order": group_order, "cap_exceeded": cap_exceeded });
    if cfg.seq.is_some() || cfg.random.is_some() {
        let seq = load_sequence(cfg, &file, group.as_ref().ok())?;
        out["sequence"] = json!({
            "n": seq.len(),
            "orders": seq.orders(),
            "s": seq.min_order(),
        });
    }
    Ok(Outcome::json(out, true))
}

pub fn closure(cfg: &RunConfig) -> Result<Outcome> {
    let g = build_group(cfg)?;
    let classes = ConjugacyClasses::compute(&g);
    let orders = classes.orders(&g);
    Ok(Outcome::json(
        json!({
            "order": g.order(),
            "generators": g.generators().iter().map(|&i| element_to_json(&g.element(i))).collect::<Vec<_>>(),
            "classes": classes.len(),
            "class_sizes": classes.sizes(),
            "class_orders": orders,
            "exponent": exponent(&orders),
            "center_order": classes.center().len(),
        }),
        true,
    ))
}

fn bounds_json(s: u64, n: u64, p: Option<u64>) -> Value {
    let t = theorem_bound(s, n);
    let main3 = p.map(|p| main3_bound(p, s, n));
    // exact central binomial only for lengths a sequence can have
    let loe = if n <= MAX_SEQUENCE_LENGTH as u64 {
        let exact = loe_binomial_bound(n as u32);
        json!({ "value": exact.to_f64(), "exact": exact })
    } else {
        json!({ "value": (2.0 / (std::f64::consts::PI * n as f64)).sqrt(), "exact": null })
    };
    json!({
        "loe": loe,
        "theorem_141": t.value,
        "main3": main3,
        "vacuous": {
            "theorem_141": t.vacuous,
            "main3": main3.map(|x| x >= 1.0),
        },
    })
}

pub fn rho(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let p = ambient_prime(&file.generators()?.ambient);
    match file.build(cfg.cap.unwrap_or(DEFAULT_CLOSURE_CAP)) {
        Ok(group) => {
            let seq = load_sequence(cfg, &file, Some(&group))?;
            let r = rho_exact(&group, &seq)?;
            let (n, s) = (seq.len() as u64, seq.min_order());
            let listed: Vec<Value> = r
                .maximizers
                .iter()
                .take(MAX_LISTED_MAXIMIZERS)
                .map(|&g| element_to_json(&group.element(g)))
                .collect();
            Ok(Outcome::json(
                json!({
                    "method": "exact",
                    "group_order": group.order(),
                    "n": n,
                    "s": s,
                    "rho_exact": r.rho,
                    "rho": r.rho.to_f64(),
                    "maximizer_count": r.maximizers.len(),
                    "maximizers": listed,
                    "bounds": bounds_json(s, n, p),
                    "theorem_141_holds": r.rho.le_scaled_max_bound(141, s, n),
                }),
                true,
            ))
        }
        Err(e) if e.is_resource_cap() => {
            if needs_group_for_sequence(cfg, &file)? {
                return Err(e);
            }
            let seq = load_sequence(cfg, &file, None)?;
            let est = mc_estimate(cfg, &seq)?;
            let (n, s) = (seq.len() as u64, seq.min_order());
            Ok(Outcome::json(
                json!({
                    "method": "mc",
                    "n": n,
                    "s": s,
                    "rho_mc": est,
                    "maximizers": [est.argmax],
                    "bounds": bounds_json(s, n, p),
                }),
                true,
            ))
        }
        Err(e) => Err(e),
    }
}

fn mc_estimate(cfg: &RunConfig, seq: &SignedSequence) -> Result<walk::MonteCarloEstimate> {
    rho_monte_carlo(
        seq,
        cfg.samples.unwrap_or(DEFAULT_SAMPLES),
        cfg.seed(),
        cfg.threads(),
        walk::monte_carlo::DEFAULT_DISTINCT_CAP,
    )
}

pub fn mc(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let group = if needs_group_for_sequence(cfg, &file)? { Some(build_group(cfg)?) } else { None };
    let seq = load_sequence(cfg, &file, group.as_ref())?;
    let est = mc_estimate(cfg, &seq)?;
    Ok(Outcome::json(json!({ "n": seq.len(), "s": seq.min_order(), "estimate": est }), true))
}

pub fn chartab(cfg: &RunConfig) -> Result<Outcome> {
    let g = build_group(cfg)?;
    let table = character_table_dixon(&g)?;
    let sum: u64 = table.degrees().iter().map(|d| d * d).sum();
    let mut out = table.to_json(&g);
    out["sum_of_squared_degrees"] = json!(sum);
    Ok(Outcome::json(out, sum == g.order() as u64))
}

fn irreps_for(cfg: &RunConfig, g: &FiniteGroup) -> Result<Vec<UnitaryIrrep>> {
    decompose_regular(g, cfg.seed(), cfg.tol.unwrap_or(1e-6))
}

pub fn irreps(cfg: &RunConfig, with_matrices: bool) -> Result<Outcome> {
    let g = build_group(cfg)?;
    let irreps = irreps_for(cfg, &g)?;
    let entries: Vec<Value> = irreps
        .iter()
        .map(|r| {
            let mut e = json!({
                "dim": r.dim(),
                "unitarity_defect": r.unitarity_defect(),
                "homomorphism_defect": r.homomorphism_defect(&g, 200, cfg.seed()),
                "character_norm": r.character_norm(),
            });
            if with_matrices {
                e["matrices"] = json!(r.matrices().iter().map(cmatrix_json).collect::<Vec<_>>());
            }
            e
        })
        .collect();
    let sum: usize = irreps.iter().map(|r| r.dim() * r.dim()).sum();
    Ok(Outcome::json(
        json!({ "group_order": g.order(), "sum_of_squared_dims": sum, "irreps": entries }),
        sum == g.order(),
    ))
}

pub fn fourier_check(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let g = build_group(cfg)?;
    if g.order() > charrep::REGULAR_SIZE_CAP {
        return Err(Error::SizeCap { order: g.order(), cap: charrep::REGULAR_SIZE_CAP });
    }
    let seq = load_sequence(cfg, &file, Some(&g))?;
    let irreps = irreps_for(cfg, &g)?;
    let fourier = fourier_distribution(&g, &irreps, &seq)?;
    let exact = walk::exact_distribution(&g, &seq)?.probabilities_f64();
    let deviation = fourier.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let tol = cfg.tol.unwrap_or(1e-8);
    Ok(Outcome::json(
        json!({ "group_order": g.order(), "n": seq.len(), "max_deviation": deviation, "tol": tol }),
        deviation <= tol,
    ))
}

/// Default `alpha` is the largest observed `|chi(x)|/chi(1)`, floored at 1e-6
/// so the open intervals are non-empty.
pub fn mult_bounds(cfg: &RunConfig) -> Result<Outcome> {
    let g = build_group(cfg)?;
    let table = character_table_dixon(&g)?;
    let measured = gluck_alpha(&table);
    let report = match (cfg.alpha, measured) {
        (Some(a), _) => check_multiplicity_bounds(&table, a)?,
        (None, Some(m)) => check_multiplicity_bounds(&table, m.max(1e-6))?,
        (None, None) => MultiplicityReport {
            alpha: 0.0,
            max_ratio: None,
            entries: Vec::new(),
            passed: 0,
            failed: 0,
            hypothesis_failed: 0,
            vacuous: 0,
        },
    };
    let sum: u64 = table.degrees().iter().map(|d| d * d).sum();
    let pass = report.all_pass();
    let mut out = serde_json::to_value(&report)?;
    out["group_order"] = json!(g.order());
    out["sum_of_squared_degrees"] = json!(sum);
    Ok(Outcome::json(out, pass))
}

pub struct SvdPropsArgs {
    pub pairs: usize,
    pub unitaries: usize,
    pub step: f64,
}

pub fn svd_props(cfg: &RunConfig, args: &SvdPropsArgs) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut trace_failures = 0;
    let mut product_failures = 0;
    for _ in 0..args.pairs {
        let d = rng.random_range(2..=20);
        let a = CMatrix::gaussian(d, d, &mut rng);
        let b = CMatrix::gaussian(d, d, &mut rng);
        trace_failures += usize::from(!spectral::verify_trace_bound(&a)?.pass);
        product_failures += usize::from(!spectral::verify_product_bounds(&a, &b)?.pass);
    }
    let mut cos_worst = 0.0f64;
    for d in 2..=16 {
        for _ in 0..args.unitaries {
            let u = random_unitary(d, &mut rng);
            cos_worst = cos_worst.max(spectral::cos_spectrum(&u)?.max_deviation);
        }
    }
    let trig = spectral::trig_bounds(args.step)?;
    let cos_tol = cfg.tol.unwrap_or(1e-8);
    let pass = trace_failures == 0 && product_failures == 0 && cos_worst <= cos_tol && trig.pass();
    Ok(Outcome::json(
        json!({
            "pairs": args.pairs,
            "trace_failures": trace_failures,
            "product_failures": product_failures,
            "unitaries_per_size": args.unitaries,
            "cos_max_deviation": cos_worst,
            "cos_tol": cos_tol,
            "trig": trig,
            "pass": pass,
        }),
        pass,
    ))
}

pub fn diag(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let g = build_group(cfg)?;
    let seq = load_sequence(cfg, &file, Some(&g))?;
    let irreps = irreps_for(cfg, &g)?;
    let irrep = match cfg.dim {
        Some(d) => irreps
            .iter()
            .find(|r| r.dim() == d)
            .ok_or_else(|| Error::InvalidArgument(format!("no irreducible representation of dimension {d}")))?,
        None => irreps.iter().max_by_key(|r| r.dim()).expect("at least the trivial irrep"),
    };
    let (p, m) = match (cfg.p, cfg.m, g.ambient()) {
        (Some(p), Some(m), _) => (p, m),
        (p, m, anticonc::group::Ambient::MatrixModP { p: q, m: k }) => (p.unwrap_or(*q as u64), m.unwrap_or(*k as u32)),
        _ => return Err(Error::InvalidArgument("--p and --m are required for non-matrix groups".into())),
    };
    let target = GroupElement::identity(g.ambient());
    let d = proof_diagnostics(p, m, &g, irrep, &seq, &target)?;
    let pass = d.for_s6_holds;
    let body = match cfg.format() {
        Format::Json => Body::Json(serde_json::to_value(&d)?),
        Format::Csv => Body::Csv(d.to_csv()),
    };
    Ok(Outcome { body, pass })
}

pub fn embed(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg.input.as_ref().ok_or_else(|| Error::InvalidArgument("--input is required".into()))?;
    let file = EmbedFile::load(path)?;
    let matrices = file.matrices()?;
    let n = cfg.n.unwrap_or(file.n);
    let m = matrices.first().map_or(2, |a| a.size());
    let p_min = cfg.p_min.or(file.p_min).unwrap_or_else(|| embed::default_p_min(m));
    let bad = embed::bad_prime_set(&matrices, n)?;
    let result = embed::embed_mod_p(&matrices, n, p_min)?;
    let mut out = result.to_json();
    out["p_min"] = json!(p_min);
    out["inputs"] = json!(matrices.iter().map(|a| a.to_json()).collect::<Vec<_>>());
    out["bad_primes"] = serde_json::to_value(&bad)?;
    let pass = result.reports.iter().all(|r| r.satisfied);
    Ok(Outcome::json(out, pass))
}

pub fn bounds(cfg: &RunConfig) -> Result<Outcome> {
    let s = cfg.s.ok_or_else(|| Error::InvalidArgument("--s is required".into()))?;
    let n = cfg.n.ok_or_else(|| Error::InvalidArgument("--n is required".into()))?;
    if s < 2 || n < 1 || n > u32::MAX as u64 {
        return Err(Error::InvalidArgument(format!("need s >= 2 and 1 <= n < 2^32, got s = {s}, n = {n}")));
    }
    Ok(Outcome::json(json!({ "s": s, "n": n, "p": cfg.p, "bounds": bounds_json(s, n, cfg.p) }), true))
}

/// Random shifts `a_i` with `|a_i|` uniform in `1..=K`; `K` and `n` are drawn
/// per instance (from `1..=5` and `20..=200`) unless fixed.
pub fn example2(cfg: &RunConfig) -> Result<Outcome> {
    let instances = cfg.instances.unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed());
    let mut reports = Vec::with_capacity(instances);
    for _ in 0..instances {
        let k = cfg.k.unwrap_or_else(|| rng.random_range(1..=5));
        let n = cfg.n.unwrap_or_else(|| rng.random_range(20..=200));
        if k == 0 || n == 0 {
            return Err(Error::InvalidArgument("K and n must be positive".into()));
        }
        let shifts: Vec<i64> = (0..n)
            .map(|_| {
                let a = rng.random_range(1..=k as i64);
                if rng.random::<bool>() {
                    a
                } else {
                    -a
                }
            })
            .collect();
        reports.push(example2_check(&shifts).expect("non-zero shifts"));
    }
    let flag = reports.iter().all(|r| r.pass);
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| json!({ "n": r.n, "k": r.height, "rho": r.rho_f64, "lower_bound": r.lower_bound, "pass": r.pass }))
        .collect();
    Ok(Outcome::json(json!({ "instances": instances, "flag": flag, "reports": rows }), flag))
}

/// `rho` of every prefix of the sequence.
pub fn sweep(cfg: &RunConfig) -> Result<Outcome> {
    let file = group_file(cfg)?;
    let g = build_group(cfg)?;
    let seq = load_sequence(cfg, &file, Some(&g))?;
    let prefixes = rho_prefixes(&g, &seq)?;
    let mut s = u64::MAX;
    let rows: Vec<(u64, walk::Dyadic, u64)> = prefixes
        .into_iter()
        .zip(seq.orders())
        .enumerate()
        .map(|(i, (r, &k))| {
            s = s.min(k);
            (i as u64 + 1, r, s)
        })
        .collect();
    let body = match cfg.format() {
        Format::Csv => {
            let mut out = String::from("n,rho,loe,theorem_141\n");
            for (n, r, s) in &rows {
                out += &format!(
                    "{n},{:e},{:e},{:e}\n",
                    r.to_f64(),
                    loe_binomial_bound(*n as u32).to_f64(),
                    theorem_bound(*s, *n).value
                );
            }
            Body::Csv(out)
        }
        Format::Json => Body::Json(json!(rows
            .iter()
            .map(|(n, r, s)| json!({ "n": n, "s": s, "rho_exact": r, "rho": r.to_f64() }))
            .collect::<Vec<_>>())),
    };
    Ok(Outcome { body, pass: true })
}
