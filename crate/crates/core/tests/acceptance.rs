//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refutekit::covers::{
    build_fko_witness, extract_disjoint_covers, find_even_cover, verify_fko_witness, CoverSearch, CoverStrategy,
};
use refutekit::csp::{
    has_t_wise_support, max_t_wise_mass, refute_csp, separating_polynomial, support_threshold, t_wise_distribution,
};
use refutekit::decompose::{decompose, verify_contraction};
use refutekit::hypergraph::{BipartiteHypergraph, Hypergraph};
use refutekit::instances::{
    gen_csp, gen_xor, plant_literals, sample_hypergraph, smooth_csp, CoeffDist, CspInstance, HypergraphModel,
    Predicate, SmoothingPlan, XorInstance,
};
use refutekit::kikuchi::{
    adversarial_wam_instance, build_bipartite_kikuchi, build_wam_matrix, min_owner_partition, quad_form_identity,
    wam_submatrix, BipartitePolynomial, KikuchiConfig, WamMode,
};
use refutekit::linalg::{certified_specnorm, power_iteration, SparseMatrix, SpecConfig};
use refutekit::refute::{
    brute_force_val, refute_poly, verify_certificate, LevelStatus, RefutationCertificate, RefuteConfig,
};

/// Slack allowed when comparing a certified bound to an exact optimum.
const SOUNDNESS_TOL: f64 = 1e-9;
/// Relative slack of the certified spectral bound.
const SPEC_TAU: f64 = 1e-6;
/// Trend test: "strong" refutation threshold.
const STRONG: f64 = 1.0 - 1e-3;
/// Per-instance Kikuchi size cap for the soundness sweep; larger jobs are
/// skipped and reported.
const SOUNDNESS_MAX_CELLS: u64 = 2_000_000;
const SEMIRANDOM: HypergraphModel = HypergraphModel::Skewed { exponent: 0.5 };
const SEMIRANDOM_EPS: f64 = 0.3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Exact bucketing law on every certified level, plus full replay.
#[derive(Default)]
struct BucketLedger {
    runs: usize,
    levels: usize,
    violations: Vec<String>,
}

impl BucketLedger {
    fn record(&mut self, cert: &RefutationCertificate, inst: &XorInstance) {
        self.runs += 1;
        for level in &cert.levels {
            if level.status != LevelStatus::Certified {
                continue;
            }
            self.levels += 1;
            for (i, &size) in level.bucket_sizes.iter().enumerate() {
                let cap = 2f64.powi(1 - i as i32) * level.n_rows as f64;
                if size as f64 > cap {
                    self.violations.push(format!("|F_{i}| = {size} > {cap}"));
                }
            }
        }
        let replay = verify_certificate(cert, Some(inst));
        if !replay.ok {
            self.violations.push(format!("replay failed: {:?}", replay.problems));
        }
    }
}

fn random_signs(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

fn planted_xor(rng: &mut ChaCha8Rng, n: u32, k: u32, m: usize) -> XorInstance {
    let x: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let model = HypergraphModel::Sunflower { core: k - 1, fraction: 0.5 };
    let clauses = sample_hypergraph(model, n, k, m, rng).unwrap();
    let coeffs = clauses.iter().map(|c| c.iter().map(|&v| x[v as usize] as f64).product()).collect();
    XorInstance::new(n, k, clauses, coeffs).unwrap()
}

fn contradictory_xor(rng: &mut ChaCha8Rng, n: u32, k: u32, m: usize) -> XorInstance {
    let half = sample_hypergraph(HypergraphModel::Uniform, n, k, m / 2, rng).unwrap();
    let clauses: Vec<Vec<u32>> = half.iter().chain(&half).cloned().collect();
    let coeffs = (0..clauses.len()).map(|i| if i < half.len() { 1.0 } else { -1.0 }).collect();
    XorInstance::new(n, k, clauses, coeffs).unwrap()
}

fn library_of_arity(k: u32) -> Vec<Predicate> {
    Predicate::library().into_iter().map(|(_, p)| p).filter(|p| p.k() == k).collect()
}

fn criterion_1(ledger: &mut BucketLedger) -> Outcome {
    let start = Instant::now();
    let (mut checked, mut violations, mut guarded) = (0, Vec::new(), 0);
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    let mut by_ell: BTreeMap<usize, usize> = BTreeMap::new();
    let mut seed = 0u64;
    while checked < 500 {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = [2u32, 3, 4][(seed % 3) as usize];
        let ell = 2 + (seed / 3 % 5) as usize;
        let n = rng.random_range(8..=if ell <= 4 { 14u32 } else { 11 });
        let m = rng.random_range(10..=60usize);
        let cfg = RefuteConfig {
            kikuchi: KikuchiConfig { max_cells: SOUNDNESS_MAX_CELLS },
            ..RefuteConfig::default()
        };
        let kind = ["random", "semirandom", "smoothed", "adversarial", "csp"][(seed / 15 % 5) as usize];
        let result = match kind {
            "random" | "semirandom" | "adversarial" => {
                let inst = match kind {
                    "random" => gen_xor(HypergraphModel::Uniform, CoeffDist::Signs, n, k, m, seed).unwrap(),
                    "semirandom" => gen_xor(SEMIRANDOM, CoeffDist::Signs, n, k, m, seed).unwrap(),
                    _ if seed.is_multiple_of(2) => planted_xor(&mut rng, n, k, m),
                    _ => contradictory_xor(&mut rng, n, k, m),
                };
                refute_poly(&inst, ell, &cfg).map(|r| {
                    ledger.record(&r.certificate, &inst);
                    (r.alg_val, brute_force_val(&inst).unwrap())
                })
            }
            _ => {
                let preds = library_of_arity(k);
                let pred = preds[rng.random_range(0..preds.len())].clone();
                let mut inst: CspInstance = gen_csp(pred, HypergraphModel::Uniform, n, m, seed).unwrap();
                if kind == "smoothed" {
                    inst = plant_literals(&inst, &vec![1; n as usize], seed).unwrap();
                    let plan = SmoothingPlan::uniform(m, k as usize, 0.3, seed);
                    inst = smooth_csp(&inst, &plan).unwrap().0;
                }
                refute_csp(&inst, ell, &cfg).map(|r| (r.alg_val, brute_force_val(&inst).unwrap()))
            }
        };
        match result {
            Ok((alg, opt)) => {
                checked += 1;
                *by_kind.entry(kind).or_default() += 1;
                *by_ell.entry(ell).or_default() += 1;
                if alg + SOUNDNESS_TOL < opt {
                    violations.push(format!("seed {seed} {kind} k={k} ell={ell}: {alg} < {opt}"));
                }
            }
            Err(refutekit::Error::Guard(_)) => guarded += 1,
            Err(e) => violations.push(format!("seed {seed} {kind}: error {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: violations.is_empty() && secs < 600.0,
        detail: format!(
            "{checked} instances {by_kind:?}, ell counts {by_ell:?}, {guarded} skipped by size guard, {} violations {:?}, {secs:.1}s",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

fn random_bipartite(rng: &mut ChaCha8Rng) -> BipartitePolynomial {
    let n = rng.random_range(5..=9u32);
    let t = rng.random_range(2..=4usize);
    let p = rng.random_range(1..=3usize);
    let mut vars: Vec<u32> = (0..n).collect();
    let parts: Vec<Vec<Vec<u32>>> = (0..p)
        .map(|_| {
            (0..rng.random_range(1..=4usize))
                .map(|_| {
                    vars.shuffle(rng);
                    let mut e = vars[..t - 1].to_vec();
                    e.sort_unstable();
                    e
                })
                .collect()
        })
        .collect();
    let coeffs = parts.iter().map(|part| random_signs(rng, part.len())).collect();
    let graph = BipartiteHypergraph::new(n, t, parts, None).unwrap();
    BipartitePolynomial::new(graph, coeffs).unwrap()
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut pairs, mut mismatches) = (0, Vec::new());
    while pairs < 100 {
        let psi = random_bipartite(&mut rng);
        let n = psi.n() as u64;
        let k = psi.graph.t() as u64;
        let ell = rng.random_range(k as usize - 1..=2 * k as usize) as u64;
        if ell > n {
            continue;
        }
        let Ok(km) = build_bipartite_kikuchi(&psi, ell as usize, &KikuchiConfig::default()) else {
            continue;
        };
        let x: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let (lhs, _) = quad_form_identity(&km, &psi, &x).unwrap();
        let d = oracle_cells_per_pair(n, k, ell);
        let mut pair_sum = 0i64;
        for (part, coeffs) in psi.graph.parts().iter().zip(&psi.coeffs) {
            for (i, (c, b)) in part.iter().zip(coeffs).enumerate() {
                for (j, (c2, b2)) in part.iter().zip(coeffs).enumerate() {
                    if i != j {
                        let xc: i64 = c.iter().chain(c2).map(|&v| x[v as usize] as i64).product();
                        pair_sum += (*b as i64) * (*b2 as i64) * xc;
                    }
                }
            }
        }
        let rhs = d as i128 * pair_sum as i128;
        pairs += 1;
        if lhs.fract() != 0.0 || lhs as i128 != rhs {
            mismatches.push(format!("lhs {lhs} rhs {rhs}"));
        }
    }
    Outcome {
        pass: mismatches.is_empty(),
        detail: format!("{pairs} (psi, x) pairs, {} mismatches {:?}", mismatches.len(), mismatches.first()),
    }
}

/// Cells per ordered clause pair: S takes a balanced split of `C ⊔ C'` (a
/// elements from the first clone of C, the rest from the second clone of C',
/// with a = ⌊(k-1)/2⌋ or ⌈(k-1)/2⌉) and fills up with untouched elements.
fn oracle_cells_per_pair(n: u64, k: u64, ell: u64) -> u64 {
    let a = k - 1;
    let mut splits = vec![a / 2, a.div_ceil(2)];
    splits.dedup();
    let fill = binom(2 * n - 2 * a, ell - a);
    splits.iter().map(|&s| binom(a, s) * binom(a, a - s)).sum::<u64>() * fill
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut runs, mut failures) = (0, Vec::new());
    for i in 0..200 {
        let k = 2 + i % 4;
        let n = rng.random_range((k as u32 + 3)..=16u32);
        let m = rng.random_range(5..=120usize);
        let ell = rng.random_range(1..=(n as usize / 2).max(1));
        let eps = [0.3, 0.5, 0.7][i % 3];
        let model = [HypergraphModel::Uniform, SEMIRANDOM, HypergraphModel::Sunflower { core: 1, fraction: 0.6 }][i % 3];
        let edges = sample_hypergraph(model, n, k as u32, m, &mut rng).unwrap();
        let h = Hypergraph::new(n, k, edges).unwrap();
        let bc = decompose(&h, eps, ell).unwrap();
        let report = verify_contraction(&h, &bc, eps, ell);
        let bound = n as f64 / (k as f64 * eps * eps) * (n as f64 / ell as f64).powf(k as f64 / 2.0 - 1.0);
        runs += 1;
        if !report.passed() {
            failures.push(format!("run {i}: {:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()));
        }
        if bc.discarded.len() as f64 > bound {
            failures.push(format!("run {i}: m1 = {} > {bound}", bc.discarded.len()));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{runs} hypergraphs, k in 2..=5, {} failures {:?}", failures.len(), failures.first()),
    }
}

fn criterion_5(ledger: &mut BucketLedger) -> Outcome {
    let start = Instant::now();
    let ms = [500usize, 1000, 2000, 4000];
    let cfg = RefuteConfig {
        eps: SEMIRANDOM_EPS,
        ..RefuteConfig::default()
    };
    let mut means = Vec::new();
    let mut strong_at_max = 0;
    for &m in &ms {
        let mut sum = 0.0;
        for seed in 0..20 {
            let inst = gen_xor(SEMIRANDOM, CoeffDist::Signs, 40, 3, m, seed).unwrap();
            let r = refute_poly(&inst, 2, &cfg).unwrap();
            ledger.record(&r.certificate, &inst);
            sum += r.alg_val;
            if m == 4000 && r.alg_val < STRONG {
                strong_at_max += 1;
            }
        }
        means.push(sum / 20.0);
    }
    let secs = start.elapsed().as_secs_f64();
    let decreasing = means.windows(2).all(|w| w[1] < w[0]);
    Outcome {
        pass: decreasing && strong_at_max >= 19 && secs < 1200.0,
        detail: format!(
            "mean alg-val {:?} at m = {ms:?}; {strong_at_max}/20 below {STRONG} at m = 4000; {secs:.1}s",
            means.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>()
        ),
    }
}

/// Minimum even cover by direct subset enumeration over vertex bitmasks.
fn oracle_min_cover(h: &Hypergraph) -> Option<usize> {
    let masks: Vec<u64> = h.edges().iter().map(|e| e.iter().fold(0u64, |a, &v| a | 1 << v)).collect();
    let m = masks.len();
    let mut best: Option<usize> = None;
    let mut acc = 0u64;
    for g in 1u64..1 << m {
        let bit = g.trailing_zeros() as usize;
        acc ^= masks[bit];
        let gray = g ^ (g >> 1);
        if acc == 0 {
            let len = gray.count_ones() as usize;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

fn oracle_is_cover(h: &Hypergraph, ids: &[usize]) -> bool {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut parity = vec![false; h.n() as usize];
    for &id in ids {
        for &v in h.edge(id) {
            parity[v as usize] ^= true;
        }
    }
    !ids.is_empty() && sorted.len() == ids.len() && parity.iter().all(|p| !p)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut returned, mut bad) = (0, 0);
    let mut mismatches = Vec::new();
    for i in 0..100 {
        let k = 2 + i % 3;
        let n = rng.random_range(5..=9u32);
        let m = rng.random_range(4..=20usize);
        let edges = sample_hypergraph(HypergraphModel::Uniform, n, k as u32, m, &mut rng).unwrap();
        let h = Hypergraph::new(n, k, edges).unwrap();
        let exhaustive = CoverSearch {
            strategy: CoverStrategy::Exhaustive,
            ..CoverSearch::default()
        };
        let a = find_even_cover(&h, m, &exhaustive).unwrap();
        let b = find_even_cover(&h, m, &CoverSearch::default()).unwrap();
        for c in a.iter().chain(&b) {
            returned += 1;
            bad += usize::from(!oracle_is_cover(&h, &c.edge_ids));
        }
        let (la, lb, lo) = (a.map(|c| c.len()), b.map(|c| c.len()), oracle_min_cover(&h));
        if la != lb || la != lo {
            mismatches.push(format!("instance {i}: exhaustive {la:?} kernel {lb:?} oracle {lo:?}"));
        }
    }
    let mut found = 0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(600 + seed);
        let edges = sample_hypergraph(HypergraphModel::Uniform, 30, 3, 600, &mut rng).unwrap();
        let h = Hypergraph::new(30, 3, edges).unwrap();
        let cfg = CoverSearch {
            seed,
            ..CoverSearch::default()
        };
        if let Some(c) = find_even_cover(&h, 40, &cfg).unwrap() {
            returned += 1;
            bad += usize::from(!oracle_is_cover(&h, &c.edge_ids));
            found += usize::from(c.len() <= 40);
        }
        for c in extract_disjoint_covers(&h, 40, 5, &cfg).unwrap() {
            returned += 1;
            bad += usize::from(!oracle_is_cover(&h, &c.edge_ids));
        }
    }
    Outcome {
        pass: bad == 0 && mismatches.is_empty() && found >= 18,
        detail: format!(
            "(a) {returned} covers returned, {bad} invalid; (b) {} min-length mismatches in 100 {:?}; (c) found in {found}/20",
            mismatches.len(),
            mismatches.first()
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut violations = Vec::new();
    let mut nontrivial = 0;
    for i in 0..200u64 {
        let k = 2 + (i % 3) as u32;
        let n = rng.random_range(6..=12u32);
        let m = rng.random_range(8..=30usize);
        let inst = if i % 4 == 3 {
            planted_xor(&mut rng, n, k, m)
        } else {
            gen_xor(HypergraphModel::Uniform, CoeffDist::Signs, n, k, m, i).unwrap()
        };
        let cfg = CoverSearch {
            seed: i,
            ..CoverSearch::default()
        };
        let w = build_fko_witness(&inst, m, m, &cfg).unwrap();
        let b = verify_fko_witness(&inst, &w).unwrap();
        let opt = brute_force_val(&inst).unwrap();
        nontrivial += usize::from(b.bound < 1.0);
        if b.bound + SOUNDNESS_TOL < opt {
            violations.push(format!("instance {i}: bound {} < {opt}", b.bound));
        }
    }
    let mut below = 0;
    for seed in 0..20 {
        let inst = gen_xor(SEMIRANDOM, CoeffDist::Signs, 30, 3, 600, 700 + seed).unwrap();
        let cfg = CoverSearch {
            seed,
            ..CoverSearch::default()
        };
        let w = build_fko_witness(&inst, 40, 1000, &cfg).unwrap();
        below += usize::from(verify_fko_witness(&inst, &w).unwrap().bound < 1.0);
    }
    Outcome {
        pass: violations.is_empty() && below >= 16,
        detail: format!(
            "200 tiny instances: {} violations ({nontrivial} with bound < 1); n=30 m=600: bound < 1 in {below}/20",
            violations.len()
        ),
    }
}

fn criterion_8() -> Outcome {
    let (inst, gadget) = adversarial_wam_instance(10, 60, 3, 0).unwrap();
    let owners = min_owner_partition(&inst);
    let wm = build_wam_matrix(&inst, &owners, 3, WamMode::Lenient, 1 << 22).unwrap();
    let sub = wam_submatrix(&wm, &gadget);
    let lp = gadget.ell_prime as u64;
    let want = binom(lp, 2) as usize;
    let rows_ok = sub.len() == 1 << lp
        && sub
            .iter()
            .all(|r| r.len() == 1 << lp && r.iter().filter(|&&v| v == 1.0).count() == want && r.iter().all(|&v| v == 0.0 || v == 1.0));
    let est = power_iteration(&wm.matrix, 2000, 1);
    Outcome {
        pass: rows_ok && est >= 3.0 && lp == 3,
        detail: format!("ell' = {lp}, submatrix {0}x{0} rows with {want} ones: {rows_ok}; power iteration {est:.6}", sub.len()),
    }
}

fn char_of(s: usize, z: usize) -> BigRational {
    BigRational::from_integer(if (s & z).count_ones().is_multiple_of(2) { 1.into() } else { (-1).into() })
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut thresholds = BTreeMap::new();
    for (name, p) in Predicate::library() {
        let k = p.k();
        let points = 1usize << k;
        let t = support_threshold(&p).unwrap();
        thresholds.insert(name.clone(), t);
        if t > 1 {
            match t_wise_distribution(&p, t - 1).unwrap() {
                Some(dist) => {
                    let total = dist.iter().fold(BigRational::zero(), |a, (_, w)| a + w);
                    let ok_support = dist.iter().all(|(z, w)| p.value_at(*z) && !w.is_negative());
                    let ok_moments = (1..points).filter(|s| s.count_ones() < t).all(|s| {
                        dist.iter().fold(BigRational::zero(), |a, (z, w)| a + w * char_of(s, *z)).is_zero()
                    });
                    if !(total.is_one() && ok_support && ok_moments) {
                        failures.push(format!("{name}: distribution for t-1 does not check"));
                    }
                }
                None => failures.push(format!("{name}: no distribution at t-1")),
            }
            if !has_t_wise_support(&p, t - 1).unwrap() {
                failures.push(format!("{name}: support missing at t-1"));
            }
        }
        if has_t_wise_support(&p, t).unwrap() {
            failures.push(format!("{name}: support present at t"));
        }
        let sep = separating_polynomial(&p, t).unwrap();
        let one = BigRational::one();
        let pointwise = (0..points).all(|z| {
            let q = sep.qhat.iter().fold(BigRational::zero(), |a, (&s, c)| a + c * char_of(s, z));
            let pz = if p.value_at(z) { one.clone() } else { BigRational::zero() };
            pz <= &one - &sep.delta + q
        });
        let degree = sep.qhat.keys().all(|&s| s != 0 && s.count_ones() <= t);
        if !(pointwise && degree && sep.delta.is_positive()) {
            failures.push(format!("{name}: separating polynomial fails substitution"));
        }
        if max_t_wise_mass(&p, t).unwrap() != &one - &sep.delta {
            failures.push(format!("{name}: primal and dual optima differ"));
        }
        if name == "or2" && (t != 2 || sep.delta != BigRational::new(1.into(), 4.into())) {
            failures.push(format!("or2: t = {t}, delta = {}", sep.delta));
        }
        if let Some(k_or) = name.strip_prefix("or") {
            if t.to_string() != k_or {
                failures.push(format!("{name}: t = {t}"));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("thresholds {thresholds:?}; {} failures {:?}", failures.len(), failures),
    }
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cfg = SpecConfig {
        tau: SPEC_TAU,
        ..SpecConfig::default()
    };
    let (mut worst, mut failures) = (0f64, Vec::new());
    for i in 0..200 {
        let dim = rng.random_range(1..=60usize);
        let density = [1.0, 0.3, 0.05][i % 3];
        let mut dense = DMatrix::<f64>::zeros(dim, dim);
        let mut triplets = Vec::new();
        for r in 0..dim {
            for c in r..dim {
                if rng.random::<f64>() < density {
                    let v = rng.random_range(-1.0..1.0);
                    dense[(r, c)] = v;
                    dense[(c, r)] = v;
                    triplets.push((r as u32, c as u32, v));
                    if r != c {
                        triplets.push((c as u32, r as u32, v));
                    }
                }
            }
        }
        let sparse = SparseMatrix::from_triplets(dim, triplets).unwrap();
        let sigma = certified_specnorm(&sparse, &cfg).unwrap().sigma;
        let lambda = dense.symmetric_eigenvalues().iter().fold(0f64, |a, v| a.max(v.abs()));
        let ok = if lambda == 0.0 {
            sigma == 0.0
        } else {
            worst = worst.max(sigma / lambda - 1.0);
            lambda <= sigma && sigma <= (1.0 + 2.0 * SPEC_TAU) * lambda
        };
        if !ok {
            failures.push(format!("matrix {i} (dim {dim}): lambda {lambda} sigma {sigma}"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "200 matrices, worst sigma/lambda - 1 = {worst:.3e} (limit {:.0e}), {} failures {:?}",
            2.0 * SPEC_TAU,
            failures.len(),
            failures.first()
        ),
    }
}

fn emit(id: u32, name: &str, o: Outcome) -> bool {
    println!("criterion {id:>2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    o.pass
}

fn main() {
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wanted = |id: u32| only.is_empty() || only.contains(&id);
    let mut ledger = BucketLedger::default();
    let mut results = Vec::new();
    let mut run = |id: u32, name: &str, ledger: &mut BucketLedger, f: &mut dyn FnMut(&mut BucketLedger) -> Outcome| {
        if wanted(id) {
            results.push(emit(id, name, f(ledger)));
        }
    };
    run(1, "universal soundness", &mut ledger, &mut |l| criterion_1(l));
    run(2, "quadratic-form identity", &mut ledger, &mut |_| criterion_2());
    run(3, "decomposition postconditions", &mut ledger, &mut |_| criterion_3());
    let trend = (wanted(4) || wanted(5)).then(|| criterion_5(&mut ledger));
    run(4, "bucketing law", &mut ledger, &mut |l| Outcome {
        pass: l.violations.is_empty() && l.levels > 0,
        detail: format!(
            "{} refutation runs, {} certified levels, {} violations {:?}",
            l.runs,
            l.levels,
            l.violations.len(),
            l.violations.first()
        ),
    });
    let mut trend = trend;
    run(5, "refutation strength trend", &mut ledger, &mut |_| trend.take().expect("computed above"));
    run(6, "even covers", &mut ledger, &mut |_| criterion_6());
    run(7, "FKO witness soundness", &mut ledger, &mut |_| criterion_7());
    run(8, "tuple-matrix lower bound", &mut ledger, &mut |_| criterion_8());
    run(9, "LP exactness", &mut ledger, &mut |_| criterion_9());
    run(10, "certified spectral bounds", &mut ledger, &mut |_| criterion_10());
    let ok = results.iter().filter(|&&p| p).count();
    println!("acceptance: {ok} of {} criteria passed", results.len());
    if ok < results.len() {
        std::process::exit(1);
    }
}
