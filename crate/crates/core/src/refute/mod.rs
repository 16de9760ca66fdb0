//! The certification pipeline: squaring, row pruning, row bucketing,
//! certified spectral bounds, and the combination across contraction levels.

mod brute;
mod certificate;

pub use brute::{brute_force_val, BruteForce, MAX_BRUTE_VARS};
pub use certificate::{
    assemble_boolnorm, combine_levels, instance_digest, regular_alpha, verify_certificate, BlockRecord,
    LevelRecord, LevelStatus, RefutationCertificate, ReplayReport, CERTIFICATE_SCHEMA,
};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decompose::decompose;
use crate::hypergraph::one_based;
use crate::instances::XorInstance;
use crate::kikuchi::{build_bipartite_kikuchi, BipartitePolynomial, KikuchiConfig, KikuchiMatrix};
use crate::linalg::{certified_specnorm, SparseMatrix, SpecConfig};
use crate::{Error, Result};

/// The squared polynomial `f(x) = (p/m²) Σ_u Σ_{C≠C'} b_{u,C} b_{u,C'} x_C x_{C'}`,
/// kept as the pair structure of the underlying `ψ`.
#[derive(Debug, Clone)]
pub struct SquaredPolynomial {
    pub psi: BipartitePolynomial,
    /// `p/m`, so that `val(ψ)² ≤ val(f) + slack`.
    pub slack: f64,
}

impl SquaredPolynomial {
    pub fn value(&self, x: &[i8]) -> f64 {
        self.psi.squared_value(x)
    }

    /// Number of ordered pairs `(C, C')` with `C ≠ C'` in a common partition.
    pub fn pair_count(&self) -> u64 {
        self.psi
            .graph
            .parts()
            .iter()
            .map(|p| (p.len() as u64) * (p.len().saturating_sub(1) as u64))
            .sum()
    }
}

pub fn cauchy_schwarz(psi: &BipartitePolynomial) -> SquaredPolynomial {
    SquaredPolynomial {
        slack: psi.squaring_slack(),
        psi: psi.clone(),
    }
}

/// How the pruning threshold `Δ` is picked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum DeltaRule {
    /// Smallest `Δ` leaving at most `⌊ε²D/16⌋` bad rows.
    #[default]
    Adaptive,
    /// `c^{k-1} ε^{-4} ln(32pN/(ε²D))^{2(k-1)}`.
    Formula { c: f64 },
    Fixed { delta: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefuteConfig {
    pub eps: f64,
    pub delta: DeltaRule,
    pub kikuchi: KikuchiConfig,
    pub spec: SpecConfig,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig {
            eps: 0.5,
            delta: DeltaRule::Adaptive,
            kikuchi: KikuchiConfig::default(),
            spec: SpecConfig::default(),
        }
    }
}

pub fn choose_delta(rule: DeltaRule, gamma_max: &[u64], eps: f64, k: usize, p: usize, n_rows: u64, d: u128) -> u64 {
    match rule {
        DeltaRule::Fixed { delta } => delta,
        DeltaRule::Formula { c } => {
            let e2 = eps * eps;
            let log = (32.0 * p as f64 * n_rows as f64 / (e2 * d as f64)).ln().max(0.0);
            let v = c.powi(k as i32 - 1) / (e2 * e2) * log.powi(2 * (k as i32 - 1));
            if v.is_finite() {
                v.floor() as u64
            } else {
                u64::MAX
            }
        }
        DeltaRule::Adaptive => {
            let allowed = (eps * eps * d as f64 / 16.0).floor() as usize;
            let mut sorted = gamma_max.to_vec();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            sorted.get(allowed).copied().unwrap_or(0)
        }
    }
}

/// `A` with the `Δ`-bad rows and columns zeroed.
#[derive(Debug, Clone)]
pub struct Pruned {
    pub good: SparseMatrix,
    /// Active positions `S` with `γ_u(S) > Δ` for some `u`.
    pub bad: Vec<usize>,
    /// Entrywise ℓ1 norm of `A - A_GG`.
    pub mass: f64,
}

pub fn prune_rows(km: &KikuchiMatrix, delta: u64) -> Result<Pruned> {
    let is_bad: Vec<bool> = km.gamma_max.iter().map(|&g| g > delta).collect();
    let bad: Vec<usize> = (0..is_bad.len()).filter(|&i| is_bad[i]).collect();
    let mut mass = 0.0;
    let mut kept = Vec::with_capacity(km.total.nnz());
    for (r, c, v) in km.total.triplets() {
        if is_bad[r as usize] || is_bad[c as usize] {
            mass += v.abs();
        } else {
            kept.push((r, c, v));
        }
    }
    Ok(Pruned {
        good: SparseMatrix::from_triplets(km.total.dim(), kept)?,
        bad,
        mass,
    })
}

/// Bucket `i` of each entry: `0` when `γ ≤ d`, otherwise the `i ≥ 1` with
/// `2^{i-1}d < γ ≤ 2^i d`. Returns the index lists of every bucket up to the
/// last nonempty one.
pub fn bucket_rows(gamma: &[u64], d: f64) -> Vec<Vec<usize>> {
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new()];
    for (idx, &g) in gamma.iter().enumerate() {
        let g = g as f64;
        let mut i = 0;
        let mut bound = d;
        while g > bound {
            i += 1;
            bound *= 2.0;
        }
        if buckets.len() <= i {
            buckets.resize(i + 1, Vec::new());
        }
        buckets[i].push(idx);
    }
    buckets
}

/// `max(4m²D/(pN), D·Σ_u |H_u|(|H_u|-1)/N)`. The second term makes the
/// bucket-size law hold even for unequal partition sizes.
pub fn bucket_scale(psi: &BipartitePolynomial, d: u128, n_rows: u64) -> f64 {
    let (m, p, n) = (psi.m() as f64, psi.p() as f64, n_rows as f64);
    let d = d as f64;
    let pairs: f64 = psi
        .graph
        .parts()
        .iter()
        .map(|h| (h.len() as f64) * (h.len() as f64 - 1.0).max(0.0))
        .sum();
    (4.0 * m * m * d / (p * n)).max(d * pairs / n)
}

/// Bound on `max_{x,y ∈ {±1}} xᵀ A y` from the pruned mass and the certified
/// norms of the bucket blocks `G^{(i,j)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoolnormBound {
    pub pruned_mass: f64,
    pub blocks: Vec<BlockRecord>,
    pub total: f64,
}

fn support(trip: &[(u32, u32, f64)], rows: usize, cols: usize) -> (usize, usize) {
    let mut r = vec![false; rows];
    let mut c = vec![false; cols];
    for &(i, j, _) in trip {
        r[i as usize] = true;
        c[j as usize] = true;
    }
    (r.iter().filter(|&&b| b).count(), c.iter().filter(|&&b| b).count())
}

/// Each block contributes `sqrt(rows·cols)·σ`, where `rows`/`cols` count the
/// rows and columns of the bucket pair that carry a nonzero entry. Blocks
/// with `i < j` stand for both `(i, j)` and `(j, i)`.
pub fn boolnorm_certificate(
    good: &SparseMatrix,
    buckets: &[Vec<usize>],
    pruned_mass: f64,
    spec: &SpecConfig,
) -> Result<BoolnormBound> {
    let pairs: Vec<(usize, usize)> = (0..buckets.len())
        .flat_map(|i| (i..buckets.len()).map(move |j| (i, j)))
        .collect();
    let blocks: Vec<Option<BlockRecord>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (ri, cj) = (&buckets[i], &buckets[j]);
            let trip = good.block(ri, cj);
            if trip.is_empty() {
                return Ok(None);
            }
            let (rows, cols) = support(&trip, ri.len(), cj.len());
            let bound = if i == j {
                certified_specnorm(&SparseMatrix::from_triplets(ri.len(), trip)?, spec)?
            } else {
                let off = ri.len() as u32;
                let dilation: Vec<(u32, u32, f64)> = trip
                    .iter()
                    .flat_map(|&(r, c, v)| [(r, off + c, v), (off + c, r, v)])
                    .collect();
                certified_specnorm(&SparseMatrix::from_triplets(ri.len() + cj.len(), dilation)?, spec)?
            };
            Ok(Some(BlockRecord {
                i,
                j,
                rows,
                cols,
                sigma: bound.sigma,
                estimate: bound.estimate,
                method: bound.method,
                tau: spec.tau,
            }))
        })
        .collect::<Result<_>>()?;
    let blocks: Vec<BlockRecord> = blocks.into_iter().flatten().collect();
    let total = assemble_boolnorm(pruned_mass, &blocks);
    Ok(BoolnormBound {
        pruned_mass,
        blocks,
        total,
    })
}

/// Bucket sizes `|F_i|` over all `N` rows (zero rows sit in `F_0`), checked
/// against `|F_i| ≤ 2^{1-i} N`.
fn bucket_sizes(buckets: &[Vec<usize>], n_rows: u64, active: usize) -> Result<Vec<u64>> {
    let mut sizes: Vec<u64> = buckets.iter().map(|b| b.len() as u64).collect();
    sizes[0] += n_rows - active as u64;
    for (i, &s) in sizes.iter().enumerate().skip(1) {
        if s as f64 > 2f64.powi(1 - i as i32) * n_rows as f64 {
            return Err(Error::Invariant(format!(
                "bucket {i} holds {s} rows, above 2^(1-{i})·{n_rows}"
            )));
        }
    }
    Ok(sizes)
}

/// Refute a bipartite polynomial: returns `α ≥ val(ψ)` and its record.
pub fn refute_regular(psi: &BipartitePolynomial, ell: usize, cfg: &RefuteConfig) -> Result<(f64, LevelRecord)> {
    let (m, p, k) = (psi.m(), psi.p(), psi.k);
    let labels = psi.graph.labels().map(one_based).unwrap_or_default();
    let mut record = LevelRecord::trivial(k, m, p, labels, ell);
    if m == 0 {
        record.alpha = 0.0;
        record.status = LevelStatus::Empty;
        return Ok((0.0, record));
    }
    let km = build_bipartite_kikuchi(psi, ell, &cfg.kikuchi)?;
    let pairs = cauchy_schwarz(psi).pair_count() as u128;
    if km.generated as u128 != km.d * pairs {
        return Err(Error::Invariant(format!(
            "generated {} cells, expected D·pairs = {}",
            km.generated,
            km.d * pairs
        )));
    }
    let n_rows = km.n_rows();
    let delta = choose_delta(cfg.delta, &km.gamma_max, cfg.eps, k, p, n_rows, km.d);
    let pruned = prune_rows(&km, delta)?;
    let scale = bucket_scale(psi, km.d, n_rows);
    let mut is_bad = vec![false; km.active.len()];
    for &b in &pruned.bad {
        is_bad[b] = true;
    }
    let good_rows: Vec<usize> = (0..km.active.len()).filter(|&i| !is_bad[i]).collect();
    let gamma: Vec<u64> = good_rows.iter().map(|&i| km.gamma_total[i]).collect();
    let buckets: Vec<Vec<usize>> = bucket_rows(&gamma, scale)
        .into_iter()
        .map(|b| b.into_iter().map(|i| good_rows[i]).collect())
        .collect();
    let sizes = bucket_sizes(&buckets, n_rows, km.active.len())?;
    let bn = boolnorm_certificate(&pruned.good, &buckets, pruned.mass, &cfg.spec)?;
    let alpha = regular_alpha(p, m, km.d, bn.total);
    record.status = LevelStatus::Certified;
    record.d = km.d;
    record.n_rows = n_rows;
    record.delta = delta;
    record.bad_rows = pruned.bad.len();
    record.pruned_mass = pruned.mass;
    record.pruned_coarse = 2.0 * pruned.bad.len() as f64 * 4.0 * (m as f64).powi(2) / p as f64;
    record.bucket_scale = scale;
    record.bucket_sizes = sizes;
    record.blocks = bn.blocks;
    record.boolnorm = bn.total;
    record.alpha = alpha;
    Ok((alpha, record))
}

/// Output of [`refute_poly`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refutation {
    pub alg_val: f64,
    pub certificate: RefutationCertificate,
}

/// Decompose, refute every level, and combine: `alg-val ≥ max_x φ(x)`.
pub fn refute_poly(inst: &XorInstance, ell: usize, cfg: &RefuteConfig) -> Result<Refutation> {
    let m = inst.m();
    let mut cert = RefutationCertificate {
        schema_version: CERTIFICATE_SCHEMA,
        digest: instance_digest(inst),
        n: inst.n,
        k: inst.k as usize,
        m,
        ell,
        eps: cfg.eps,
        tau: cfg.spec.tau,
        discarded: 0,
        levels: Vec::new(),
        alg_val: 0.0,
    };
    if m == 0 {
        return Ok(Refutation {
            alg_val: 0.0,
            certificate: cert,
        });
    }
    if inst.k < 2 {
        return Err(Error::Unsupported("refutation needs arity at least 2".into()));
    }
    let h = inst.hypergraph();
    let dec = decompose(&h, cfg.eps, ell)?;
    cert.discarded = dec.discarded.len();
    for level in &dec.levels {
        if level.m() == 0 {
            continue;
        }
        let coeffs: Vec<Vec<f64>> = level
            .provenance
            .iter()
            .map(|ids| ids.iter().map(|&id| inst.coeffs[id]).collect())
            .collect();
        let psi = BipartitePolynomial::new(level.graph.clone(), coeffs)?;
        let record = if ell + 1 < level.t {
            let labels = psi.graph.labels().map(one_based).unwrap_or_default();
            LevelRecord::trivial(level.t, psi.m(), psi.p(), labels, ell)
        } else {
            refute_regular(&psi, ell, cfg)?.1
        };
        cert.levels.push(record);
    }
    cert.alg_val = combine_levels(m, cert.discarded, &cert.levels);
    Ok(Refutation {
        alg_val: cert.alg_val,
        certificate: cert,
    })
}
