use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::instances::{write_instance_string, Format, Instance, XorInstance};
use crate::linalg::BoundMethod;

pub const CERTIFICATE_SCHEMA: u32 = 1;

/// Certified norm of one bucket block `G^{(i,j)}`, `i ≤ j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub i: usize,
    pub j: usize,
    /// Rows of `F_i` with a nonzero entry in the block.
    pub rows: usize,
    /// Columns of `F_j` with a nonzero entry in the block.
    pub cols: usize,
    pub sigma: f64,
    pub estimate: f64,
    pub method: BoundMethod,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelStatus {
    Certified,
    /// No hyperedges: contributes nothing.
    Empty,
    /// `ell` below the level's arity minus one; the trivial bound 1 is used.
    Trivial,
}

/// Everything needed to recompute `α_t` for one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub t: usize,
    pub m: usize,
    pub p: usize,
    /// Partition labels `Q_u`, 1-based.
    pub labels: Vec<Vec<u32>>,
    pub ell: usize,
    pub status: LevelStatus,
    pub d: u128,
    pub n_rows: u64,
    pub delta: u64,
    pub bad_rows: usize,
    pub pruned_mass: f64,
    /// `2|B|·4m²/p`, the cruder bound on the pruned part.
    pub pruned_coarse: f64,
    /// Bucket `i` holds rows with `γ ≤ 2^i·bucket_scale` (and above half that for `i ≥ 1`).
    pub bucket_scale: f64,
    pub bucket_sizes: Vec<u64>,
    pub blocks: Vec<BlockRecord>,
    pub boolnorm: f64,
    pub alpha: f64,
}

impl LevelRecord {
    pub(crate) fn trivial(t: usize, m: usize, p: usize, labels: Vec<Vec<u32>>, ell: usize) -> Self {
        LevelRecord {
            t,
            m,
            p,
            labels,
            ell,
            status: LevelStatus::Trivial,
            d: 0,
            n_rows: 0,
            delta: 0,
            bad_rows: 0,
            pruned_mass: 0.0,
            pruned_coarse: 0.0,
            bucket_scale: 0.0,
            bucket_sizes: Vec::new(),
            blocks: Vec::new(),
            boolnorm: 0.0,
            alpha: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    pub schema_version: u32,
    /// sha256 of the instance in xor text format.
    pub digest: String,
    pub n: u32,
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    pub eps: f64,
    pub tau: f64,
    /// Number of hyperedges bounded trivially.
    pub discarded: usize,
    pub levels: Vec<LevelRecord>,
    pub alg_val: f64,
}

pub fn instance_digest(inst: &XorInstance) -> String {
    let text = write_instance_string(&Instance::Xor(inst.clone()), Format::Xor).expect("xor text is infallible");
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn assemble_boolnorm(pruned_mass: f64, blocks: &[BlockRecord]) -> f64 {
    blocks.iter().fold(pruned_mass, |acc, b| {
        let mult = if b.i == b.j { 1.0 } else { 2.0 };
        acc + mult * ((b.rows as f64) * (b.cols as f64)).sqrt() * b.sigma
    })
}

/// `min(1, sqrt((p/(m²D))·boolnorm + p/m))`.
pub fn regular_alpha(p: usize, m: usize, d: u128, boolnorm: f64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let (p, m) = (p as f64, m as f64);
    (p / (m * m * d as f64) * boolnorm + p / m).max(0.0).sqrt().min(1.0)
}

/// `(1/m)(m^(1) + Σ_t m^(t) α_t)`, clipped to `[0, 1]`.
pub fn combine_levels(m: usize, discarded: usize, levels: &[LevelRecord]) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let total = levels.iter().fold(discarded as f64, |acc, l| acc + l.m as f64 * l.alpha);
    (total / m as f64).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub ok: bool,
    pub recomputed: f64,
    pub problems: Vec<String>,
}

/// Recompute every derived number of a certificate from its recorded pieces.
/// Spectral bounds are taken as recorded. When `inst` is given, its digest
/// must match as well.
pub fn verify_certificate(cert: &RefutationCertificate, inst: Option<&XorInstance>) -> ReplayReport {
    let mut problems = Vec::new();
    if cert.schema_version != CERTIFICATE_SCHEMA {
        problems.push(format!("unknown schema version {}", cert.schema_version));
    }
    if let Some(inst) = inst {
        if instance_digest(inst) != cert.digest {
            problems.push("instance digest mismatch".into());
        }
    }
    let covered = cert.discarded + cert.levels.iter().map(|l| l.m).sum::<usize>();
    if covered != cert.m {
        problems.push(format!("levels cover {covered} hyperedges, instance has {}", cert.m));
    }
    let mut levels = cert.levels.clone();
    for (idx, level) in levels.iter_mut().enumerate() {
        let alpha = match level.status {
            LevelStatus::Empty => 0.0,
            LevelStatus::Trivial => 1.0,
            LevelStatus::Certified => {
                let bn = assemble_boolnorm(level.pruned_mass, &level.blocks);
                if bn != level.boolnorm {
                    problems.push(format!("level {idx}: boolnorm {} recomputes to {bn}", level.boolnorm));
                }
                if level.blocks.iter().any(|b| !(b.sigma >= 0.0) || b.i > b.j) {
                    problems.push(format!("level {idx}: malformed block"));
                }
                for (i, &s) in level.bucket_sizes.iter().enumerate().skip(1) {
                    if s as f64 > 2f64.powi(1 - i as i32) * level.n_rows as f64 {
                        problems.push(format!("level {idx}: bucket {i} too large"));
                    }
                }
                regular_alpha(level.p, level.m, level.d, bn)
            }
        };
        if alpha != level.alpha {
            problems.push(format!("level {idx}: alpha {} recomputes to {alpha}", level.alpha));
        }
        level.alpha = alpha;
    }
    let recomputed = combine_levels(cert.m, cert.discarded, &levels);
    if recomputed != cert.alg_val {
        problems.push(format!("alg-val {} recomputes to {recomputed}", cert.alg_val));
    }
    ReplayReport {
        ok: problems.is_empty(),
        recomputed,
        problems,
    }
}
