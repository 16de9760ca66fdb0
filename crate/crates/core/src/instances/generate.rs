//! Seeded generators. All randomness comes from `ChaCha8Rng::seed_from_u64`,
//! which produces the same stream on every platform.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CspInstance, Predicate, SmoothingPlan, XorInstance};
use crate::{Error, Result};

/// How clause scopes are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum HypergraphModel {
    /// Uniform k-subsets, with replacement.
    #[default]
    Uniform,
    /// Vertices weighted `(i+1)^-exponent`, k drawn without replacement.
    Skewed { exponent: f64 },
    /// A fraction of the clauses contains the core `{1..core}`.
    Sunflower { core: u32, fraction: f64 },
}

/// Distribution of the XOR coefficients `b_C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CoeffDist {
    #[default]
    Signs,
    /// Uniform on `[-1, 1]`.
    Interval,
    /// Every coefficient `+1`.
    AllOnes,
}

fn check_dims(n: u32, k: u32) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::param(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    Ok(())
}

/// Draw `m` sorted k-subsets of `[n]` according to `model`.
pub fn sample_hypergraph(
    model: HypergraphModel,
    n: u32,
    k: u32,
    m: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<u32>>> {
    check_dims(n, k)?;
    let draw_uniform = |rng: &mut dyn rand::RngCore| -> Vec<u32> {
        let mut c: Vec<u32> = index::sample(rng, n as usize, k as usize)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        c.sort_unstable();
        c
    };
    match model {
        HypergraphModel::Uniform => Ok((0..m).map(|_| draw_uniform(rng)).collect()),
        HypergraphModel::Skewed { exponent } => {
            if !exponent.is_finite() || exponent < 0.0 {
                return Err(Error::param("skew exponent must be finite and >= 0"));
            }
            let weights: Vec<f64> = (0..n).map(|i| (i as f64 + 1.0).powf(-exponent)).collect();
            (0..m)
                .map(|_| {
                    let mut c: Vec<u32> =
                        index::sample_weighted(rng, n as usize, |i| weights[i], k as usize)
                            .map_err(|e| Error::param(format!("weighted sampling failed: {e}")))?
                            .into_iter()
                            .map(|v| v as u32)
                            .collect();
                    c.sort_unstable();
                    Ok(c)
                })
                .collect()
        }
        HypergraphModel::Sunflower { core, fraction } => {
            if core >= k || !(0.0..=1.0).contains(&fraction) {
                return Err(Error::param("sunflower needs core < k and fraction in [0,1]"));
            }
            let petals = n - core;
            let mut out = Vec::with_capacity(m);
            for _ in 0..m {
                if rng.random_bool(fraction) {
                    let mut c: Vec<u32> = (0..core).collect();
                    c.extend(
                        index::sample(rng, petals as usize, (k - core) as usize)
                            .into_iter()
                            .map(|v| v as u32 + core),
                    );
                    c.sort_unstable();
                    out.push(c);
                } else {
                    out.push(draw_uniform(rng));
                }
            }
            Ok(out)
        }
    }
}

fn draw_coeff(dist: CoeffDist, rng: &mut impl Rng) -> f64 {
    match dist {
        CoeffDist::Signs => random_sign(rng) as f64,
        CoeffDist::Interval => rng.random_range(-1.0..=1.0),
        CoeffDist::AllOnes => 1.0,
    }
}

pub(crate) fn random_sign(rng: &mut impl Rng) -> i8 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Uniformly random k-XOR: `m` uniform k-subsets with uniform `±1` signs.
pub fn gen_random_xor(n: u32, k: u32, m: usize, seed: u64) -> Result<XorInstance> {
    if k < 2 {
        return Err(Error::param("arity must be at least 2"));
    }
    gen_xor(HypergraphModel::Uniform, CoeffDist::Signs, n, k, m, seed)
}

/// Semirandom k-XOR: clause structure from `model`, independent coefficients from `dist`.
pub fn gen_xor(
    model: HypergraphModel,
    dist: CoeffDist,
    n: u32,
    k: u32,
    m: usize,
    seed: u64,
) -> Result<XorInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clauses = sample_hypergraph(model, n, k, m, &mut rng)?;
    let coeffs = (0..m).map(|_| draw_coeff(dist, &mut rng)).collect();
    XorInstance::new(n, k, clauses, coeffs)
}

/// CSP with scopes from `model` (randomly ordered) and uniform literal patterns.
pub fn gen_csp(
    predicate: Predicate,
    model: HypergraphModel,
    n: u32,
    m: usize,
    seed: u64,
) -> Result<CspInstance> {
    let k = predicate.k();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scopes = sample_hypergraph(model, n, k, m, &mut rng)?;
    for s in &mut scopes {
        rand::seq::SliceRandom::shuffle(s.as_mut_slice(), &mut rng);
    }
    let literals = (0..m)
        .map(|_| (0..k).map(|_| random_sign(&mut rng)).collect())
        .collect();
    CspInstance::new(n, predicate, scopes, literals)
}

/// Replace literal patterns so that `x` satisfies every constraint; each
/// pattern is uniform among the satisfying ones.
pub fn plant_literals(inst: &CspInstance, x: &[i8], seed: u64) -> Result<CspInstance> {
    if x.len() != inst.n as usize {
        return Err(Error::param("planted assignment has wrong length"));
    }
    let accepting: Vec<usize> = (0..inst.predicate.truth().len())
        .filter(|&z| inst.predicate.value_at(z))
        .collect();
    if accepting.is_empty() {
        return Err(Error::param("predicate has no satisfying point"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let literals = inst
        .scopes
        .iter()
        .map(|scope| {
            let z = accepting[rng.random_range(0..accepting.len())];
            scope
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let zi: i8 = if z >> i & 1 == 1 { -1 } else { 1 };
                    zi * x[v as usize]
                })
                .collect()
        })
        .collect();
    CspInstance::new(inst.n, inst.predicate.clone(), inst.scopes.clone(), literals)
}

/// Smooth `inst`: every literal `(C, i)` joins the reset set with probability
/// `p_{C,i}`, then each selected literal gets a fresh uniform sign.
/// Also returns `q = (1/m) Σ_C Π_i p_{C,i}`.
pub fn smooth_csp(inst: &CspInstance, plan: &SmoothingPlan) -> Result<(CspInstance, f64)> {
    let k = inst.k as usize;
    if plan.probabilities.len() != inst.m() {
        return Err(Error::param(format!(
            "plan has {} rows for {} constraints",
            plan.probabilities.len(),
            inst.m()
        )));
    }
    for (c, row) in plan.probabilities.iter().enumerate() {
        if row.len() != k {
            return Err(Error::param(format!("plan row {c} has {} entries, expected {k}", row.len())));
        }
        if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::param(format!("plan row {c}: probability {p} outside [0,1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let mut literals = inst.literals.clone();
    for (lits, probs) in literals.iter_mut().zip(&plan.probabilities) {
        let selected: Vec<bool> = probs.iter().map(|&p| rng.random_bool(p)).collect();
        for (lit, sel) in lits.iter_mut().zip(selected) {
            if sel {
                *lit = random_sign(&mut rng);
            }
        }
    }
    let q = if inst.m() == 0 {
        0.0
    } else {
        plan.probabilities
            .iter()
            .map(|row| row.iter().product::<f64>())
            .sum::<f64>()
            / inst.m() as f64
    };
    let out = CspInstance::new(inst.n, inst.predicate.clone(), inst.scopes.clone(), literals)?;
    Ok((out, q))
}
