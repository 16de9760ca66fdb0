use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SparseMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecConfig {
    /// Target relative slack of the certified bound.
    pub tau: f64,
    /// Largest component handled by dense factorization; bigger ones use the
    /// row-sum / Frobenius fallback.
    pub dense_cap: usize,
    /// Components up to this size get their estimate from a dense eigensolver,
    /// larger ones from Lanczos.
    pub dense_estimate_cap: usize,
    pub lanczos_steps: usize,
    pub max_widenings: u32,
    pub seed: u64,
}

impl Default for SpecConfig {
    fn default() -> Self {
        SpecConfig {
            tau: 1e-6,
            dense_cap: 3000,
            dense_estimate_cap: 400,
            lanczos_steps: 200,
            max_widenings: 40,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMethod {
    Zero,
    Factorization,
    Fallback,
}

/// A certified upper bound `sigma >= ‖M‖₂` and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecBound {
    pub sigma: f64,
    /// Largest lower estimate seen across components.
    pub estimate: f64,
    pub method: BoundMethod,
    pub components: usize,
    pub fallback_components: usize,
    /// Most gap widenings any component needed before its factorizations passed.
    pub widenings: u32,
}

impl SpecBound {
    fn zero() -> Self {
        SpecBound {
            sigma: 0.0,
            estimate: 0.0,
            method: BoundMethod::Zero,
            components: 0,
            fallback_components: 0,
            widenings: 0,
        }
    }
}

const U: f64 = f64::EPSILON / 2.0;

/// Upper bound on the spectral norm of a symmetric sparse matrix.
///
/// Each connected component is estimated (dense eigensolver or Lanczos), then
/// `σ = λ̂(1 + τ·2^j)` is certified by Cholesky factorizations of `σI - M` and
/// `σI + M`, shifted by a margin that absorbs floating-point error in the
/// factorization. If no attempt succeeds, or the component is too large, the
/// component falls back to `min(max row ℓ1, Frobenius)`.
pub fn certified_specnorm(m: &SparseMatrix, cfg: &SpecConfig) -> Result<SpecBound> {
    if !m.is_symmetric() {
        return Err(Error::param("certified_specnorm needs a symmetric matrix"));
    }
    if !(cfg.tau > 0.0) {
        return Err(Error::param("tau must be positive"));
    }
    let mut out = SpecBound::zero();
    for comp in m.components() {
        let sub = SparseMatrix::from_triplets(comp.len(), m.block(&comp, &comp))?;
        if sub.nnz() == 0 {
            continue;
        }
        out.components += 1;
        let (sigma, estimate, widen) = component_bound(&sub, cfg);
        if widen.is_none() {
            out.fallback_components += 1;
        }
        out.sigma = out.sigma.max(sigma);
        out.estimate = out.estimate.max(estimate);
        out.widenings = out.widenings.max(widen.unwrap_or(0));
    }
    out.method = if out.components == 0 {
        BoundMethod::Zero
    } else if out.fallback_components > 0 {
        BoundMethod::Fallback
    } else {
        BoundMethod::Factorization
    };
    Ok(out)
}

fn fallback(m: &SparseMatrix) -> f64 {
    let raw = m.max_row_l1().min(m.frobenius());
    raw * (1.0 + 4.0 * (m.dim() as f64 + 2.0) * U)
}

fn to_faer(m: &SparseMatrix) -> Mat<f64> {
    let mut d = Mat::<f64>::zeros(m.dim(), m.dim());
    for (r, c, v) in m.triplets() {
        d[(r as usize, c as usize)] = v;
    }
    d
}

/// Returns (bound, estimate, widenings used or None for the fallback).
fn component_bound(m: &SparseMatrix, cfg: &SpecConfig) -> (f64, f64, Option<u32>) {
    let s = m.dim();
    if s == 1 {
        let v = m.get(0, 0).abs();
        return (v, v, Some(0));
    }
    let estimate = if s <= cfg.dense_estimate_cap {
        dense_norm_faer(&to_faer(m)).unwrap_or(0.0)
    } else {
        lanczos_extreme(m, cfg.lanczos_steps, cfg.seed)
    };
    if s > cfg.dense_cap || !(estimate > 0.0) {
        return (fallback(m), estimate, None);
    }
    let dense = to_faer(m);
    let trace_abs: f64 = (0..s).map(|i| dense[(i, i)].abs()).sum();
    let diag_max = (0..s).map(|i| dense[(i, i)].abs()).fold(0.0, f64::max);
    let gamma = (s as f64 + 1.0) * U / (1.0 - (s as f64 + 1.0) * U);
    let cap = fallback(m);
    for j in 0..=cfg.max_widenings {
        let sigma = estimate * (1.0 + cfg.tau * 2f64.powi(j as i32));
        if sigma >= cap {
            break;
        }
        let margin = 2.0
            * (gamma / (1.0 - 2.0 * gamma) * (s as f64 * sigma + trace_abs)
                + 4.0 * U * (sigma + diag_max))
            + f64::MIN_POSITIVE * s as f64;
        let shift = sigma - margin;
        if shift <= 0.0 {
            continue;
        }
        if shifted_is_pd(&dense, shift, -1.0) && shifted_is_pd(&dense, shift, 1.0) {
            return (sigma, estimate, Some(j));
        }
    }
    (cap, estimate, None)
}

/// Cholesky of `shift·I + sign·M` succeeds.
fn shifted_is_pd(m: &Mat<f64>, shift: f64, sign: f64) -> bool {
    let n = m.nrows();
    let a = Mat::<f64>::from_fn(n, n, |i, j| {
        let v = sign * m[(i, j)];
        if i == j {
            shift + v
        } else {
            v
        }
    });
    a.as_ref().llt(Side::Lower).is_ok()
}

fn dense_norm_faer(m: &Mat<f64>) -> Option<f64> {
    let eig = m.as_ref().self_adjoint_eigenvalues(Side::Lower).ok()?;
    Some(eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs())))
}

/// `max |λ|` by a dense symmetric eigensolver.
pub fn dense_norm(m: &SparseMatrix) -> Result<f64> {
    dense_norm_faer(&to_faer(m)).ok_or_else(|| Error::Invariant("eigensolver did not converge".into()))
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn random_unit(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

/// Largest `|Ritz value|` after `steps` Lanczos iterations with full
/// reorthogonalization. Always a lower bound on `‖M‖₂`, up to rounding.
pub fn lanczos_extreme(m: &SparseMatrix, steps: usize, seed: u64) -> f64 {
    let dim = m.dim();
    if dim == 0 || m.nnz() == 0 {
        return 0.0;
    }
    let steps = steps.min(dim).max(1);
    let mut basis: Vec<Vec<f64>> = vec![random_unit(dim, seed)];
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut w = vec![0.0; dim];
    let scale = m.max_row_l1();
    for j in 0..steps {
        m.matvec(&basis[j], &mut w);
        let a: f64 = w.iter().zip(&basis[j]).map(|(x, y)| x * y).sum();
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let d: f64 = w.iter().zip(q).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= d * y);
            }
        }
        let b = normalize(&mut w);
        if j + 1 == steps || b <= 1e-12 * scale {
            break;
        }
        beta.push(b);
        basis.push(w.clone());
    }
    let k = alpha.len();
    let t = Mat::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    dense_norm_faer(&t).unwrap_or(0.0)
}

/// Power iteration from a seeded random start; returns the largest
/// `‖Av‖/‖v‖` observed, a lower bound on `‖A‖₂`.
pub fn power_iteration(m: &SparseMatrix, iters: usize, seed: u64) -> f64 {
    let dim = m.dim();
    if dim == 0 {
        return 0.0;
    }
    let mut v = random_unit(dim, seed);
    let mut w = vec![0.0; dim];
    let mut best: f64 = 0.0;
    for _ in 0..iters {
        m.matvec(&v, &mut w);
        let norm = normalize(&mut w);
        best = best.max(norm);
        if norm == 0.0 {
            break;
        }
        std::mem::swap(&mut v, &mut w);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(dim: usize, entries: &[(u32, u32, f64)]) -> SparseMatrix {
        let mut t = Vec::new();
        for &(r, c, v) in entries {
            t.push((r, c, v));
            if r != c {
                t.push((c, r, v));
            }
        }
        SparseMatrix::from_triplets(dim, t).unwrap()
    }

    #[test]
    fn zero_matrix() {
        let b = certified_specnorm(&SparseMatrix::zeros(5), &SpecConfig::default()).unwrap();
        assert_eq!(b.sigma, 0.0);
        assert_eq!(b.method, BoundMethod::Zero);
    }

    #[test]
    fn swap_matrix() {
        let cfg = SpecConfig::default();
        let b = certified_specnorm(&sym(2, &[(0, 1, 1.0)]), &cfg).unwrap();
        assert!(b.sigma >= 1.0 && b.sigma <= 1.0 + cfg.tau, "{b:?}");

        let b = certified_specnorm(&sym(2, &[(0, 0, 1.0), (0, 1, 1.0), (1, 1, -1.0)]), &cfg).unwrap();
        let exact = 2f64.sqrt();
        assert!(b.sigma >= exact && b.sigma <= exact * (1.0 + cfg.tau), "{b:?}");
        assert_eq!(b.method, BoundMethod::Factorization);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = SparseMatrix::from_triplets(2, vec![(0, 1, 1.0)]).unwrap();
        assert!(certified_specnorm(&m, &SpecConfig::default()).is_err());
    }

    #[test]
    fn lanczos_path_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut e = Vec::new();
        for i in 0..120u32 {
            for j in i..120 {
                if rng.random_bool(0.05) {
                    e.push((i, j, rng.random_range(-1.0..1.0)));
                }
            }
        }
        let m = sym(120, &e);
        let exact = dense_norm(&m).unwrap();
        let cfg = SpecConfig {
            dense_estimate_cap: 10,
            ..SpecConfig::default()
        };
        let b = certified_specnorm(&m, &cfg).unwrap();
        assert!(b.sigma >= exact);
        assert!(b.sigma <= exact * (1.0 + 1e-3), "{} vs {exact}", b.sigma);
        assert!(lanczos_extreme(&m, 120, 3) <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn fallback_is_an_upper_bound() {
        let m = sym(4, &[(0, 1, 2.0), (1, 2, -1.0), (2, 3, 0.5), (3, 3, 1.0)]);
        let cfg = SpecConfig {
            dense_cap: 1,
            ..SpecConfig::default()
        };
        let b = certified_specnorm(&m, &cfg).unwrap();
        assert_eq!(b.method, BoundMethod::Fallback);
        assert!(b.sigma >= dense_norm(&m).unwrap());
    }

    #[test]
    fn power_iteration_lower_bounds() {
        let m = sym(3, &[(0, 1, 1.0), (1, 2, 1.0)]);
        let p = power_iteration(&m, 200, 5);
        let exact = 2f64.sqrt();
        assert!(p <= exact * (1.0 + 1e-12) && p > exact * 0.999);
    }
}
