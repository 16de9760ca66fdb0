use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_d, BipartitePolynomial, KikuchiMatrix};
use crate::instances::XorInstance;
use crate::linalg::SparseMatrix;
use crate::subsets::{binomial, clone_of, for_each_combination, SubsetIndex, Universe};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KikuchiConfig {
    /// Refuse to generate more than this many cells.
    pub max_cells: u64,
}

impl Default for KikuchiConfig {
    fn default() -> Self {
        KikuchiConfig { max_cells: 50_000_000 }
    }
}

type Cell = (u64, u64, f64);

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out
}

fn minus(all: &[u32], part: &[u32]) -> Vec<u32> {
    all.iter().copied().filter(|e| !part.contains(e)).collect()
}

/// Emit every `(S, T)` with `S ↔ T` for the ordered pair `(c, c2)`.
fn pair_cells(
    index: &SubsetIndex,
    k: usize,
    c: &[u32],
    c2: &[u32],
    value: f64,
    emit: &mut impl FnMut(u64, u64, f64),
) {
    let n = index.universe().variables();
    let ell = index.ell();
    let first: Vec<u32> = c.iter().map(|&v| clone_of(v, 0)).collect();
    let second: Vec<u32> = c2.iter().map(|&v| clone_of(v, 1)).collect();
    let rest: Vec<u32> = (0..2 * n)
        .filter(|e| !first.contains(e) && !second.contains(e))
        .collect();
    let fill = ell + 1 - k;
    let splits: Vec<(usize, usize)> = if k % 2 == 1 {
        vec![((k - 1) / 2, (k - 1) / 2)]
    } else {
        vec![(k / 2, (k - 2) / 2), ((k - 2) / 2, k / 2)]
    };
    for (a_size, b_size) in splits {
        for_each_combination(&first, a_size, |a| {
            let a_rest = minus(&first, a);
            for_each_combination(&second, b_size, |b| {
                let s_core = merge_sorted(a, b);
                let t_core = merge_sorted(&a_rest, &minus(&second, b));
                for_each_combination(&rest, fill, |f| {
                    let s = merge_sorted(&s_core, f);
                    let t = merge_sorted(&t_core, f);
                    emit(index.rank(&s), index.rank(&t), value);
                });
            });
        });
    }
}

/// Cells of one partition plus its per-row generated counts.
fn partition_cells(
    index: &SubsetIndex,
    k: usize,
    d: u128,
    part: &[Vec<u32>],
    coeffs: &[f64],
) -> Result<(Vec<Cell>, Vec<(u64, u64)>)> {
    let mut cells = Vec::new();
    let mut gamma: HashMap<u64, u64> = HashMap::new();
    for (i, c) in part.iter().enumerate() {
        for (j, c2) in part.iter().enumerate() {
            if i == j {
                continue;
            }
            let before = cells.len();
            pair_cells(index, k, c, c2, coeffs[i] * coeffs[j], &mut |s, t, v| {
                cells.push((s, t, v));
                *gamma.entry(s).or_default() += 1;
            });
            if (cells.len() - before) as u128 != d {
                return Err(Error::Invariant(format!(
                    "pair generated {} cells, expected {d}",
                    cells.len() - before
                )));
            }
        }
    }
    let mut gamma: Vec<(u64, u64)> = gamma.into_iter().collect();
    gamma.sort_unstable();
    Ok((sum_cells(cells), gamma))
}

fn sum_cells(mut cells: Vec<Cell>) -> Vec<Cell> {
    cells.sort_unstable_by_key(|&(s, t, _)| (s, t));
    let mut out: Vec<Cell> = Vec::with_capacity(cells.len());
    for (s, t, v) in cells {
        match out.last_mut() {
            Some(last) if last.0 == s && last.1 == t => last.2 += v,
            _ => out.push((s, t, v)),
        }
    }
    out.retain(|c| c.2 != 0.0);
    out
}

fn assemble(
    index: SubsetIndex,
    d: u128,
    per_part: Vec<(Vec<Cell>, Vec<(u64, u64)>)>,
) -> Result<KikuchiMatrix> {
    let mut active: Vec<u64> = per_part
        .iter()
        .flat_map(|(cells, gamma)| {
            cells
                .iter()
                .flat_map(|&(s, t, _)| [s, t])
                .chain(gamma.iter().map(|&(s, _)| s))
        })
        .collect();
    active.sort_unstable();
    active.dedup();
    let pos = |rank: u64| active.binary_search(&rank).expect("active row") as u32;
    let mut slices = Vec::with_capacity(per_part.len());
    let mut butterfly = Vec::with_capacity(per_part.len());
    let mut gamma_total = vec![0u64; active.len()];
    let mut gamma_max = vec![0u64; active.len()];
    let mut generated = 0u64;
    let mut all = Vec::new();
    for (cells, gamma) in per_part {
        let slice: Vec<(u32, u32, f64)> = cells.iter().map(|&(s, t, v)| (pos(s), pos(t), v)).collect();
        all.extend_from_slice(&slice);
        let counts: Vec<(u32, u64)> = gamma.iter().map(|&(s, g)| (pos(s), g)).collect();
        for &(r, g) in &counts {
            gamma_total[r as usize] += g;
            gamma_max[r as usize] = gamma_max[r as usize].max(g);
            generated += g;
        }
        slices.push(slice);
        butterfly.push(counts);
    }
    let total = SparseMatrix::from_triplets(active.len(), all)?;
    Ok(KikuchiMatrix {
        index,
        d,
        active,
        total,
        slices,
        butterfly,
        gamma_total,
        gamma_max,
        generated,
    })
}

/// The cloned Kikuchi matrix `A = Σ_u A_u` of the squared polynomial of `psi`.
pub fn build_bipartite_kikuchi(psi: &BipartitePolynomial, ell: usize, cfg: &KikuchiConfig) -> Result<KikuchiMatrix> {
    let k = psi.k;
    let n = psi.n();
    let d = compute_d(k, n, ell)?;
    let index = SubsetIndex::new(Universe::Cloned { n }, ell)?;
    let pairs: u128 = psi
        .graph
        .parts()
        .iter()
        .map(|p| (p.len() as u128) * (p.len().saturating_sub(1) as u128))
        .sum();
    let cells = pairs.saturating_mul(d);
    if cells > cfg.max_cells as u128 {
        return Err(Error::guard(format!(
            "Kikuchi construction needs {cells} cells, cap is {}",
            cfg.max_cells
        )));
    }
    let per_part = psi
        .graph
        .parts()
        .par_iter()
        .zip(psi.coeffs.par_iter())
        .map(|(part, b)| partition_cells(&index, k, d, part, b))
        .collect::<Result<Vec<_>>>()?;
    assemble(index, d, per_part)
}

/// The direct Kikuchi matrix of an even-arity XOR instance:
/// `A(S, T) = Σ_{C : S ⊕ T = C} b_C` over `ell`-subsets of `[n]`.
/// The `d` field holds the per-clause cell count `C(k, k/2)·C(n-k, ℓ-k/2)`.
pub fn build_even_kikuchi(inst: &XorInstance, ell: usize, cfg: &KikuchiConfig) -> Result<KikuchiMatrix> {
    let k = inst.k as usize;
    if k % 2 == 1 {
        return Err(Error::Unsupported(
            "odd arity: use the bipartite Kikuchi matrix".into(),
        ));
    }
    if ell < k / 2 || ell > inst.n as usize {
        return Err(Error::param(format!("ell = {ell} outside {}..={}", k / 2, inst.n)));
    }
    let index = SubsetIndex::new(Universe::Plain { n: inst.n }, ell)?;
    let per_clause = binomial(k as u64, k as u64 / 2).unwrap()
        * binomial(inst.n as u64 - k as u64, (ell - k / 2) as u64).unwrap_or(0);
    let cells = per_clause.saturating_mul(inst.m() as u128);
    if cells > cfg.max_cells as u128 {
        return Err(Error::guard(format!(
            "Kikuchi construction needs {cells} cells, cap is {}",
            cfg.max_cells
        )));
    }
    let mut out = Vec::with_capacity(cells as usize);
    let mut gamma: HashMap<u64, u64> = HashMap::new();
    for (c, &b) in inst.clauses.iter().zip(&inst.coeffs) {
        let rest: Vec<u32> = (0..inst.n).filter(|v| c.binary_search(v).is_err()).collect();
        for_each_combination(c, k / 2, |a| {
            let other = minus(c, a);
            for_each_combination(&rest, ell - k / 2, |f| {
                let s = index.rank(&merge_sorted(a, f));
                out.push((s, index.rank(&merge_sorted(&other, f)), b));
                *gamma.entry(s).or_default() += 1;
            });
        });
    }
    let mut gamma: Vec<(u64, u64)> = gamma.into_iter().collect();
    gamma.sort_unstable();
    assemble(index, per_clause, vec![(sum_cells(out), gamma)])
}

/// `γ_u(S)` counted directly from its definition: ordered pairs `C ≠ C'` in
/// the partition whose intersection pattern with `S` has the right sizes.
/// `s` holds clone elements (`2·var + clone`).
pub fn butterfly_degree(part: &[Vec<u32>], s: &[u32], k: usize) -> u64 {
    let hits = |c: &[u32], clone: u32| c.iter().filter(|&&v| s.contains(&clone_of(v, clone))).count();
    let mut count = 0;
    for (i, c) in part.iter().enumerate() {
        for (j, c2) in part.iter().enumerate() {
            if i == j {
                continue;
            }
            let pattern = (hits(c, 0), hits(c2, 1));
            let ok = if k % 2 == 1 {
                pattern == ((k - 1) / 2, (k - 1) / 2)
            } else {
                pattern == (k / 2, (k - 2) / 2) || pattern == ((k - 2) / 2, k / 2)
            };
            count += ok as u64;
        }
    }
    count
}
