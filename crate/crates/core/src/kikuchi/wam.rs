use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::instances::XorInstance;
use crate::linalg::SparseMatrix;
use crate::{Error, Result};

/// How `build_wam_matrix` treats clause pairs sharing two or more variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum WamMode {
    /// Refuse such instances.
    #[default]
    Strict,
    /// Build anyway; pairs whose non-owner parts meet are skipped and
    /// coinciding cells from different pairs are summed.
    Lenient,
}

/// The tuple-indexed matrix over `[n]^ℓ`. Tuples are ranked in base `n`,
/// first coordinate most significant.
#[derive(Debug, Clone)]
pub struct WamMatrix {
    pub n: u32,
    pub ell: usize,
    pub matrix: SparseMatrix,
}

impl WamMatrix {
    pub fn rank(&self, tuple: &[u32]) -> usize {
        tuple.iter().fold(0usize, |acc, &v| acc * self.n as usize + v as usize)
    }

    pub fn unrank(&self, mut rank: usize) -> Vec<u32> {
        let mut out = vec![0; self.ell];
        for slot in out.iter_mut().rev() {
            *slot = (rank % self.n as usize) as u32;
            rank /= self.n as usize;
        }
        out
    }
}

/// Assign each clause to its smallest variable.
pub fn min_owner_partition(inst: &XorInstance) -> Vec<u32> {
    inst.clauses.iter().map(|c| c[0]).collect()
}

fn check_pairwise(inst: &XorInstance) -> Result<()> {
    for (i, a) in inst.clauses.iter().enumerate() {
        for (j, b) in inst.clauses.iter().enumerate().skip(i + 1) {
            if a.iter().filter(|v| b.contains(v)).count() > 1 {
                return Err(Error::param(format!(
                    "clauses {} and {} share more than one variable",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// `A = Σ_u A_u` with `A_u(S, T) = b_{C1} b_{C2}` whenever `S` and `T` agree
/// outside two positions `i < j`, `{S_i, S_j}` takes one element from each of
/// `C1 \ {u}` and `C2 \ {u}`, and `{T_i, T_j}` holds the other two.
pub fn build_wam_matrix(
    inst: &XorInstance,
    owners: &[u32],
    ell: usize,
    mode: WamMode,
    max_dim: usize,
) -> Result<WamMatrix> {
    if inst.k != 3 {
        return Err(Error::Unsupported("the tuple matrix is defined for k = 3".into()));
    }
    if owners.len() != inst.m() {
        return Err(Error::param("one owner per clause required"));
    }
    if ell < 2 {
        return Err(Error::param("ell must be at least 2"));
    }
    let dim = (inst.n as u128)
        .checked_pow(ell as u32)
        .filter(|&d| d <= max_dim as u128)
        .ok_or_else(|| Error::guard(format!("n^ell exceeds the cap of {max_dim} rows")))? as usize;
    if mode == WamMode::Strict {
        check_pairwise(inst)?;
    }
    let mut rests: Vec<Vec<(usize, [u32; 2])>> = vec![Vec::new(); inst.n as usize];
    for (id, (c, &u)) in inst.clauses.iter().zip(owners).enumerate() {
        if !c.contains(&u) {
            return Err(Error::param(format!("owner {} not in clause {}", u + 1, id + 1)));
        }
        let r: Vec<u32> = c.iter().copied().filter(|&v| v != u).collect();
        rests[u as usize].push((id, [r[0], r[1]]));
    }
    let wm = WamMatrix {
        n: inst.n,
        ell,
        matrix: SparseMatrix::zeros(0),
    };
    let n = inst.n as usize;
    let free = ell - 2;
    let mut cells = Vec::new();
    for part in &rests {
        for (a, &(id1, r1)) in part.iter().enumerate() {
            for &(id2, r2) in &part[a + 1..] {
                if r1.iter().any(|v| r2.contains(v)) {
                    continue;
                }
                let value = inst.coeffs[id1] * inst.coeffs[id2];
                for i in 0..ell {
                    for j in i + 1..ell {
                        for fill in 0..n.pow(free as u32) {
                            let mut base = vec![0u32; ell];
                            let mut f = fill;
                            for (t, slot) in base.iter_mut().enumerate().rev() {
                                if t != i && t != j {
                                    *slot = (f % n) as u32;
                                    f /= n;
                                }
                            }
                            for s1 in 0..2 {
                                for s2 in 0..2 {
                                    let held = [r1[s1], r2[s2]];
                                    let other = [r1[1 - s1], r2[1 - s2]];
                                    for flip_s in 0..2 {
                                        for flip_t in 0..2 {
                                            let mut s = base.clone();
                                            let mut t = base.clone();
                                            s[i] = held[flip_s];
                                            s[j] = held[1 - flip_s];
                                            t[i] = other[flip_t];
                                            t[j] = other[1 - flip_t];
                                            cells.push((wm.rank(&s) as u32, wm.rank(&t) as u32, value));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(WamMatrix {
        matrix: SparseMatrix::from_triplets(dim, cells)?,
        ..wm
    })
}

/// The planted structure of the adversarial instance: `ell_prime` clauses
/// `{u, v_i, w_i}` with coefficient `+1` and pairwise disjoint `{v_i, w_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WamGadget {
    pub u: u32,
    pub ell_prime: usize,
    pub pairs: Vec<(u32, u32)>,
    /// Padding variable for positions past `ell_prime`.
    pub z: u32,
}

impl WamGadget {
    /// The `2^{ℓ'}` tuples `(r_1, …, r_{ℓ'}, z, …, z)`, bit `i` of the
    /// position choosing `w_i` over `v_i`.
    pub fn tuples(&self, ell: usize) -> Vec<Vec<u32>> {
        (0..1usize << self.ell_prime)
            .map(|bits| {
                let mut t: Vec<u32> = self
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(v, w))| if bits >> i & 1 == 1 { w } else { v })
                    .collect();
                t.resize(ell, self.z);
                t
            })
            .collect()
    }
}

/// A 3-XOR instance in which variable `0` carries `ℓ' = min(⌈m/2n⌉, ℓ)` clauses
/// `{0, 2i+1, 2i+2}` of coefficient `+1`. The other clauses are random with
/// random signs and contain at most one gadget variable.
pub fn adversarial_wam_instance(n: u32, m: usize, ell: usize, seed: u64) -> Result<(XorInstance, WamGadget)> {
    let ell_prime = m.div_ceil(2 * n as usize).min(ell);
    if ell_prime == 0 {
        return Err(Error::param("need m >= 1 and ell >= 1"));
    }
    let gadget_vars = 2 * ell_prime as u32;
    let others = n.saturating_sub(gadget_vars + 1);
    if n < gadget_vars + 1 || (m > ell_prime && others + 1 < 2) {
        return Err(Error::param(format!(
            "n = {n} too small for {ell_prime} gadget clauses"
        )));
    }
    let pairs: Vec<(u32, u32)> = (0..ell_prime as u32).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    let mut clauses: Vec<Vec<u32>> = pairs.iter().map(|&(v, w)| vec![0, v, w]).collect();
    let mut coeffs = vec![1.0; ell_prime];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let is_gadget = |v: u32| v >= 1 && v <= gadget_vars;
    while clauses.len() < m {
        let c: Vec<u32> = sample(&mut rng, n as usize, 3).into_iter().map(|v| v as u32).collect();
        if c.iter().filter(|&&v| is_gadget(v)).count() > 1 {
            continue;
        }
        clauses.push(c);
        coeffs.push(if rng.random::<bool>() { 1.0 } else { -1.0 });
    }
    let inst = XorInstance::new(n, 3, clauses, coeffs)?;
    Ok((
        inst,
        WamGadget {
            u: 0,
            ell_prime,
            pairs,
            z: 0,
        },
    ))
}

/// The `2^{ℓ'} × 2^{ℓ'}` submatrix of `A` on the gadget tuples, dense.
pub fn wam_submatrix(wm: &WamMatrix, gadget: &WamGadget) -> Vec<Vec<f64>> {
    let ranks: Vec<usize> = gadget.tuples(wm.ell).iter().map(|t| wm.rank(t)).collect();
    ranks
        .iter()
        .map(|&r| ranks.iter().map(|&c| wm.matrix.get(r, c)).collect())
        .collect()
}
