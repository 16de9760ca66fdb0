//! Kikuchi matrices: the direct even-arity matrix, the cloned bipartite
//! matrix used for refutation, the Kikuchi graph, and the tuple-indexed
//! matrix of the older odd-arity proposal.

mod build;
mod graph;
mod wam;

pub use build::{build_bipartite_kikuchi, build_even_kikuchi, butterfly_degree, KikuchiConfig};
pub use graph::{kikuchi_graph, KikuchiGraph};
pub use wam::{
    adversarial_wam_instance, build_wam_matrix, min_owner_partition, wam_submatrix, WamGadget,
    WamMatrix, WamMode,
};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hypergraph::BipartiteHypergraph;
use crate::instances::monomial;
use crate::linalg::SparseMatrix;
use crate::subsets::{binomial, var_of, SubsetIndex};
use crate::{Error, Result};

/// Number of cells each ordered pair `(C, C')` generates in the cloned matrix.
///
/// Requires `k >= 2` and `k - 1 <= ell <= n`.
pub fn compute_d(k: usize, n: u32, ell: usize) -> Result<u128> {
    if k < 2 {
        return Err(Error::param("arity must be at least 2"));
    }
    if ell + 1 < k || ell > n as usize {
        return Err(Error::param(format!(
            "ell = {ell} outside {}..={n} for arity {k}",
            k - 1
        )));
    }
    let overflow = || Error::guard("replication constant overflows 128 bits");
    let rest = binomial(2 * n as u64 - 2 * (k as u64 - 1), (ell + 1 - k) as u64).ok_or_else(overflow)?;
    let km1 = k as u64 - 1;
    let split = if k % 2 == 1 {
        let h = binomial(km1, km1 / 2).unwrap();
        h * h
    } else {
        2 * binomial(km1, k as u64 / 2).unwrap() * binomial(km1, (k as u64 - 2) / 2).unwrap()
    };
    split.checked_mul(rest).ok_or_else(overflow)
}

/// `ψ(y, x) = (1/m) Σ_u y_u Σ_{C ∈ H_u} b_{u,C} x_C` with `|C| = k - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitePolynomial {
    pub k: usize,
    pub graph: BipartiteHypergraph,
    pub coeffs: Vec<Vec<f64>>,
}

impl BipartitePolynomial {
    pub fn new(graph: BipartiteHypergraph, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.len() != graph.p() {
            return Err(Error::param("one coefficient list per partition required"));
        }
        for (u, (part, b)) in graph.parts().iter().zip(&coeffs).enumerate() {
            if part.len() != b.len() {
                return Err(Error::param(format!("partition {u}: coefficient count mismatch")));
            }
            if b.iter().any(|v| !v.is_finite() || v.abs() > 1.0) {
                return Err(Error::param(format!("partition {u}: coefficient outside [-1, 1]")));
            }
        }
        Ok(BipartitePolynomial {
            k: graph.t(),
            graph,
            coeffs,
        })
    }

    pub fn n(&self) -> u32 {
        self.graph.n()
    }

    pub fn p(&self) -> usize {
        self.graph.p()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    /// `Σ_C b_{u,C} x_C` for each partition.
    pub fn partition_sums(&self, x: &[i8]) -> Vec<f64> {
        self.graph
            .parts()
            .iter()
            .zip(&self.coeffs)
            .map(|(part, b)| part.iter().zip(b).map(|(c, &bc)| bc * monomial(x, c) as f64).sum())
            .collect()
    }

    pub fn eval(&self, y: &[i8], x: &[i8]) -> f64 {
        if self.m() == 0 {
            return 0.0;
        }
        let s: f64 = self.partition_sums(x).iter().zip(y).map(|(s, &yu)| s * yu as f64).sum();
        s / self.m() as f64
    }

    /// `max_y ψ(y, x)`, attained at `y_u = sign(Σ_C b x_C)`.
    pub fn value_at(&self, x: &[i8]) -> f64 {
        if self.m() == 0 {
            return 0.0;
        }
        self.partition_sums(x).iter().map(|s| s.abs()).sum::<f64>() / self.m() as f64
    }

    /// `Σ_u Σ_{C ≠ C'} b_{u,C} b_{u,C'} x_C x_{C'}` over ordered pairs.
    pub fn pair_sum(&self, x: &[i8]) -> f64 {
        self.partition_sums(x)
            .iter()
            .zip(&self.coeffs)
            .map(|(s, b)| s * s - b.iter().map(|v| v * v).sum::<f64>())
            .sum()
    }

    /// The squared polynomial `f(x) = (p/m²)·pair_sum(x)`.
    pub fn squared_value(&self, x: &[i8]) -> f64 {
        if self.m() == 0 {
            return 0.0;
        }
        self.p() as f64 / (self.m() as f64).powi(2) * self.pair_sum(x)
    }

    /// Additive slack `p/m` of the squaring step.
    pub fn squaring_slack(&self) -> f64 {
        if self.m() == 0 {
            0.0
        } else {
            self.p() as f64 / self.m() as f64
        }
    }
}

/// A Kikuchi matrix restricted to its nonzero-pattern rows.
///
/// Rows and columns are "active" positions; `active[i]` is the rank of the
/// `i`-th active subset in `index`. Every other row of the full `N × N`
/// matrix is zero and has butterfly degree zero.
#[derive(Debug, Clone)]
pub struct KikuchiMatrix {
    pub index: SubsetIndex,
    pub d: u128,
    pub active: Vec<u64>,
    pub total: SparseMatrix,
    /// Per-partition entries `(row, col, value)` after summation within the partition.
    pub slices: Vec<Vec<(u32, u32, f64)>>,
    /// Per-partition generated-cell counts `(row, γ_u(row))`, rows ascending.
    pub butterfly: Vec<Vec<(u32, u64)>>,
    /// `γ(S) = Σ_u γ_u(S)` per active row.
    pub gamma_total: Vec<u64>,
    /// `max_u γ_u(S)` per active row.
    pub gamma_max: Vec<u64>,
    /// Number of generated cells before summation.
    pub generated: u64,
}

impl KikuchiMatrix {
    /// `N`, the number of indexed subsets.
    pub fn n_rows(&self) -> u64 {
        self.index.len()
    }

    pub fn position(&self, rank: u64) -> Option<usize> {
        self.active.binary_search(&rank).ok()
    }

    /// `x_S` for the subset at active position `i`.
    pub fn sign_of(&self, i: usize, x: &[i8]) -> i8 {
        self.index
            .unrank(self.active[i])
            .iter()
            .fold(1i8, |acc, &e| acc * x[self.element_var(e) as usize])
    }

    fn element_var(&self, e: u32) -> u32 {
        match self.index.universe() {
            crate::subsets::Universe::Plain { .. } => e,
            crate::subsets::Universe::Cloned { .. } => var_of(e),
        }
    }

    /// `(x^{⋆ℓ})ᵀ A x^{⋆ℓ}`.
    pub fn quadratic_form(&self, x: &[i8]) -> f64 {
        let signs: Vec<f64> = (0..self.active.len()).map(|i| self.sign_of(i, x) as f64).collect();
        self.total
            .triplets()
            .map(|(r, c, v)| v * signs[r as usize] * signs[c as usize])
            .sum()
    }

    /// Coordinate text: one `row col value` line per nonzero, using subset ranks.
    pub fn export_coordinates(&self) -> String {
        let mut out = format!("% kikuchi {} {} {}\n", self.index.len(), self.index.len(), self.total.nnz());
        for (r, c, v) in self.total.triplets() {
            let _ = writeln!(out, "{} {} {}", self.active[r as usize], self.active[c as usize], v);
        }
        out
    }
}

/// Both sides of `(x^{⋆ℓ})ᵀ A x^{⋆ℓ} = (m²D/p)·f(x)`.
///
/// The right side is evaluated as `D · Σ_u Σ_{C≠C'} b b x_C x_{C'}`, which is
/// the same quantity without the division.
pub fn quad_form_identity(km: &KikuchiMatrix, psi: &BipartitePolynomial, x: &[i8]) -> Result<(f64, f64)> {
    if x.len() != psi.n() as usize || km.index.universe().variables() != psi.n() {
        return Err(Error::param("assignment and matrix dimensions disagree"));
    }
    let lhs = km.quadratic_form(x);
    let rhs = km.d as f64 * psi.pair_sum(x);
    Ok((lhs, rhs))
}
