//! Instance data model, generators and file formats.

mod generate;
mod io;
mod predicate;

pub use generate::{
    gen_csp, gen_random_xor, gen_xor, plant_literals, sample_hypergraph, smooth_csp, CoeffDist,
    HypergraphModel,
};
pub use io::{read_instance, read_instance_str, write_instance, write_instance_string, Format};
pub use predicate::Predicate;
pub(crate) use predicate::character;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A k-XOR instance: the polynomial `(1/m) Σ_C b_C x_C` over `x ∈ {±1}^n`.
///
/// Variables are stored zero-based; every clause is strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct XorInstance {
    pub n: u32,
    pub k: u32,
    pub clauses: Vec<Vec<u32>>,
    pub coeffs: Vec<f64>,
}

impl XorInstance {
    pub fn new(n: u32, k: u32, mut clauses: Vec<Vec<u32>>, coeffs: Vec<f64>) -> Result<Self> {
        if k < 1 {
            return Err(Error::param("arity must be positive"));
        }
        if clauses.len() != coeffs.len() {
            return Err(Error::param(format!(
                "{} clauses but {} coefficients",
                clauses.len(),
                coeffs.len()
            )));
        }
        for (i, c) in clauses.iter_mut().enumerate() {
            c.sort_unstable();
            check_clause(c, n, k as usize).map_err(|e| Error::param(format!("clause {i}: {e}")))?;
        }
        for (i, b) in coeffs.iter().enumerate() {
            if !b.is_finite() || b.abs() > 1.0 {
                return Err(Error::param(format!("coefficient {i} = {b} outside [-1, 1]")));
            }
        }
        Ok(XorInstance {
            n,
            k,
            clauses,
            coeffs,
        })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// `(1/m) Σ b_C x_C`; zero for an empty instance.
    pub fn eval(&self, x: &[i8]) -> f64 {
        if self.clauses.is_empty() {
            return 0.0;
        }
        let total: f64 = self
            .clauses
            .iter()
            .zip(&self.coeffs)
            .map(|(c, &b)| b * monomial(x, c) as f64)
            .sum();
        total / self.m() as f64
    }

    pub fn hypergraph(&self) -> crate::hypergraph::Hypergraph {
        crate::hypergraph::Hypergraph::from_sorted(self.n, self.k as usize, self.clauses.clone())
    }

    pub fn is_sign_valued(&self) -> bool {
        self.coeffs.iter().all(|&b| b == 1.0 || b == -1.0)
    }
}

/// A CSP instance with one predicate applied to literal patterns of each scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CspInstance {
    pub n: u32,
    pub k: u32,
    pub predicate: Predicate,
    /// Ordered scopes with distinct, zero-based entries.
    pub scopes: Vec<Vec<u32>>,
    /// `literals[c][i] ∈ {±1}` is the negation pattern of position `i` in scope `c`.
    pub literals: Vec<Vec<i8>>,
}

impl CspInstance {
    pub fn new(
        n: u32,
        predicate: Predicate,
        scopes: Vec<Vec<u32>>,
        literals: Vec<Vec<i8>>,
    ) -> Result<Self> {
        let k = predicate.k();
        if scopes.len() != literals.len() {
            return Err(Error::param("scopes and literal patterns differ in length"));
        }
        for (i, (s, l)) in scopes.iter().zip(&literals).enumerate() {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            check_clause(&sorted, n, k as usize)
                .map_err(|e| Error::param(format!("scope {i}: {e}")))?;
            if l.len() != k as usize || l.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::param(format!("scope {i}: literal pattern must be k signs")));
            }
        }
        Ok(CspInstance {
            n,
            k,
            predicate,
            scopes,
            literals,
        })
    }

    pub fn m(&self) -> usize {
        self.scopes.len()
    }

    /// Fraction of constraints satisfied by `x`; zero for an empty instance.
    pub fn eval(&self, x: &[i8]) -> f64 {
        if self.scopes.is_empty() {
            return 0.0;
        }
        let sat = self
            .scopes
            .iter()
            .zip(&self.literals)
            .filter(|(s, l)| self.predicate.eval_signs(s.iter().zip(l.iter()).map(|(&v, &xi)| xi * x[v as usize])))
            .count();
        sat as f64 / self.m() as f64
    }
}

/// Per-literal re-randomization probabilities for [`smooth_csp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingPlan {
    pub probabilities: Vec<Vec<f64>>,
    pub seed: u64,
}

impl SmoothingPlan {
    pub fn uniform(m: usize, k: usize, p: f64, seed: u64) -> Self {
        SmoothingPlan {
            probabilities: vec![vec![p; k]; m],
            seed,
        }
    }
}

/// Either kind of instance, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Xor(XorInstance),
    Csp(CspInstance),
}

impl Instance {
    pub fn into_xor(self) -> Result<XorInstance> {
        match self {
            Instance::Xor(x) => Ok(x),
            Instance::Csp(_) => Err(Error::param("expected an XOR instance, found a CSP instance")),
        }
    }

    pub fn into_csp(self) -> Result<CspInstance> {
        match self {
            Instance::Csp(c) => Ok(c),
            Instance::Xor(_) => Err(Error::param("expected a CSP instance, found an XOR instance")),
        }
    }
}

#[inline]
pub(crate) fn monomial(x: &[i8], clause: &[u32]) -> i8 {
    clause.iter().fold(1i8, |acc, &v| acc * x[v as usize])
}

pub(crate) fn check_clause(sorted: &[u32], n: u32, k: usize) -> std::result::Result<(), String> {
    if sorted.len() != k {
        return Err(format!("expected {k} variables, found {}", sorted.len()));
    }
    if let Some(&v) = sorted.iter().find(|&&v| v >= n) {
        return Err(format!("variable {} out of range 1..={n}", v + 1));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err("repeated variable".to_string());
    }
    Ok(())
}
