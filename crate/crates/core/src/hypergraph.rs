//! Uniform and bipartite hypergraphs with degree queries.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::instances::check_clause;
use crate::subsets::for_each_combination;
use crate::{Error, Result};

/// A k-uniform multi-hypergraph on `0..n`. Edges are sorted vertex lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "HypergraphRepr", try_from = "HypergraphRepr")]
pub struct Hypergraph {
    n: u32,
    k: usize,
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(n: u32, k: usize, mut edges: Vec<Vec<u32>>) -> Result<Self> {
        for (i, e) in edges.iter_mut().enumerate() {
            e.sort_unstable();
            check_clause(e, n, k).map_err(|msg| Error::param(format!("edge {i}: {msg}")))?;
        }
        Ok(Self::from_sorted(n, k, edges))
    }

    /// Build from edges already validated and sorted.
    pub(crate) fn from_sorted(n: u32, k: usize, edges: Vec<Vec<u32>>) -> Self {
        let mut incidence = vec![Vec::new(); n as usize];
        for (id, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(id as u32);
            }
        }
        Hypergraph {
            n,
            k,
            edges,
            incidence,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &[u32] {
        &self.edges[id]
    }

    /// Ids of edges through vertex `v`, ascending.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Number of edges containing `q`, with multiplicity.
    pub fn degree(&self, q: &[u32]) -> usize {
        self.edges_containing(q).count()
    }

    /// Ids of edges containing `q`, ascending.
    pub fn edges_containing<'a>(&'a self, q: &'a [u32]) -> Box<dyn Iterator<Item = usize> + 'a> {
        if q.is_empty() {
            return Box::new(0..self.m());
        }
        if q.len() > self.k || q.iter().any(|&v| v >= self.n) {
            return Box::new(std::iter::empty());
        }
        let pivot = q
            .iter()
            .min_by_key(|&&v| self.incidence[v as usize].len())
            .copied()
            .unwrap();
        Box::new(
            self.incidence[pivot as usize]
                .iter()
                .map(|&id| id as usize)
                .filter(move |&id| contains_all(&self.edges[id], q)),
        )
    }

    /// Keep only the listed edges, in the given order.
    pub fn subgraph(&self, ids: &[usize]) -> Hypergraph {
        Self::from_sorted(self.n, self.k, ids.iter().map(|&i| self.edges[i].clone()).collect())
    }
}

/// `q ⊆ edge` for sorted `edge` (q may be unsorted).
pub(crate) fn contains_all(edge: &[u32], q: &[u32]) -> bool {
    q.iter().all(|v| edge.binary_search(v).is_ok())
}

#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    n: u32,
    k: usize,
    edges: Vec<Vec<u32>>,
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        HypergraphRepr {
            n: h.n,
            k: h.k,
            edges: one_based(&h.edges),
        }
    }
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = Error;
    fn try_from(r: HypergraphRepr) -> Result<Self> {
        Hypergraph::new(r.n, r.k, zero_based(r.edges)?)
    }
}

pub(crate) fn one_based(sets: &[Vec<u32>]) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.iter().map(|v| v + 1).collect()).collect()
}

pub(crate) fn zero_based(sets: Vec<Vec<u32>>) -> Result<Vec<Vec<u32>>> {
    sets.into_iter()
        .map(|s| {
            s.into_iter()
                .map(|v| v.checked_sub(1).ok_or_else(|| Error::param("vertex 0 in a 1-based set")))
                .collect()
        })
        .collect()
}

/// A p-bipartite t-uniform hypergraph: partitions `H_u` of (t-1)-subsets,
/// optionally labelled by disjoint sets `Q_u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "BipartiteRepr", try_from = "BipartiteRepr")]
pub struct BipartiteHypergraph {
    n: u32,
    t: usize,
    parts: Vec<Vec<Vec<u32>>>,
    labels: Option<Vec<Vec<u32>>>,
}

impl BipartiteHypergraph {
    pub fn new(
        n: u32,
        t: usize,
        mut parts: Vec<Vec<Vec<u32>>>,
        labels: Option<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        if t < 1 {
            return Err(Error::param("uniformity must be at least 1"));
        }
        for (u, part) in parts.iter_mut().enumerate() {
            for c in part.iter_mut() {
                c.sort_unstable();
                check_clause(c, n, t - 1)
                    .map_err(|msg| Error::param(format!("partition {u}: {msg}")))?;
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != parts.len() {
                return Err(Error::param("one label per partition required"));
            }
            for (u, (q, part)) in labels.iter().zip(&parts).enumerate() {
                if q.iter().any(|&v| v >= n) {
                    return Err(Error::param(format!("label of partition {u} out of range")));
                }
                if part.iter().any(|c| c.iter().any(|v| q.contains(v))) {
                    return Err(Error::param(format!("label of partition {u} meets an edge")));
                }
            }
        }
        Ok(BipartiteHypergraph {
            n,
            t,
            parts,
            labels,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn p(&self) -> usize {
        self.parts.len()
    }

    pub fn m(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn parts(&self) -> &[Vec<Vec<u32>>] {
        &self.parts
    }

    pub fn part(&self, u: usize) -> &[Vec<u32>] {
        &self.parts[u]
    }

    pub fn labels(&self) -> Option<&[Vec<u32>]> {
        self.labels.as_deref()
    }

    pub fn degree_u(&self, u: usize, q: &[u32]) -> Result<usize> {
        let part = self
            .parts
            .get(u)
            .ok_or_else(|| Error::param(format!("partition {u} out of range 0..{}", self.p())))?;
        Ok(part.iter().filter(|c| contains_all(c, q)).count())
    }

    /// Check `(ε, ℓ)`-regularity over every realized `Q` (including `∅`).
    /// Unrealized sets have degree zero and cannot violate.
    pub fn is_regular(&self, eps: f64, ell: usize) -> RegularityReport {
        let mut violations = Vec::new();
        for (u, part) in self.parts.iter().enumerate() {
            let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
            for c in part {
                for size in 1..=c.len() {
                    for_each_combination(c, size, |q| *counts.entry(q.to_vec()).or_default() += 1);
                }
            }
            counts.insert(Vec::new(), part.len());
            let mut found: Vec<RegularityViolation> = counts
                .into_iter()
                .filter_map(|(q, deg)| {
                    let threshold = regularity_threshold(eps, self.n, ell, self.t as f64 / 2.0 - 1.0, q.len());
                    (deg as f64 > threshold).then_some(RegularityViolation {
                        u,
                        q,
                        degree: deg,
                        threshold,
                    })
                })
                .collect();
            found.sort_by(|a, b| (a.q.len(), &a.q).cmp(&(b.q.len(), &b.q)));
            violations.extend(found);
        }
        RegularityReport {
            regular: violations.is_empty(),
            violations,
        }
    }
}

/// `(1/ε²)·max((n/ℓ)^{base - |Q|}, 1)`.
pub fn regularity_threshold(eps: f64, n: u32, ell: usize, base: f64, q_len: usize) -> f64 {
    let ratio = n as f64 / ell as f64;
    ratio.powf(base - q_len as f64).max(1.0) / (eps * eps)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityViolation {
    pub u: usize,
    pub q: Vec<u32>,
    pub degree: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub violations: Vec<RegularityViolation>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteRepr {
    n: u32,
    t: usize,
    parts: Vec<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Vec<u32>>>,
}

impl From<BipartiteHypergraph> for BipartiteRepr {
    fn from(b: BipartiteHypergraph) -> Self {
        BipartiteRepr {
            n: b.n,
            t: b.t,
            parts: b.parts.iter().map(|p| one_based(p)).collect(),
            labels: b.labels.as_deref().map(one_based),
        }
    }
}

impl TryFrom<BipartiteRepr> for BipartiteHypergraph {
    type Error = Error;
    fn try_from(r: BipartiteRepr) -> Result<Self> {
        let parts = r.parts.into_iter().map(zero_based).collect::<Result<_>>()?;
        let labels = r.labels.map(zero_based).transpose()?;
        BipartiteHypergraph::new(r.n, r.t, parts, labels)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h(edges: &[&[u32]], n: u32, k: usize) -> Hypergraph {
        Hypergraph::new(n, k, edges.iter().map(|e| e.iter().map(|v| v - 1).collect()).collect()).unwrap()
    }

    #[test]
    fn degree_examples() {
        let g = h(&[&[1, 2, 3], &[1, 2, 4]], 4, 3);
        assert_eq!(g.degree(&[0, 1]), 2);
        assert_eq!(g.degree(&[]), 2);
        assert_eq!(g.degree(&[2]), 1);
        assert_eq!(g.degree(&[0, 1, 2, 3]), 0);
    }

    #[test]
    fn degree_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = crate::instances::gen_random_xor(9, 3, 60, 1).unwrap();
        let g = inst.hypergraph();
        for _ in 0..200 {
            let size = rng.random_range(0..4);
            let mut q: Vec<u32> = rand::seq::index::sample(&mut rng, 9, size)
                .into_iter()
                .map(|v| v as u32)
                .collect();
            q.sort_unstable();
            let naive = g.edges().iter().filter(|e| q.iter().all(|v| e.contains(v))).count();
            assert_eq!(g.degree(&q), naive);
        }
        let total: usize = (0..9).map(|v| g.degree(&[v])).sum();
        assert_eq!(total, 3 * g.m());
    }

    #[test]
    fn bipartite_degrees() {
        let b = BipartiteHypergraph::new(5, 3, vec![vec![vec![0, 1], vec![0, 2]], vec![vec![3, 4]]], None)
            .unwrap();
        assert_eq!(b.degree_u(0, &[0]).unwrap(), 2);
        assert_eq!(b.degree_u(0, &[]).unwrap(), 2);
        assert_eq!(b.degree_u(1, &[0]).unwrap(), 0);
        assert!(b.degree_u(2, &[]).is_err());
    }

    #[test]
    fn labels_must_avoid_edges() {
        assert!(BipartiteHypergraph::new(4, 2, vec![vec![vec![1]]], Some(vec![vec![1, 2]])).is_err());
        assert!(BipartiteHypergraph::new(4, 2, vec![vec![vec![0]]], Some(vec![vec![1, 2]])).is_ok());
    }

    #[test]
    fn regularity_examples() {
        let empty = BipartiteHypergraph::new(4, 3, vec![], None).unwrap();
        assert!(empty.is_regular(1.0, 2).regular);

        let b = BipartiteHypergraph::new(4, 3, vec![vec![vec![0, 1], vec![0, 2]]], None).unwrap();
        let report = b.is_regular(1.0, 2);
        assert!(!report.regular);
        // |H_u| = 2 also exceeds max(2^{1/2}, 1), so ∅ shows up next to {1}
        let v1 = report.violations.iter().find(|v| v.q == vec![0]).unwrap();
        assert_eq!(v1.degree, 2);
        assert_eq!(v1.threshold, 1.0);
    }

    #[test]
    fn json_is_one_based() {
        let g = h(&[&[1, 2, 3]], 4, 3);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(text, r#"{"n":4,"k":3,"edges":[[1,2,3]]}"#);
        assert_eq!(serde_json::from_str::<Hypergraph>(&text).unwrap(), g);
    }
}
