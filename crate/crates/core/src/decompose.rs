//! Greedy bipartite-contraction decomposition into regular pieces.
//!
//! Violating sets are handled from the largest size down, lexicographically
//! within a size. Each extraction takes the smallest edges by
//! `(sorted clause, edge id)`, so the output is a pure function of the input.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::hypergraph::{regularity_threshold, BipartiteHypergraph, Hypergraph};
use crate::subsets::for_each_combination;
use crate::{Error, Result};

/// One level `t` of a contraction: partitions of (t-1)-sets with labels
/// `Q_u` of size `k + 1 - t`, plus the original edge id of every hyperedge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionLevel {
    pub t: usize,
    pub graph: BipartiteHypergraph,
    pub provenance: Vec<Vec<usize>>,
}

impl ContractionLevel {
    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn p(&self) -> usize {
        self.graph.p()
    }

    pub fn label(&self, u: usize) -> &[u32] {
        &self.graph.labels().expect("contraction levels are labelled")[u]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteContraction {
    pub n: u32,
    pub k: usize,
    pub eps: f64,
    pub ell: usize,
    /// Ids of the edges left in `H^(1)`.
    pub discarded: Vec<usize>,
    /// Levels `t = 2..=k`, in that order.
    pub levels: Vec<ContractionLevel>,
    /// Set when `ε > 1/√2`, outside the range the size bound was proved for.
    pub eps_above_recommended: bool,
}

impl BipartiteContraction {
    pub fn level(&self, t: usize) -> Option<&ContractionLevel> {
        self.levels.iter().find(|l| l.t == t)
    }

    pub fn discarded_graph(&self, h: &Hypergraph) -> Hypergraph {
        h.subgraph(&self.discarded)
    }
}

/// `floor((1/ε²)·max((n/ℓ)^{t-k/2-1}, 1))`, the partition size at level `t`.
pub fn level_size(eps: f64, n: u32, ell: usize, k: usize, t: usize) -> usize {
    regularity_threshold(eps, n, ell, k as f64 / 2.0, k + 1 - t).floor() as usize
}

/// `(n/(kε²))·(n/ℓ)^{k/2-1}`, the bound on the number of discarded edges.
pub fn discarded_bound(eps: f64, n: u32, ell: usize, k: usize) -> f64 {
    n as f64 / (k as f64 * eps * eps) * (n as f64 / ell as f64).powf(k as f64 / 2.0 - 1.0)
}

fn check_params(h: &Hypergraph, eps: f64, ell: usize) -> Result<()> {
    if h.k() < 2 {
        return Err(Error::param("decomposition needs k >= 2"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(format!("eps = {eps} outside (0, 1]")));
    }
    if ell < 1 || ell > h.n() as usize {
        return Err(Error::param(format!("ell = {ell} outside 1..={}", h.n())));
    }
    Ok(())
}

pub fn decompose(h: &Hypergraph, eps: f64, ell: usize) -> Result<BipartiteContraction> {
    check_params(h, eps, ell)?;
    let (n, k) = (h.n(), h.k());
    let mut live = vec![true; h.m()];
    // per level: (labels, parts, provenance)
    let mut acc: Vec<(Vec<Vec<u32>>, Vec<Vec<Vec<u32>>>, Vec<Vec<usize>>)> =
        vec![Default::default(); k - 1];

    for q in (1..k).rev() {
        let threshold = regularity_threshold(eps, n, ell, k as f64 / 2.0, q);
        let take = threshold.floor() as usize;
        let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (id, e) in h.edges().iter().enumerate() {
            if live[id] {
                for_each_combination(e, q, |s| *counts.entry(s.to_vec()).or_default() += 1);
            }
        }
        let keys: Vec<Vec<u32>> = counts.keys().cloned().collect();
        for key in keys {
            while counts[&key] as f64 > threshold {
                let mut chosen: Vec<usize> = h.edges_containing(&key).filter(|&id| live[id]).collect();
                chosen.sort_by(|&a, &b| (h.edge(a), a).cmp(&(h.edge(b), b)));
                chosen.truncate(take);
                let level = &mut acc[k - 1 - q];
                let mut part = Vec::with_capacity(take);
                for &id in &chosen {
                    live[id] = false;
                    let e = h.edge(id);
                    for_each_combination(e, q, |s| {
                        if let Some(c) = counts.get_mut(s) {
                            *c -= 1;
                        }
                    });
                    part.push(e.iter().copied().filter(|v| key.binary_search(v).is_err()).collect());
                }
                level.0.push(key.clone());
                level.1.push(part);
                level.2.push(chosen);
            }
        }
    }

    let mut levels = Vec::with_capacity(k - 1);
    for (i, (labels, parts, provenance)) in acc.into_iter().enumerate() {
        let t = i + 2;
        levels.push(ContractionLevel {
            t,
            graph: BipartiteHypergraph::new(n, t, parts, Some(labels))?,
            provenance,
        });
    }
    Ok(BipartiteContraction {
        n,
        k,
        eps,
        ell,
        discarded: (0..h.m()).filter(|&id| live[id]).collect(),
        levels,
        eps_above_recommended: eps * eps > 0.5,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionCheck {
    pub clause: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub checks: Vec<ContractionCheck>,
    pub eps_above_recommended: bool,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, clause: &str) -> Option<&ContractionCheck> {
        self.checks.iter().find(|c| c.clause == clause)
    }

    fn push(&mut self, clause: &str, failures: Vec<String>) {
        self.checks.push(ContractionCheck {
            clause: clause.to_string(),
            passed: failures.is_empty(),
            detail: (!failures.is_empty()).then(|| failures.join("; ")),
        });
    }
}

/// Check a claimed contraction of `h`: the discarded-size bound, regularity
/// and equal sizes of each level, label/edge reconstruction, and that every
/// edge is used exactly once.
pub fn verify_contraction(
    h: &Hypergraph,
    bc: &BipartiteContraction,
    eps: f64,
    ell: usize,
) -> ContractionReport {
    let (n, k) = (h.n(), h.k());
    let mut report = ContractionReport {
        checks: Vec::new(),
        eps_above_recommended: eps * eps > 0.5,
    };

    let bound = discarded_bound(eps, n, ell, k);
    let m1 = bc.discarded.len();
    report.push(
        "discarded-bound",
        if m1 as f64 <= bound * (1.0 + 1e-12) {
            vec![]
        } else {
            vec![format!("{m1} discarded edges exceed {bound}")]
        },
    );

    let mut regular = Vec::new();
    let mut sizes = Vec::new();
    let mut shape = Vec::new();
    let mut places: Vec<Vec<String>> = vec![Vec::new(); h.m()];
    for &id in &bc.discarded {
        match places.get_mut(id) {
            Some(p) => p.push("discarded".to_string()),
            None => shape.push(format!("discarded id {id} out of range")),
        }
    }
    for level in &bc.levels {
        let t = level.t;
        if !(2..=k).contains(&t) || level.graph.t() != t {
            shape.push(format!("level t={t} outside 2..={k}"));
            continue;
        }
        let report_t = level.graph.is_regular(eps, ell);
        for v in report_t.violations.iter().take(5) {
            regular.push(format!(
                "t={t} u={} Q={:?} deg={} > {}",
                v.u,
                v.q.iter().map(|x| x + 1).collect::<Vec<_>>(),
                v.degree,
                v.threshold
            ));
        }
        let want = level_size(eps, n, ell, k, t);
        for (u, part) in level.graph.parts().iter().enumerate() {
            if part.len() != want {
                sizes.push(format!("t={t} u={u} has {} edges, expected {want}", part.len()));
            }
        }
        let labels = level.graph.labels().unwrap_or(&[]);
        if labels.len() != level.p() || level.provenance.len() != level.p() {
            shape.push(format!("t={t}: labels or provenance missing"));
            continue;
        }
        for (u, (part, ids)) in level.graph.parts().iter().zip(&level.provenance).enumerate() {
            let q = &labels[u];
            if q.len() != k + 1 - t {
                shape.push(format!("t={t} u={u}: label has size {}, expected {}", q.len(), k + 1 - t));
            }
            if ids.len() != part.len() {
                shape.push(format!("t={t} u={u}: provenance length mismatch"));
                continue;
            }
            for (c, &id) in part.iter().zip(ids) {
                let Some(p) = places.get_mut(id) else {
                    shape.push(format!("t={t} u={u}: edge id {id} out of range"));
                    continue;
                };
                p.push(format!("t={t} u={u}"));
                let mut joined: Vec<u32> = q.iter().chain(c).copied().collect();
                joined.sort_unstable();
                if joined != h.edge(id) {
                    shape.push(format!("t={t} u={u}: Q ∪ C does not rebuild edge {id}"));
                }
            }
        }
    }
    let mut once = Vec::new();
    for (id, p) in places.iter().enumerate() {
        match p.len() {
            1 => {}
            0 => once.push(format!("edge {id} never placed")),
            _ => once.push(format!("edge {id} placed at {}", p.join(" and "))),
        }
    }
    report.push("regular", regular);
    report.push("equal-sizes", sizes);
    report.push("reconstruction", shape);
    report.push("exactly-once", once);
    report
}
