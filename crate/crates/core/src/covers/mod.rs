//! Even covers: verification, search, disjoint extraction, and the
//! cover-based witnesses they yield for XOR instances.

mod bits;
mod gf2;
mod girth;

pub use girth::graph_girth;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph;
use crate::instances::XorInstance;
use crate::kikuchi::kikuchi_graph;
use crate::subsets::for_each_combination;
use crate::{Error, Result};
use bits::Bits;

/// Largest edge count the exhaustive finder accepts.
pub const MAX_EXHAUSTIVE_EDGES: usize = 24;
/// Kernel dimensions up to this are searched exactly.
pub const MAX_EXACT_KERNEL_DIM: usize = 22;

/// A set of distinct hyperedges whose symmetric difference is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenCover {
    /// Sorted edge ids.
    pub edge_ids: Vec<usize>,
}

impl EvenCover {
    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }
}

/// `None` when `ids` is an even cover of `h`, otherwise the reason it is not.
pub fn check_even_cover(h: &Hypergraph, ids: &[usize]) -> Option<String> {
    if ids.is_empty() {
        return Some("empty cover".into());
    }
    let mut seen = vec![false; h.m()];
    let mut parity = vec![false; h.n() as usize];
    for &id in ids {
        if id >= h.m() {
            return Some(format!("edge {id} out of range"));
        }
        if std::mem::replace(&mut seen[id], true) {
            return Some(format!("edge {id} repeated"));
        }
        for &v in h.edge(id) {
            parity[v as usize] ^= true;
        }
    }
    parity
        .iter()
        .position(|&odd| odd)
        .map(|v| format!("vertex {} covered an odd number of times", v + 1))
}

pub fn verify_even_cover(h: &Hypergraph, ids: &[usize]) -> bool {
    check_even_cover(h, ids).is_none()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum CoverStrategy {
    /// All edge subsets by increasing size.
    Exhaustive,
    /// Low-weight vectors in the kernel of the incidence matrix over GF(2).
    #[default]
    Gf2Kernel,
    /// Short cycles of the Kikuchi graph at level `ell`; even arity only.
    KikuchiCycle { ell: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverSearch {
    pub strategy: CoverStrategy,
    /// Random re-elimination rounds when the kernel is too large to enumerate.
    pub rounds: u32,
    pub seed: u64,
    /// Kikuchi-graph vertex cap for the cycle strategy.
    pub max_graph_vertices: usize,
}

impl Default for CoverSearch {
    fn default() -> Self {
        CoverSearch {
            strategy: CoverStrategy::Gf2Kernel,
            rounds: 16,
            seed: 0,
            max_graph_vertices: 200_000,
        }
    }
}

fn exhaustive(h: &Hypergraph, max_len: usize) -> Result<Option<Vec<usize>>> {
    if h.m() > MAX_EXHAUSTIVE_EDGES {
        return Err(Error::guard(format!(
            "exhaustive cover search over {} edges exceeds the cap of {MAX_EXHAUSTIVE_EDGES}",
            h.m()
        )));
    }
    let n = h.n() as usize;
    let vecs: Vec<Bits> = h.edges().iter().map(|e| Bits::from_iter(n, e.iter().map(|&v| v as usize))).collect();
    let ids: Vec<usize> = (0..h.m()).collect();
    for size in 1..=max_len.min(h.m()) {
        let mut found = None;
        for_each_combination(&ids, size, |c| {
            if found.is_some() {
                return;
            }
            let mut acc = Bits::new(n);
            for &i in c {
                acc.xor(&vecs[i]);
            }
            if acc.is_zero() {
                found = Some(c.to_vec());
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn kernel_search(h: &Hypergraph, max_len: usize, cfg: &CoverSearch) -> Option<Vec<usize>> {
    let order: Vec<usize> = (0..h.m()).collect();
    let basis = gf2::kernel_basis(h, &order);
    if basis.is_empty() {
        return None;
    }
    let best = if basis.len() <= MAX_EXACT_KERNEL_DIM {
        gf2::exact_min(&basis, h.m(), max_len)
    } else {
        gf2::heuristic_min(h, max_len, cfg.rounds, cfg.seed)
    };
    best.map(|b| b.ones())
}

/// Labels used an odd number of times on the tree path from the BFS root.
fn cycle_search(h: &Hypergraph, ell: usize, max_len: usize, cfg: &CoverSearch) -> Result<Option<Vec<usize>>> {
    if h.k() % 2 == 1 {
        return Err(Error::Unsupported("Kikuchi-cycle search needs even arity".into()));
    }
    let g = kikuchi_graph(h, ell)?;
    let (verts, adj) = g.adjacency();
    if verts.len() > cfg.max_graph_vertices {
        return Err(Error::guard(format!(
            "Kikuchi graph has {} vertices, cap is {}",
            verts.len(),
            cfg.max_graph_vertices
        )));
    }
    let m = h.m();
    let mut best: Option<Bits> = None;
    let mut labels: Vec<Option<Bits>> = vec![None; verts.len()];
    let mut parent_edge: Vec<usize> = vec![usize::MAX; verts.len()];
    // edge instance index = position in adjacency list; identify by (min, max, label, ordinal)
    let mut edge_key: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut key_of = |a: usize, b: usize, label: usize| {
        let next = edge_key.len();
        *edge_key.entry((a.min(b), a.max(b), label)).or_insert(next)
    };
    for root in 0..verts.len() {
        labels.iter_mut().for_each(|l| *l = None);
        labels[root] = Some(Bits::new(m));
        parent_edge[root] = usize::MAX;
        let mut depth = vec![usize::MAX; verts.len()];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| depth[x] * 2 >= b.count() + 2) {
                break;
            }
            for &(y, label) in &adj[x] {
                let key = key_of(x, y, label);
                if labels[y].is_none() {
                    let mut l = labels[x].clone().unwrap();
                    l.flip(label);
                    labels[y] = Some(l);
                    parent_edge[y] = key;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                } else if parent_edge[x] != key && parent_edge[y] != key {
                    let mut odd = labels[x].clone().unwrap();
                    odd.xor(labels[y].as_ref().unwrap());
                    odd.flip(label);
                    let w = odd.count();
                    if w > 0 && w <= max_len && best.as_ref().is_none_or(|b| w < b.count()) {
                        best = Some(odd);
                    }
                }
            }
        }
    }
    Ok(best.map(|b| b.ones()))
}

/// Search for an even cover of length at most `max_len`. Only the
/// exhaustive strategy proves that none exists.
pub fn find_even_cover(h: &Hypergraph, max_len: usize, cfg: &CoverSearch) -> Result<Option<EvenCover>> {
    let found = match cfg.strategy {
        CoverStrategy::Exhaustive => exhaustive(h, max_len)?,
        CoverStrategy::Gf2Kernel => kernel_search(h, max_len, cfg),
        CoverStrategy::KikuchiCycle { ell } => cycle_search(h, ell, max_len, cfg)?,
    };
    match found {
        None => Ok(None),
        Some(mut ids) => {
            ids.sort_unstable();
            if let Some(reason) = check_even_cover(h, &ids) {
                return Err(Error::Invariant(format!("finder returned a non-cover: {reason}")));
            }
            Ok(Some(EvenCover { edge_ids: ids }))
        }
    }
}

/// Greedy peeling: find a cover, delete its edges, repeat.
pub fn extract_disjoint_covers(h: &Hypergraph, max_len: usize, want: usize, cfg: &CoverSearch) -> Result<Vec<EvenCover>> {
    let mut alive: Vec<usize> = (0..h.m()).collect();
    let mut out = Vec::new();
    while out.len() < want && alive.len() >= 2 {
        let sub = h.subgraph(&alive);
        let Some(cover) = find_even_cover(&sub, max_len, cfg)? else {
            break;
        };
        let ids: Vec<usize> = cover.edge_ids.iter().map(|&i| alive[i]).collect();
        alive.retain(|id| ids.binary_search(id).is_err());
        out.push(EvenCover { edge_ids: ids });
    }
    Ok(out)
}

/// Pairwise edge-disjoint even covers of the instance hypergraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FkoWitness {
    /// Declared bound on every cover length.
    pub max_len: usize,
    pub covers: Vec<EvenCover>,
}

/// Result of checking a witness: every cover whose coefficient product is
/// `-1` forces a distinct violated constraint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FkoBound {
    pub covers: usize,
    pub violated: usize,
    /// `1 - violated/m`.
    pub bound: f64,
}

pub fn verify_fko_witness(inst: &XorInstance, w: &FkoWitness) -> Result<FkoBound> {
    if !inst.is_sign_valued() {
        return Err(Error::param("witness verification needs coefficients in {-1, +1}"));
    }
    let h = inst.hypergraph();
    let mut used = vec![false; inst.m()];
    let mut violated = 0;
    for (i, cover) in w.covers.iter().enumerate() {
        if let Some(reason) = check_even_cover(&h, &cover.edge_ids) {
            return Err(Error::param(format!("cover {}: {reason}", i + 1)));
        }
        if cover.len() > w.max_len {
            return Err(Error::param(format!(
                "cover {} has length {} above the declared {}",
                i + 1,
                cover.len(),
                w.max_len
            )));
        }
        for &id in &cover.edge_ids {
            if std::mem::replace(&mut used[id], true) {
                return Err(Error::param(format!("cover {} reuses clause {}", i + 1, id + 1)));
            }
        }
        let product: f64 = cover.edge_ids.iter().map(|&id| inst.coeffs[id]).product();
        if product < 0.0 {
            violated += 1;
        }
    }
    let bound = if inst.m() == 0 { 1.0 } else { 1.0 - violated as f64 / inst.m() as f64 };
    Ok(FkoBound {
        covers: w.covers.len(),
        violated,
        bound,
    })
}

pub fn build_fko_witness(inst: &XorInstance, max_len: usize, want: usize, cfg: &CoverSearch) -> Result<FkoWitness> {
    if !inst.is_sign_valued() {
        return Err(Error::param("witness construction needs coefficients in {-1, +1}"));
    }
    let covers = extract_disjoint_covers(&inst.hypergraph(), max_len, want, cfg)?;
    let w = FkoWitness { max_len, covers };
    verify_fko_witness(inst, &w)?;
    Ok(w)
}
