use crate::hypergraph::Hypergraph;
use crate::subsets::{for_each_combination, SubsetIndex, Universe};
use crate::{Error, Result};

/// The Kikuchi graph of an even-arity hypergraph: vertices are the
/// `ell`-subsets of `[n]` (by rank), and `S ~ T` whenever `S ⊕ T` is an edge.
/// Each undirected edge `{S, T}` is stored once with `S < T`, labelled by
/// the id of the hyperedge it comes from; parallel hyperedges give parallel
/// graph edges.
#[derive(Debug, Clone)]
pub struct KikuchiGraph {
    pub index: SubsetIndex,
    pub edges: Vec<(u64, u64, usize)>,
}

impl KikuchiGraph {
    pub fn num_vertices(&self) -> u64 {
        self.index.len()
    }

    /// Adjacency lists over the vertices touched by some edge, as
    /// `(vertex ranks, lists of (neighbour position, label))`.
    pub fn adjacency(&self) -> (Vec<u64>, Vec<Vec<(usize, usize)>>) {
        let mut verts: Vec<u64> = self.edges.iter().flat_map(|&(s, t, _)| [s, t]).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut adj = vec![Vec::new(); verts.len()];
        for &(s, t, label) in &self.edges {
            let a = verts.binary_search(&s).unwrap();
            let b = verts.binary_search(&t).unwrap();
            adj[a].push((b, label));
            adj[b].push((a, label));
        }
        (verts, adj)
    }
}

pub fn kikuchi_graph(h: &Hypergraph, ell: usize) -> Result<KikuchiGraph> {
    let k = h.k();
    if k % 2 == 1 {
        return Err(Error::Unsupported("the Kikuchi graph needs even arity".into()));
    }
    if ell < k / 2 || ell > h.n() as usize {
        return Err(Error::param(format!("ell = {ell} outside {}..={}", k / 2, h.n())));
    }
    let index = SubsetIndex::new(Universe::Plain { n: h.n() }, ell)?;
    let mut edges = Vec::new();
    for (id, c) in h.edges().iter().enumerate() {
        let rest: Vec<u32> = (0..h.n()).filter(|v| c.binary_search(v).is_err()).collect();
        for_each_combination(c, k / 2, |a| {
            let other: Vec<u32> = c.iter().copied().filter(|v| !a.contains(v)).collect();
            for_each_combination(&rest, ell - k / 2, |f| {
                let mut s: Vec<u32> = a.iter().chain(f).copied().collect();
                let mut t: Vec<u32> = other.iter().chain(f).copied().collect();
                s.sort_unstable();
                t.sort_unstable();
                let (rs, rt) = (index.rank(&s), index.rank(&t));
                if rs < rt {
                    edges.push((rs, rt, id));
                }
            });
        });
    }
    Ok(KikuchiGraph { index, edges })
}
