//! Kernel of the GF(2) vertex-edge incidence matrix.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bits::Bits;
use crate::hypergraph::Hypergraph;

/// Kernel basis from eliminating edges in `order`: each edge that reduces to
/// zero yields the set of edges it was combined with.
pub(crate) fn kernel_basis(h: &Hypergraph, order: &[usize]) -> Vec<Bits> {
    let (n, m) = (h.n() as usize, h.m());
    let mut pivots: Vec<Option<(Bits, Bits)>> = vec![None; n];
    let mut kernel = Vec::new();
    for &e in order {
        let mut v = Bits::from_iter(n, h.edge(e).iter().map(|&x| x as usize));
        let mut comb = Bits::from_iter(m, [e]);
        loop {
            let Some(p) = v.lowest() else {
                kernel.push(comb);
                break;
            };
            match &pivots[p] {
                Some((pv, pc)) => {
                    v.xor(pv);
                    comb.xor(pc);
                }
                None => {
                    pivots[p] = Some((v, comb));
                    break;
                }
            }
        }
    }
    kernel
}

/// Lightest nonzero kernel vector of weight at most `max_len`, by enumerating
/// every combination of the basis.
pub(crate) fn exact_min(basis: &[Bits], m: usize, max_len: usize) -> Option<Bits> {
    let mut cur = Bits::new(m);
    let mut best: Option<Bits> = None;
    for i in 1u64..1u64 << basis.len() {
        cur.xor(&basis[i.trailing_zeros() as usize]);
        let w = cur.count();
        if w <= max_len && best.as_ref().is_none_or(|b| w < b.count()) {
            best = Some(cur.clone());
        }
    }
    best
}

/// Randomized search: re-eliminate under random edge orders and try sums of
/// pairs and triples of the lightest basis vectors.
pub(crate) fn heuristic_min(h: &Hypergraph, max_len: usize, rounds: u32, seed: u64) -> Option<Bits> {
    let m = h.m();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..m).collect();
    let mut best: Option<Bits> = None;
    let consider = |b: &Bits, best: &mut Option<Bits>| {
        let w = b.count();
        if w > 0 && w <= max_len && best.as_ref().is_none_or(|x| w < x.count()) {
            *best = Some(b.clone());
        }
    };
    for round in 0..rounds.max(1) {
        if round > 0 {
            order.shuffle(&mut rng);
        }
        let mut basis = kernel_basis(h, &order);
        basis.sort_by_key(Bits::count);
        basis.truncate(64);
        for (i, a) in basis.iter().enumerate() {
            consider(a, &mut best);
            for (j, b) in basis.iter().enumerate().skip(i + 1) {
                let mut ab = a.clone();
                ab.xor(b);
                consider(&ab, &mut best);
                if i < 24 && j < 24 {
                    for c in &basis[j + 1..24.min(basis.len())] {
                        let mut abc = ab.clone();
                        abc.xor(c);
                        consider(&abc, &mut best);
                    }
                }
            }
        }
    }
    best
}
