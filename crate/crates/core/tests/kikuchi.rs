use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refutekit::hypergraph::BipartiteHypergraph;
use refutekit::kikuchi::{build_bipartite_kikuchi, butterfly_degree, quad_form_identity, BipartitePolynomial, KikuchiConfig};
use refutekit::subsets::{SubsetIndex, Universe};

fn random_psi(rng: &mut ChaCha8Rng, n: u32, t: usize) -> BipartitePolynomial {
    let mut vars: Vec<u32> = (0..n).collect();
    let p = rng.random_range(1..=3usize);
    let parts: Vec<Vec<Vec<u32>>> = (0..p)
        .map(|_| {
            (0..rng.random_range(1..=4usize))
                .map(|_| {
                    vars.shuffle(rng);
                    vars[..t - 1].to_vec()
                })
                .collect()
        })
        .collect();
    let coeffs = parts
        .iter()
        .map(|part| part.iter().map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect())
        .collect();
    BipartitePolynomial::new(BipartiteHypergraph::new(n, t, parts, None).unwrap(), coeffs).unwrap()
}

fn clone_set(c: &[u32], clone: u32) -> Vec<u32> {
    c.iter().map(|&v| 2 * v + clone).collect()
}

/// Allowed `(|S ∩ C¹|, |S ∩ C'²|)` splits for clauses of size `a = k - 1`.
fn splits(a: usize) -> Vec<(usize, usize)> {
    if a.is_multiple_of(2) {
        vec![(a / 2, a / 2)]
    } else {
        vec![(a / 2 + 1, a / 2), (a / 2, a / 2 + 1)]
    }
}

struct Naive {
    dense: Vec<Vec<f64>>,
    /// gamma[u][row]
    gamma: Vec<Vec<u64>>,
}

/// Dense matrix by looping over every (S, T) and every ordered pair.
fn naive(psi: &BipartitePolynomial, index: &SubsetIndex) -> Naive {
    let n_rows = index.len() as usize;
    let sets: Vec<Vec<u32>> = (0..n_rows as u64).map(|r| index.unrank(r)).collect();
    let a = psi.graph.t() - 1;
    let mut dense = vec![vec![0.0; n_rows]; n_rows];
    let mut gamma = vec![vec![0u64; n_rows]; psi.p()];
    for (u, (part, coeffs)) in psi.graph.parts().iter().zip(&psi.coeffs).enumerate() {
        for (i, c) in part.iter().enumerate() {
            for (j, c2) in part.iter().enumerate() {
                if i == j {
                    continue;
                }
                let c1 = clone_set(c, 0);
                let c2 = clone_set(c2, 1);
                let mut target: Vec<u32> = c1.iter().chain(&c2).copied().collect();
                target.sort_unstable();
                for (si, s) in sets.iter().enumerate() {
                    let split = (
                        s.iter().filter(|e| c1.contains(e)).count(),
                        s.iter().filter(|e| c2.contains(e)).count(),
                    );
                    if !splits(a).contains(&split) {
                        continue;
                    }
                    for (ti, t) in sets.iter().enumerate() {
                        let mut diff: Vec<u32> = s.iter().filter(|e| !t.contains(e)).chain(t.iter().filter(|e| !s.contains(e))).copied().collect();
                        diff.sort_unstable();
                        if diff == target {
                            dense[si][ti] += coeffs[i] * coeffs[j];
                            gamma[u][si] += 1;
                        }
                    }
                }
            }
        }
    }
    Naive { dense, gamma }
}

#[test]
fn matches_naive_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = 0;
    while cases < 30 {
        let n = rng.random_range(3..=5u32);
        let t = rng.random_range(2..=4usize);
        if t > n as usize {
            continue;
        }
        let psi = random_psi(&mut rng, n, t);
        let ell = rng.random_range(t - 1..=(2 * (t - 1)).min(n as usize));
        let km = build_bipartite_kikuchi(&psi, ell, &KikuchiConfig::default()).unwrap();
        let index = SubsetIndex::new(Universe::Cloned { n }, ell).unwrap();
        let oracle = naive(&psi, &index);

        let mut built = vec![vec![0.0; index.len() as usize]; index.len() as usize];
        for (r, c, v) in km.total.triplets() {
            built[km.active[r as usize] as usize][km.active[c as usize] as usize] = v;
        }
        assert_eq!(built, oracle.dense, "n={n} t={t} ell={ell}");

        for (u, rows) in km.butterfly.iter().enumerate() {
            let mut from_build = vec![0u64; index.len() as usize];
            for &(r, g) in rows {
                from_build[km.active[r as usize] as usize] = g;
            }
            assert_eq!(from_build, oracle.gamma[u]);
            for (rank, &g) in oracle.gamma[u].iter().enumerate() {
                let s = index.unrank(rank as u64);
                assert_eq!(butterfly_degree(psi.graph.part(u), &s, t), g);
            }
        }
        cases += 1;
    }
}

#[test]
fn row_mass_bounded_by_butterfly_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let psi = random_psi(&mut rng, 7, 3);
        let km = build_bipartite_kikuchi(&psi, 3, &KikuchiConfig::default()).unwrap();
        for (row, &g) in km.gamma_total.iter().enumerate() {
            assert!(km.total.row_l1(row) <= g as f64);
        }
        let pairs: u64 = psi.graph.parts().iter().map(|p| (p.len() * p.len().saturating_sub(1)) as u64).sum();
        assert_eq!(km.generated, pairs * km.d as u64);
        assert_eq!(km.gamma_total.iter().sum::<u64>(), km.generated);
    }
}

#[test]
fn quadratic_form_identity_holds_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.random_range(4..=8u32);
        let t = rng.random_range(2..=4usize);
        let psi = random_psi(&mut rng, n, t);
        let ell = rng.random_range(t - 1..=(2 * (t - 1)).min(n as usize));
        let km = build_bipartite_kikuchi(&psi, ell, &KikuchiConfig::default()).unwrap();
        let x: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        let (lhs, rhs) = quad_form_identity(&km, &psi, &x).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.fract(), 0.0);
    }
}
