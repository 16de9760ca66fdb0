use crate::instances::{CspInstance, XorInstance};
use crate::kikuchi::BipartitePolynomial;
use crate::{Error, Result};

/// Largest number of `x` variables enumerated exhaustively.
pub const MAX_BRUTE_VARS: u32 = 26;

/// Exact maximum of an objective over `{±1}^n`.
pub trait BruteForce {
    fn brute_force_val(&self) -> Result<f64>;
}

pub fn brute_force_val<T: BruteForce + ?Sized>(obj: &T) -> Result<f64> {
    obj.brute_force_val()
}

fn guard(n: u32) -> Result<()> {
    if n > MAX_BRUTE_VARS {
        return Err(Error::guard(format!(
            "exhaustive search over {n} variables exceeds the cap of {MAX_BRUTE_VARS}"
        )));
    }
    Ok(())
}

fn incidence(n: u32, sets: impl Iterator<Item = impl AsRef<[u32]>>) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n as usize];
    for (id, s) in sets.enumerate() {
        for &v in s.as_ref() {
            inc[v as usize].push(id);
        }
    }
    inc
}

/// Visit all of `{±1}^n` in Gray-code order, calling `flip(v)` after each
/// single-variable change (starting from all `+1`).
fn gray(n: u32, x: &mut [i8], mut flip: impl FnMut(&[i8], usize)) {
    for i in 1u64..1u64 << n {
        let v = i.trailing_zeros() as usize;
        x[v] = -x[v];
        flip(x, v);
    }
}

impl BruteForce for XorInstance {
    /// `max_x (1/m) Σ b_C x_C`.
    fn brute_force_val(&self) -> Result<f64> {
        guard(self.n)?;
        if self.m() == 0 {
            return Ok(0.0);
        }
        let inc = incidence(self.n, self.clauses.iter());
        let mut signs: Vec<f64> = self.coeffs.clone();
        let mut sum: f64 = signs.iter().sum();
        let mut best = sum;
        let mut x = vec![1i8; self.n as usize];
        gray(self.n, &mut x, |_, v| {
            for &c in &inc[v] {
                sum -= 2.0 * signs[c];
                signs[c] = -signs[c];
            }
            best = best.max(sum);
        });
        Ok(best / self.m() as f64)
    }
}

impl BruteForce for BipartitePolynomial {
    /// `max_{x,y} ψ(y, x)`, with `y` chosen optimally for each `x`.
    fn brute_force_val(&self) -> Result<f64> {
        guard(self.n())?;
        if self.m() == 0 {
            return Ok(0.0);
        }
        let mut edges: Vec<(usize, &[u32])> = Vec::new();
        let mut terms: Vec<f64> = Vec::new();
        for (u, (part, b)) in self.graph.parts().iter().zip(&self.coeffs).enumerate() {
            for (c, &bc) in part.iter().zip(b) {
                edges.push((u, c));
                terms.push(bc);
            }
        }
        let inc = incidence(self.n(), edges.iter().map(|e| e.1));
        let x = vec![1i8; self.n() as usize];
        let mut sums = self.partition_sums(&x);
        let mut total: f64 = sums.iter().map(|s| s.abs()).sum();
        let mut best = total;
        let mut x = x;
        gray(self.n(), &mut x, |_, v| {
            for &e in &inc[v] {
                let u = edges[e].0;
                total -= sums[u].abs();
                sums[u] -= 2.0 * terms[e];
                terms[e] = -terms[e];
                total += sums[u].abs();
            }
            best = best.max(total);
        });
        Ok(best / self.m() as f64)
    }
}

impl BruteForce for CspInstance {
    /// Largest fraction of satisfied constraints.
    fn brute_force_val(&self) -> Result<f64> {
        guard(self.n)?;
        if self.m() == 0 {
            return Ok(0.0);
        }
        let inc = incidence(self.n, self.scopes.iter());
        let sat = |x: &[i8], c: usize| {
            let (s, l) = (&self.scopes[c], &self.literals[c]);
            self.predicate.eval_signs(s.iter().zip(l).map(|(&v, &xi)| xi * x[v as usize]))
        };
        let mut x = vec![1i8; self.n as usize];
        let mut state: Vec<bool> = (0..self.m()).map(|c| sat(&x, c)).collect();
        let mut count = state.iter().filter(|&&b| b).count();
        let mut best = count;
        gray(self.n, &mut x, |x, v| {
            for &c in &inc[v] {
                let now = sat(x, c);
                if now != state[c] {
                    if now {
                        count += 1;
                    } else {
                        count -= 1;
                    }
                    state[c] = now;
                }
            }
            best = best.max(count);
        });
        Ok(best as f64 / self.m() as f64)
    }
}

/// Slow reference: evaluates every assignment from scratch.
#[cfg(test)]
pub(crate) fn naive_xor_val(inst: &XorInstance) -> f64 {
    (0u64..1 << inst.n)
        .map(|bits| {
            let x: Vec<i8> = (0..inst.n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
            inst.clauses.iter().zip(&inst.coeffs).map(|(c, b)| b * crate::instances::monomial(&x, c) as f64).sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max)
        / inst.m() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::BipartiteHypergraph;
    use crate::instances::gen_random_xor;

    #[test]
    fn small_xor_example() {
        let inst = XorInstance::new(4, 3, vec![vec![0, 1, 2], vec![0, 1, 3]], vec![1.0, -1.0]).unwrap();
        assert_eq!(brute_force_val(&inst).unwrap(), 1.0);
        let one = XorInstance::new(3, 3, vec![vec![0, 1, 2]], vec![1.0]).unwrap();
        assert_eq!(brute_force_val(&one).unwrap(), 1.0);
    }

    #[test]
    fn matches_naive_and_negation() {
        for seed in 0..20 {
            let inst = gen_random_xor(9, 3, 15, seed).unwrap();
            let v = brute_force_val(&inst).unwrap();
            assert!((v - naive_xor_val(&inst)).abs() < 1e-12);
            let neg = XorInstance::new(9, 3, inst.clauses.clone(), inst.coeffs.iter().map(|b| -b).collect()).unwrap();
            assert!((brute_force_val(&neg).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn bipartite_matches_direct() {
        let g = BipartiteHypergraph::new(5, 3, vec![vec![vec![0, 1], vec![2, 3]], vec![vec![1, 4]]], None).unwrap();
        let psi = BipartitePolynomial::new(g, vec![vec![1.0, -0.5], vec![0.25]]).unwrap();
        let direct = (0u32..32)
            .map(|bits| {
                let x: Vec<i8> = (0..5).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
                psi.value_at(&x)
            })
            .fold(0.0, f64::max);
        assert!((brute_force_val(&psi).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn guard_rejects_large() {
        let inst = XorInstance::new(40, 3, vec![vec![0, 1, 2]], vec![1.0]).unwrap();
        assert!(matches!(brute_force_val(&inst), Err(Error::Guard(_))));
    }
}
