//! Binomial coefficients, colexicographic subset ranking and combination
//! enumeration.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact binomial coefficient, `None` on overflow of `u128`.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        // acc * (n - k + i) is divisible by i after multiplication
        acc = acc.checked_mul(n as u128 - k as u128 + i)? / i;
    }
    Some(acc)
}

/// Visit every `r`-combination of `items` in lexicographic order of positions.
pub fn for_each_combination<T: Copy>(items: &[T], r: usize, mut f: impl FnMut(&[T])) {
    let n = items.len();
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = r;
        while i > 0 && idx[i - 1] == i - 1 + n - r {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        let i = i - 1;
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..r {
            buf[j] = items[idx[j]];
        }
    }
}

/// Ground set over which subsets are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Universe {
    /// Plain variables `0..n`.
    Plain { n: u32 },
    /// Two clones of each variable; clone `c ∈ {0,1}` of variable `i` is element `2i + c`.
    Cloned { n: u32 },
}

impl Universe {
    pub fn size(&self) -> u32 {
        match *self {
            Universe::Plain { n } => n,
            Universe::Cloned { n } => 2 * n,
        }
    }

    pub fn variables(&self) -> u32 {
        match *self {
            Universe::Plain { n } | Universe::Cloned { n } => n,
        }
    }
}

#[inline]
pub fn clone_of(var: u32, clone: u32) -> u32 {
    2 * var + clone
}

#[inline]
pub fn var_of(element: u32) -> u32 {
    element / 2
}

/// Dense colexicographic indexing of the `ell`-subsets of a universe.
#[derive(Debug, Clone)]
pub struct SubsetIndex {
    universe: Universe,
    ell: usize,
    len: u64,
    // table[i][x] = C(x, i) for 0 <= i <= ell, 0 <= x <= |universe|
    table: Vec<Vec<u64>>,
}

impl SubsetIndex {
    pub fn new(universe: Universe, ell: usize) -> Result<Self> {
        let size = universe.size() as u64;
        if ell as u64 > size {
            return Err(Error::param(format!(
                "subset size {ell} exceeds universe size {size}"
            )));
        }
        let len = binomial(size, ell as u64)
            .and_then(|v| u64::try_from(v).ok())
            .ok_or_else(|| Error::guard(format!("C({size}, {ell}) does not fit in 64 bits")))?;
        let mut table = Vec::with_capacity(ell + 1);
        for i in 0..=ell {
            let row: Vec<u64> = (0..=size)
                .map(|x| binomial(x, i as u64).map_or(u64::MAX, |v| v.min(u64::MAX as u128) as u64))
                .collect();
            table.push(row);
        }
        Ok(SubsetIndex {
            universe,
            ell,
            len,
            table,
        })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of indexed subsets, `C(|universe|, ell)`.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Rank of a strictly increasing subset.
    pub fn rank(&self, sorted: &[u32]) -> u64 {
        debug_assert_eq!(sorted.len(), self.ell);
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        sorted
            .iter()
            .enumerate()
            .map(|(i, &e)| self.table[i + 1][e as usize])
            .sum()
    }

    pub fn unrank(&self, mut rank: u64) -> Vec<u32> {
        debug_assert!(rank < self.len);
        let mut out = vec![0u32; self.ell];
        let mut hi = self.universe.size() as usize;
        for i in (1..=self.ell).rev() {
            // largest e < hi with C(e, i) <= rank
            let row = &self.table[i];
            let mut lo = i - 1;
            let mut top = hi - 1;
            while lo < top {
                let mid = (lo + top).div_ceil(2);
                if row[mid] <= rank {
                    lo = mid;
                } else {
                    top = mid - 1;
                }
            }
            out[i - 1] = lo as u32;
            rank -= row[lo];
            hi = lo;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(0, 0), Some(1));
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(16, 2), Some(120));
        assert_eq!(binomial(5, 6), Some(0));
        assert_eq!(binomial(80, 2), Some(3160));
    }

    #[test]
    fn combinations_in_order() {
        let mut seen = Vec::new();
        for_each_combination(&[1, 2, 3, 4], 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut count = 0;
        for_each_combination(&[7, 8, 9], 0, |c| {
            assert!(c.is_empty());
            count += 1
        });
        assert_eq!(count, 1);
        for_each_combination(&[7, 8, 9], 3, |_| count += 1);
        assert_eq!(count, 2);
        for_each_combination(&[7, 8], 3, |_| count += 1);
        assert_eq!(count, 2);
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let idx = SubsetIndex::new(Universe::Cloned { n: 5 }, 3).unwrap();
        assert_eq!(idx.len(), 120);
        let mut ranks = Vec::new();
        let all: Vec<u32> = (0..10).collect();
        for_each_combination(&all, 3, |c| {
            let r = idx.rank(c);
            assert_eq!(idx.unrank(r), c);
            ranks.push(r);
        });
        ranks.sort_unstable();
        assert_eq!(ranks, (0..120).collect::<Vec<_>>());
    }

    #[test]
    fn empty_subset_index() {
        let idx = SubsetIndex::new(Universe::Plain { n: 4 }, 0).unwrap();
        assert_eq!(idx.len(), 1);
        assert_eq!(idx.rank(&[]), 0);
        assert!(SubsetIndex::new(Universe::Plain { n: 4 }, 5).is_err());
    }
}
