//! Sparse symmetric matrices and certified spectral-norm bounds.

mod spectral;

pub use spectral::{
    certified_specnorm, dense_norm, lanczos_extreme, power_iteration, BoundMethod, SpecBound,
    SpecConfig,
};

use crate::{Error, Result};

/// Square sparse matrix in CSR form with duplicates summed and zeros dropped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Build from `(row, col, value)` triplets; repeated coordinates are added.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(u32, u32, f64)>) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|&&(r, c, _)| r as usize >= dim || c as usize >= dim) {
            return Err(Error::param(format!("entry ({r}, {c}) outside a {dim}x{dim} matrix")));
        }
        if let Some(&(r, c, v)) = triplets.iter().find(|t| !t.2.is_finite()) {
            return Err(Error::param(format!("entry ({r}, {c}) = {v} is not finite")));
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                row_ptr[r as usize + 1] += 1;
                cols.push(c);
                vals.push(v);
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut m = SparseMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        };
        m.drop_zeros();
        Ok(m)
    }

    fn drop_zeros(&mut self) {
        if self.vals.iter().all(|&v| v != 0.0) {
            return;
        }
        let mut row_ptr = vec![0usize; self.dim + 1];
        let mut cols = Vec::with_capacity(self.cols.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                if v != 0.0 {
                    cols.push(c);
                    vals.push(v);
                }
            }
            row_ptr[r + 1] = cols.len();
        }
        *self = SparseMatrix {
            dim: self.dim,
            row_ptr,
            cols,
            vals,
        };
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&(c as u32)) {
            Ok(i) => self.vals[span.start + i],
            Err(_) => 0.0,
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.dim).flat_map(move |r| self.row(r).map(move |(c, v)| (r as u32, c, v)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.triplets().all(|(r, c, v)| self.get(c as usize, r as usize) == v)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate().take(self.dim) {
            *out = self.row(r).map(|(c, v)| v * x[c as usize]).sum();
        }
    }

    pub fn row_l1(&self, r: usize) -> f64 {
        self.row(r).map(|(_, v)| v.abs()).sum()
    }

    pub fn max_row_l1(&self) -> f64 {
        (0..self.dim).map(|r| self.row_l1(r)).fold(0.0, f64::max)
    }

    pub fn entrywise_l1(&self) -> f64 {
        self.vals.iter().map(|v| v.abs()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.vals.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Submatrix on `rows × cols` (given as sorted index lists), re-indexed densely.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<(u32, u32, f64)> {
        let mut col_pos = vec![u32::MAX; self.dim];
        for (j, &c) in cols.iter().enumerate() {
            col_pos[c] = j as u32;
        }
        let mut out = Vec::new();
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                let j = col_pos[c as usize];
                if j != u32::MAX {
                    out.push((i as u32, j, v));
                }
            }
        }
        out
    }

    /// Vertex sets of the connected components of the nonzero pattern,
    /// skipping isolated indices without a diagonal entry.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (r, c, _) in self.triplets() {
            let (a, b) = (find(&mut parent, r as usize), find(&mut parent, c as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..self.dim {
            if self.row_ptr[i + 1] > self.row_ptr[i] {
                let root = find(&mut parent, i);
                groups.entry(root).or_default().push(i);
            }
        }
        groups.into_values().collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.dim]; self.dim];
        for (r, c, v) in self.triplets() {
            d[r as usize][c as usize] = v;
        }
        d
    }
}
