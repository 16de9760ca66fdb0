//! Exact two-phase simplex over big rationals with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `maximize cᵀx` subject to `Ax = b`, `x ≥ 0`, with `b ≥ 0`.
#[derive(Debug, Clone)]
pub(crate) struct StandardLp {
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    obj: Vec<BigRational>,
    value: BigRational,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        self.rhs[r] /= &p;
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r].clone());
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.value -= &f * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Run Bland's rule over columns `< limit`. Returns `false` if unbounded.
    fn optimize(&mut self, limit: usize) -> bool {
        loop {
            let Some(col) = (0..limit).find(|&j| self.obj[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][col].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][col];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    /// Reset the objective row to `maximize cᵀx` for the current basis.
    fn set_objective(&mut self, c: &[BigRational]) {
        let width = self.obj.len();
        self.obj = (0..width).map(|j| -c.get(j).cloned().unwrap_or_else(BigRational::zero)).collect();
        self.value = BigRational::zero();
        for i in 0..self.rows.len() {
            let cb = c.get(self.basis[i]).cloned().unwrap_or_else(BigRational::zero);
            if cb.is_zero() {
                continue;
            }
            for (v, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                *v += &cb * a;
            }
            self.value += &cb * &self.rhs[i];
        }
    }
}

pub(crate) fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.a.len();
    let n = lp.c.len();
    let mut rows = Vec::with_capacity(m);
    for (i, row) in lp.a.iter().enumerate() {
        let mut r = row.clone();
        r.resize(n + m, BigRational::zero());
        r[n + i] = BigRational::one();
        rows.push(r);
    }
    let mut t = Tableau {
        rows,
        rhs: lp.b.clone(),
        obj: vec![BigRational::zero(); n + m],
        value: BigRational::zero(),
        basis: (n..n + m).collect(),
    };
    let phase1: Vec<BigRational> = (0..n + m).map(|j| if j >= n { rat(-1) } else { BigRational::zero() }).collect();
    t.set_objective(&phase1);
    t.optimize(n + m);
    if !t.value.is_zero() {
        return LpOutcome::Infeasible;
    }
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    t.set_objective(&lp.c);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal { x, value: t.value }
}
