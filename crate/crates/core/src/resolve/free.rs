use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraRef};
use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix};
use crate::modcx::{element_action, Bimodule, ChainComplex, Module};

/// Matrix with entries in an algebra T (each entry a coordinate vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMatrix {
    rows: usize,
    cols: usize,
    tdim: usize,
    data: Vec<u32>,
}

impl TMatrix {
    pub fn zeros(rows: usize, cols: usize, tdim: usize) -> Self {
        TMatrix { rows, cols, tdim, data: vec![0; rows * cols * tdim] }
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &[u32] {
        let o = (i * self.cols + j) * self.tdim;
        &self.data[o..o + self.tdim]
    }
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut [u32] {
        let o = (i * self.cols + j) * self.tdim;
        &mut self.data[o..o + self.tdim]
    }
    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        self.get(i, j).iter().all(|&x| x == 0)
    }
}

/// Bounded complex of free T-modules T^{r_n}; d(g_j) = sum_i t_ij g_i.
#[derive(Debug, Clone)]
pub struct FreeComplex {
    alg: AlgebraRef,
    lo: i32,
    ranks: Vec<usize>,
    /// diffs[k] goes from degree lo + k to lo + k + 1 (ranks[k+1] x ranks[k])
    diffs: Vec<TMatrix>,
}

impl FreeComplex {
    pub fn new(alg: AlgebraRef, lo: i32, ranks: Vec<usize>, diffs: Vec<TMatrix>) -> Result<Self> {
        if ranks.len() != diffs.len() {
            return Err(Error::DimensionMismatch("one T-matrix per degree".into()));
        }
        for (k, d) in diffs.iter().enumerate() {
            let next = ranks.get(k + 1).copied().unwrap_or(0);
            if d.rows != next || d.cols != ranks[k] || d.tdim != alg.dim() {
                return Err(Error::DimensionMismatch(format!("T-matrix from degree {}", lo + k as i32)));
            }
        }
        Ok(FreeComplex { alg, lo, ranks, diffs })
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.alg
    }
    pub fn lo(&self) -> i32 {
        self.lo
    }
    pub fn hi(&self) -> i32 {
        self.lo + self.ranks.len() as i32 - 1
    }
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
    pub fn rank(&self, deg: i32) -> usize {
        if deg < self.lo {
            return 0;
        }
        self.ranks.get((deg - self.lo) as usize).copied().unwrap_or(0)
    }
    pub fn tdiff(&self, deg: i32) -> Option<&TMatrix> {
        if deg < self.lo {
            return None;
        }
        self.diffs.get((deg - self.lo) as usize)
    }

    /// k-matrix of d from degree `deg`: block (i, j) is x |-> x t_ij.
    pub fn kdiff(&self, deg: i32) -> Matrix {
        let t = self.alg.dim();
        let f = self.alg.field();
        let mut m = Matrix::zeros(f, self.rank(deg + 1) * t, self.rank(deg) * t);
        if let Some(d) = self.tdiff(deg) {
            for i in 0..d.rows {
                for j in 0..d.cols {
                    if !d.is_zero_entry(i, j) {
                        m.set_block(i * t, j * t, &self.alg.right_mult(d.get(i, j)));
                    }
                }
            }
        }
        m
    }

    /// Explicit complex of free modules.
    pub fn to_complex(&self, budget: &Budget) -> Result<ChainComplex<Module>> {
        let t = self.alg.dim();
        let terms: Vec<Module> = self.ranks.iter().map(|&r| Module::free(self.alg.clone(), r)).collect();
        let mut diffs = Vec::with_capacity(self.ranks.len());
        for deg in self.lo..=self.hi() {
            budget.check(self.rank(deg + 1) * t, self.rank(deg) * t)?;
            diffs.push(self.kdiff(deg));
        }
        ChainComplex::new_unchecked(self.lo, terms, diffs)
    }

    /// d∘d = 0, checked on T-matrices.
    pub fn check_square_zero(&self) -> Result<()> {
        for deg in self.lo..self.hi() {
            let (a, b) = (self.tdiff(deg).expect("in range"), self.tdiff(deg + 1).expect("in range"));
            for i in 0..b.rows {
                for j in 0..a.cols {
                    // d(d g_j) = sum_l a_lj d(g_l) = sum_l a_lj b_il g_i
                    let mut acc = vec![0; self.alg.dim()];
                    for l in 0..a.rows {
                        if a.is_zero_entry(l, j) || b.is_zero_entry(i, l) {
                            continue;
                        }
                        let p = self.alg.mul(a.get(l, j), b.get(i, l));
                        for (x, y) in acc.iter_mut().zip(p) {
                            *x = self.alg.field().add(*x, y);
                        }
                    }
                    if acc.iter().any(|&x| x != 0) {
                        return Err(Error::Violation(format!("d^{} d^{deg} != 0 on free generators", deg + 1)));
                    }
                }
            }
        }
        Ok(())
    }
}

fn require_left(p: &Algebra, n: &Algebra, opposite: bool) -> Result<()> {
    let ok = if opposite { p.is_opposite_of(n) } else { p.same_tables(n) };
    if !ok {
        return Err(Error::InvalidInput("free complex and coefficient complex are over different algebras".into()));
    }
    Ok(())
}

/// Hom_T(P, N) for a free complex P and a complex N of T-Q bimodules, as a
/// complex of k-Q bimodules: Hom_T(T^r, N^q) = (N^q)^r.
pub fn hom_from_free(p: &FreeComplex, n: &ChainComplex<Bimodule>, budget: &Budget) -> Result<ChainComplex<Bimodule>> {
    let n0 = &n.terms()[0];
    require_left(p.algebra(), n0.left(), false)?;
    let f = n.field();
    let q = n0.right().clone();
    let k = Arc::new(Algebra::ground(f));
    let lo = n.lo() - p.hi();
    let hi = n.hi() - p.lo();
    // block m of degree j: (N^{m+j})^{r_m}
    let layout = |j: i32| -> Vec<(i32, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for m in p.lo()..=p.hi() {
            let d = n.dim(m + j) * p.rank(m);
            if d > 0 {
                out.push((m, off, d));
                off += d;
            }
        }
        out
    };
    let total = |l: &[(i32, usize, usize)]| l.iter().map(|x| x.2).sum::<usize>();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let here = layout(j);
        let next = layout(j + 1);
        let (dh, dn) = (total(&here), total(&next));
        budget.check(dn, dh)?;
        let ract: Vec<Matrix> = (0..q.dim())
            .map(|b| {
                let blocks: Vec<Matrix> = here
                    .iter()
                    .flat_map(|&(m, _, _)| {
                        let r = n.term(m + j).expect("nonzero block").ract()[b].clone();
                        std::iter::repeat_n(r, p.rank(m))
                    })
                    .collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        terms.push(Bimodule::new_unchecked(k.clone(), q.clone(), dh, vec![Matrix::identity(f, dh)], ract));
        let mut d = Matrix::zeros(f, dn, dh);
        let sign = f.neg(f.sign(j as i64));
        for &(m, off, _) in &here {
            let nd = n.dim(m + j);
            // d_N f
            if let Some(&(_, noff, _)) = next.iter().find(|x| x.0 == m) {
                let dnm = n.diff(m + j);
                for g in 0..p.rank(m) {
                    d.set_block(noff + g * dnm.rows(), off + g * nd, &dnm);
                }
            }
            // -(-1)^j f d_P lands in block m - 1 of degree j + 1
            if let Some(&(_, noff, _)) = next.iter().find(|x| x.0 == m - 1) {
                let t = p.tdiff(m - 1).expect("in range");
                let nt = n.term(m + j).expect("nonzero block");
                for jj in 0..t.cols() {
                    for i in 0..t.rows() {
                        if t.is_zero_entry(i, jj) {
                            continue;
                        }
                        let rho = element_action(nt.left(), nt.lact(), nd, t.get(i, jj)).scale(sign);
                        d.add_block(noff + jj * nd, off + i * nd, &rho);
                    }
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new_unchecked(lo, terms, diffs)
}

/// P ⊗_T N for a free complex P of right T-modules (given over T^op) and a
/// complex N of T-Q bimodules: T^r ⊗_T N^q = (N^q)^r, a k-Q bimodule complex.
pub fn tensor_free(p: &FreeComplex, n: &ChainComplex<Bimodule>, budget: &Budget) -> Result<ChainComplex<Bimodule>> {
    let n0 = &n.terms()[0];
    require_left(p.algebra(), n0.left(), true)?;
    let f = n.field();
    let q = n0.right().clone();
    let k = Arc::new(Algebra::ground(f));
    let lo = p.lo() + n.lo();
    let hi = p.hi() + n.hi();
    let layout = |j: i32| -> Vec<(i32, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for m in p.lo()..=p.hi() {
            let d = n.dim(j - m) * p.rank(m);
            if d > 0 {
                out.push((m, off, d));
                off += d;
            }
        }
        out
    };
    let total = |l: &[(i32, usize, usize)]| l.iter().map(|x| x.2).sum::<usize>();
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for j in lo..=hi {
        let here = layout(j);
        let next = layout(j + 1);
        let (dh, dn) = (total(&here), total(&next));
        budget.check(dn, dh)?;
        let ract: Vec<Matrix> = (0..q.dim())
            .map(|b| {
                let blocks: Vec<Matrix> = here
                    .iter()
                    .flat_map(|&(m, _, _)| {
                        let r = n.term(j - m).expect("nonzero block").ract()[b].clone();
                        std::iter::repeat_n(r, p.rank(m))
                    })
                    .collect();
                Matrix::block_diag(f, &blocks)
            })
            .collect();
        terms.push(Bimodule::new_unchecked(k.clone(), q.clone(), dh, vec![Matrix::identity(f, dh)], ract));
        let mut d = Matrix::zeros(f, dn, dh);
        for &(m, off, _) in &here {
            let nd = n.dim(j - m);
            let nt = n.term(j - m).expect("nonzero block");
            // d_P ⊗ 1 lands in block m + 1
            if let Some(&(_, noff, _)) = next.iter().find(|x| x.0 == m + 1) {
                let t = p.tdiff(m).expect("in range");
                for jj in 0..t.cols() {
                    for i in 0..t.rows() {
                        if t.is_zero_entry(i, jj) {
                            continue;
                        }
                        let rho = element_action(nt.left(), nt.lact(), nd, t.get(i, jj));
                        d.add_block(noff + i * nd, off + jj * nd, &rho);
                    }
                }
            }
            // (-1)^m 1 ⊗ d_N stays in block m
            if let Some(&(_, noff, _)) = next.iter().find(|x| x.0 == m) {
                let dnm = n.diff(j - m).scale(f.sign(m as i64));
                for g in 0..p.rank(m) {
                    d.set_block(noff + g * dnm.rows(), off + g * nd, &dnm);
                }
            }
        }
        diffs.push(d);
    }
    ChainComplex::new_unchecked(lo, terms, diffs)
}
