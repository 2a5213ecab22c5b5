use std::sync::Arc;

use super::complex::{ChainComplex, ChainMap};
use super::module::{Bimodule, Module, Term};
use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{Budget, Fp, Matrix, Subspace};
use crate::par::{self, Strategy};

/// Linear maps F: X -> Y (as row-major tgt x src vectors) with
/// `tgt_op * F = F * src_op` for every pair.
pub fn intertwiners(field: Fp, src_dim: usize, tgt_dim: usize, pairs: &[(&Matrix, &Matrix)], budget: &Budget) -> Result<Subspace> {
    let n = src_dim * tgt_dim;
    let mut basis: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1 % field.p();
            v
        })
        .collect();
    for (sop, top) in pairs {
        if basis.is_empty() {
            break;
        }
        budget.check(n, basis.len())?;
        let work = basis.len() * n * (src_dim + tgt_dim);
        let residuals: Vec<Vec<u32>> = par::map(Strategy::Auto, work, &basis, |v| {
            let fm = Matrix::from_data(field, tgt_dim, src_dim, v.clone()).expect("shape");
            let r = top.mul(&fm).expect("shape").sub(&fm.mul(sop).expect("shape")).expect("shape");
            r.data().to_vec()
        });
        let m = Matrix::from_columns(field, n, &residuals);
        let kernel = m.kernel_basis();
        basis = kernel
            .iter()
            .map(|c| {
                let mut v = vec![0; n];
                for (b, &x) in basis.iter().zip(c) {
                    if x != 0 {
                        for (o, &y) in v.iter_mut().zip(b) {
                            *o = field.mul_add(*o, x, y);
                        }
                    }
                }
                v
            })
            .collect();
    }
    Ok(Subspace::span(field, n, basis.iter().map(|v| v.as_slice())))
}

/// An outer operator on Hom(X, Y): post-compose with an operator on Y, or
/// pre-compose with an operator on X.
#[derive(Debug, Clone)]
pub enum OuterOp {
    Post(Matrix),
    Pre(Matrix),
}

/// Summand Hom(X^src_deg, Y^{src_deg + n}) of the degree-n term.
#[derive(Debug, Clone)]
pub struct HomBlock {
    pub src_deg: i32,
    pub src_dim: usize,
    pub tgt_dim: usize,
    pub space: Subspace,
    pub offset: usize,
}

/// Bookkeeping of a Hom complex: blocks, dims, differentials, outer ops.
#[derive(Debug, Clone)]
pub struct HomData {
    pub lo: i32,
    pub blocks: Vec<Vec<HomBlock>>,
    pub dims: Vec<usize>,
    pub diffs: Vec<Matrix>,
    pub outer: Vec<Vec<Matrix>>,
}

impl HomData {
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    fn blocks_at(&self, n: i32) -> &[HomBlock] {
        if n < self.lo || n > self.hi() {
            return &[];
        }
        &self.blocks[(n - self.lo) as usize]
    }

    /// The maps X^i -> Y^{i+n} encoded by a degree-n coordinate vector.
    pub fn maps_at(&self, field: Fp, n: i32, coords: &[u32]) -> Vec<(i32, Matrix)> {
        self.blocks_at(n)
            .iter()
            .map(|b| {
                let v = b.space.combine(&coords[b.offset..b.offset + b.space.dim()]);
                (b.src_deg, Matrix::from_data(field, b.tgt_dim, b.src_dim, v).expect("shape"))
            })
            .collect()
    }

    /// Coordinates of the family `comp(i): X^i -> Y^{i+n}` in degree n.
    pub fn coords_of(&self, n: i32, comp: impl Fn(i32) -> Matrix) -> Result<Vec<u32>> {
        let dim = if n < self.lo || n > self.hi() { 0 } else { self.dims[(n - self.lo) as usize] };
        let mut out = vec![0; dim];
        for b in self.blocks_at(n) {
            let m = comp(b.src_deg);
            let c = b.space.coords(m.data()).ok_or_else(|| Error::Violation(format!("map from degree {} is not linear", b.src_deg)))?;
            out[b.offset..b.offset + c.len()].copy_from_slice(&c);
        }
        Ok(out)
    }
}

fn vec_of(m: &Matrix) -> Vec<u32> {
    m.data().to_vec()
}

/// Hom complex between complexes of terms of possibly different kinds.
/// `pairs` lists the (source op, target op) pairs maps must intertwine,
/// `outer` the operators that act on the Hom spaces.
pub fn hom_raw<X: Term, Y: Term>(
    x: &ChainComplex<X>,
    y: &ChainComplex<Y>,
    pairs: impl Fn(&X, &Y) -> Vec<(Matrix, Matrix)> + Sync,
    outer: impl Fn(&X, &Y) -> Vec<OuterOp> + Sync,
    budget: &Budget,
) -> Result<HomData> {
    let f = x.field();
    let lo = y.lo() - x.hi();
    let hi = y.hi() - x.lo();
    // all blocks, computed independently
    let keys: Vec<(i32, i32)> =
        (lo..=hi).flat_map(|n| (x.lo()..=x.hi()).filter(move |i| i + n >= y.lo() && i + n <= y.hi()).map(move |i| (n, i))).collect();
    let work: usize = keys.iter().map(|&(n, i)| (x.dim(i) * y.dim(i + n)).pow(2)).sum();
    let spaces = par::map(Strategy::Auto, work, &keys, |&(n, i)| -> Result<Subspace> {
        let xs = x.term(i).expect("in range");
        let yt = y.term(i + n).expect("in range");
        let ps = pairs(xs, yt);
        let refs: Vec<(&Matrix, &Matrix)> = ps.iter().map(|(a, b)| (a, b)).collect();
        intertwiners(f, xs.dim(), yt.dim(), &refs, budget)
    });
    let mut blocks: Vec<Vec<HomBlock>> = vec![Vec::new(); (hi - lo + 1) as usize];
    let mut dims = vec![0usize; (hi - lo + 1) as usize];
    for (&(n, i), space) in keys.iter().zip(spaces) {
        let space = space?;
        let k = (n - lo) as usize;
        blocks[k].push(HomBlock { src_deg: i, src_dim: x.dim(i), tgt_dim: y.dim(i + n), offset: dims[k], space });
        dims[k] += blocks[k].last().expect("pushed").space.dim();
    }
    let mut diffs = Vec::with_capacity(dims.len());
    for n in lo..=hi {
        let k = (n - lo) as usize;
        let next_dim = dims.get(k + 1).copied().unwrap_or(0);
        let mut d = Matrix::zeros(f, next_dim, dims[k]);
        if k + 1 < dims.len() {
            let sign = f.neg(f.sign(n as i64));
            let next = &blocks[k + 1];
            for b in &blocks[k] {
                let i = b.src_deg;
                let dy = y.diff(i + n);
                let dx = x.diff(i - 1);
                let post = next.iter().find(|nb| nb.src_deg == i);
                let pre = next.iter().find(|nb| nb.src_deg == i - 1);
                for (c, v) in b.space.basis().iter().enumerate() {
                    let fm = Matrix::from_data(f, b.tgt_dim, b.src_dim, v.clone())?;
                    let mut img: Vec<(usize, Vec<u32>)> = Vec::new();
                    if let Some(nb) = post {
                        let g = dy.mul(&fm)?;
                        img.push((
                            nb.offset,
                            nb.space
                                .coords(&vec_of(&g))
                                .ok_or_else(|| Error::Violation("Hom differential leaves the linear maps".into()))?,
                        ));
                    }
                    if let Some(nb) = pre {
                        let g = fm.mul(&dx)?.scale(sign);
                        img.push((
                            nb.offset,
                            nb.space
                                .coords(&vec_of(&g))
                                .ok_or_else(|| Error::Violation("Hom differential leaves the linear maps".into()))?,
                        ));
                    }
                    for (off, coords) in img {
                        for (r, &val) in coords.iter().enumerate() {
                            d.add_at(off + r, b.offset + c, val);
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    // outer operators, block diagonal
    let mut outer_ops: Vec<Vec<Matrix>> = Vec::with_capacity(dims.len());
    for n in lo..=hi {
        let k = (n - lo) as usize;
        let count = outer(x.terms().first().expect("nonempty"), y.terms().first().expect("nonempty")).len();
        let mut ops = vec![Matrix::zeros(f, dims[k], dims[k]); count];
        for b in &blocks[k] {
            let os = outer(x.term(b.src_deg).expect("in range"), y.term(b.src_deg + n).expect("in range"));
            for (o, op) in os.iter().enumerate() {
                for (c, v) in b.space.basis().iter().enumerate() {
                    let fm = Matrix::from_data(f, b.tgt_dim, b.src_dim, v.clone())?;
                    let g = match op {
                        OuterOp::Post(p) => p.mul(&fm)?,
                        OuterOp::Pre(q) => fm.mul(q)?,
                    };
                    let coords =
                        b.space.coords(&vec_of(&g)).ok_or_else(|| Error::Violation("outer action does not preserve linear maps".into()))?;
                    for (r, &val) in coords.iter().enumerate() {
                        ops[o].add_at(b.offset + r, b.offset + c, val);
                    }
                }
            }
        }
        outer_ops.push(ops);
    }
    Ok(HomData { lo, blocks, dims, diffs, outer: outer_ops })
}

/// Hom complex of module complexes over one algebra, as k-vector spaces.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub complex: ChainComplex<Module>,
    pub data: HomData,
}

impl HomComplex {
    pub fn maps_at(&self, n: i32, coords: &[u32]) -> Vec<(i32, Matrix)> {
        self.data.maps_at(self.complex.field(), n, coords)
    }

    /// Degree-0 coordinates of a chain map.
    pub fn chain_map_coords(&self, m: &ChainMap<Module>) -> Result<Vec<u32>> {
        self.data.coords_of(0, |i| m.at(i))
    }
}

fn ground_terms(f: Fp, dims: &[usize]) -> Vec<Module> {
    let k = Arc::new(Algebra::ground(f));
    dims.iter().map(|&d| Module::new_unchecked(k.clone(), d, vec![Matrix::identity(f, d)])).collect()
}

pub fn hom_complex(x: &ChainComplex<Module>, y: &ChainComplex<Module>) -> Result<HomComplex> {
    hom_complex_with(x, y, &Budget::from_env())
}

pub fn hom_complex_with(x: &ChainComplex<Module>, y: &ChainComplex<Module>, budget: &Budget) -> Result<HomComplex> {
    let (xa, ya) = (x.terms()[0].algebra(), y.terms()[0].algebra());
    if !xa.same_tables(ya) {
        return Err(Error::InvalidInput("Hom between complexes over different algebras".into()));
    }
    let data = hom_raw(x, y, |a, b| a.action().iter().cloned().zip(b.action().iter().cloned()).collect(), |_, _| Vec::new(), budget)?;
    let terms = ground_terms(x.field(), &data.dims);
    let complex = ChainComplex::new_unchecked(data.lo, terms, data.diffs.clone())?;
    Ok(HomComplex { complex, data })
}

fn require_same(a: &Algebra, b: &Algebra, what: &str) -> Result<()> {
    if !a.same_tables(b) {
        return Err(Error::InvalidInput(format!("{what}: algebras do not match")));
    }
    Ok(())
}

/// Hom_C(X, Z) for X an A-C and Z a D-C bimodule complex: a D-A bimodule
/// complex with (d f a)(u) = d f(a u).
pub fn hom_right(x: &ChainComplex<Bimodule>, z: &ChainComplex<Bimodule>, budget: &Budget) -> Result<(ChainComplex<Bimodule>, HomData)> {
    let (x0, z0) = (&x.terms()[0], &z.terms()[0]);
    require_same(x0.right(), z0.right(), "Hom over the right algebra")?;
    let data = hom_raw(
        x,
        z,
        |a, b| a.ract().iter().cloned().zip(b.ract().iter().cloned()).collect(),
        |a, b| b.lact().iter().map(|m| OuterOp::Post(m.clone())).chain(a.lact().iter().map(|m| OuterOp::Pre(m.clone()))).collect(),
        budget,
    )?;
    let (dl, ar) = (z0.left().clone(), x0.left().clone());
    let terms = bimodule_terms(&data, dl, ar);
    Ok((ChainComplex::new_unchecked(data.lo, terms, data.diffs.clone())?, data))
}

/// Hom_B(X, Y) for X a B-A and Y a B-D bimodule complex: an A-D bimodule
/// complex with (a f d)(u) = f(u a) d.
pub fn hom_left(x: &ChainComplex<Bimodule>, y: &ChainComplex<Bimodule>, budget: &Budget) -> Result<(ChainComplex<Bimodule>, HomData)> {
    let (x0, y0) = (&x.terms()[0], &y.terms()[0]);
    require_same(x0.left(), y0.left(), "Hom over the left algebra")?;
    let data = hom_raw(
        x,
        y,
        |a, b| a.lact().iter().cloned().zip(b.lact().iter().cloned()).collect(),
        |a, b| a.ract().iter().map(|m| OuterOp::Pre(m.clone())).chain(b.ract().iter().map(|m| OuterOp::Post(m.clone()))).collect(),
        budget,
    )?;
    let (al, dr) = (x0.right().clone(), y0.right().clone());
    let terms = bimodule_terms(&data, al, dr);
    Ok((ChainComplex::new_unchecked(data.lo, terms, data.diffs.clone())?, data))
}

fn bimodule_terms(data: &HomData, left: crate::algebra::AlgebraRef, right: crate::algebra::AlgebraRef) -> Vec<Bimodule> {
    let nl = left.dim();
    data.dims
        .iter()
        .zip(&data.outer)
        .map(|(&d, ops)| {
            let mut ops = ops.clone();
            let r = ops.split_off(nl);
            Bimodule::new_unchecked(left.clone(), right.clone(), d, ops, r)
        })
        .collect()
}

/// Hom of single modules over one algebra, as a subspace of row-major
/// matrices.
pub fn hom_space(x: &Module, y: &Module, budget: &Budget) -> Result<Subspace> {
    require_same(x.algebra(), y.algebra(), "Hom of modules")?;
    let refs: Vec<(&Matrix, &Matrix)> = x.action().iter().zip(y.action()).collect();
    intertwiners(x.field(), x.dim(), y.dim(), &refs, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn kmod(n: usize) -> Module {
        let f = f5();
        Module::new(Arc::new(Algebra::ground(f)), n, vec![Matrix::identity(f, n)]).unwrap()
    }

    #[test]
    fn hom_of_k_is_k() {
        let x = ChainComplex::concentrated(kmod(1), 0);
        let h = hom_complex(&x, &x).unwrap();
        assert_eq!(h.complex.dims().dims, vec![1]);
    }

    #[test]
    fn shift_bookkeeping() {
        let f = f5();
        let x = ChainComplex::concentrated(kmod(1), 0);
        let y = ChainComplex::new(0, vec![kmod(1), kmod(1)], vec![Matrix::zeros(f, 1, 1)]).unwrap();
        let h = hom_complex(&x, &y).unwrap();
        assert_eq!(h.complex.lo(), 0);
        assert_eq!(h.complex.dims().dims, vec![1, 1]);
    }

    #[test]
    fn endomorphisms_of_regular_module() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
        let x = ChainComplex::concentrated(Module::regular(s), 0);
        let h = hom_complex(&x, &x).unwrap();
        assert_eq!(h.complex.dims().dims, vec![2]);
    }

    #[test]
    fn hom_over_k_dims_multiply() {
        let x = ChainComplex::concentrated(kmod(3), 0);
        let y = ChainComplex::concentrated(kmod(4), 0);
        assert_eq!(hom_complex(&x, &y).unwrap().complex.dims().dims, vec![12]);
    }

    #[test]
    fn hom_differential_squares_to_zero() {
        let f = f5();
        let c = ChainComplex::new(
            0,
            vec![kmod(1), kmod(2), kmod(1)],
            vec![Matrix::from_rows(f, &[vec![1], vec![2]]).unwrap(), Matrix::from_rows(f, &[vec![3, 1]]).unwrap()],
        )
        .unwrap();
        let h = hom_complex(&c, &c).unwrap();
        h.complex.validate().unwrap();
        // c is exact, so is its endomorphism complex
        assert!(h.complex.homology().dims.iter().all(|&d| d == 0));
    }

    #[test]
    fn bimodule_hom_has_valid_outer_actions() {
        let f = f5();
        let s = Arc::new(Algebra::truncated_poly(f, 2).unwrap());
        let t = Arc::new(Algebra::triangular2(f));
        // x: S-T free, z: S-T free; Hom_T(x, z) is an S-S bimodule
        let x = ChainComplex::concentrated(Bimodule::free(s.clone(), t.clone(), 1), 0);
        let (h, _) = hom_right(&x, &x, &Budget::unlimited()).unwrap();
        assert_eq!(h.terms()[0].validate(), Ok(()));
        // S ⊗ T is T^2 as a right T-module
        assert_eq!(h.dims().dims, vec![12]);
        let (hl, _) = hom_left(&x, &x, &Budget::unlimited()).unwrap();
        assert_eq!(hl.terms()[0].validate(), Ok(()));
        assert_eq!(hl.dims().dims, vec![18]);
    }
}
