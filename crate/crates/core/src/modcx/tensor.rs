use super::complex::ChainComplex;
use super::module::{Bimodule, Term};
use crate::error::{Error, Result};
use crate::exactla::{Budget, Fp, Matrix, Quotient, Subspace};
use crate::par::{self, Strategy};

/// Relations x b ⊗ y - x ⊗ b y inside X ⊗_k Y (basis u * dim Y + v).
pub fn balancing_relations(field: Fp, rx: &[Matrix], ly: &[Matrix], xd: usize, yd: usize, budget: &Budget) -> Result<Subspace> {
    let n = xd * yd;
    budget.check(n, n)?;
    let mut sub = Subspace::zero(field, n);
    for (r, l) in rx.iter().zip(ly) {
        for u in 0..xd {
            for v in 0..yd {
                if sub.dim() == n {
                    return Ok(sub);
                }
                let mut rel = vec![0; n];
                for u2 in 0..xd {
                    let c = r.get(u2, u);
                    if c != 0 {
                        rel[u2 * yd + v] = field.add(rel[u2 * yd + v], c);
                    }
                }
                for v2 in 0..yd {
                    let c = l.get(v2, v);
                    if c != 0 {
                        rel[u * yd + v2] = field.sub(rel[u * yd + v2], c);
                    }
                }
                sub.insert(&rel);
            }
        }
    }
    Ok(sub)
}

/// Matrix of a ⊗ b between two balanced quotients.
pub fn map_kron(src: &Quotient, src_yd: usize, tgt: &Quotient, a: &Matrix, b: &Matrix) -> Matrix {
    let f = a.field();
    let tyd = b.rows();
    let cols: Vec<Vec<u32>> = src
        .cols
        .iter()
        .map(|&c| {
            let (u, v) = (c / src_yd, c % src_yd);
            let mut img = vec![0; a.rows() * tyd];
            for u2 in 0..a.rows() {
                let x = a.get(u2, u);
                if x == 0 {
                    continue;
                }
                for v2 in 0..tyd {
                    let y = b.get(v2, v);
                    if y != 0 {
                        img[u2 * tyd + v2] = f.mul_add(img[u2 * tyd + v2], x, y);
                    }
                }
            }
            tgt.project(&img)
        })
        .collect();
    Matrix::from_columns(f, tgt.dim(), &cols)
}

/// X ⊗_B Y for an A-B bimodule X and a B-C bimodule Y, with the
/// coequalizer presentation.
pub fn tensor_bimodules(x: &Bimodule, y: &Bimodule, budget: &Budget) -> Result<(Bimodule, Quotient)> {
    if !x.right().same_tables(y.left()) {
        return Err(Error::InvalidInput("tensor over mismatched middle algebras".into()));
    }
    let f = x.field();
    let (xd, yd) = (x.dim(), y.dim());
    let q = Quotient::new(balancing_relations(f, x.ract(), y.lact(), xd, yd, budget)?);
    let iy = Matrix::identity(f, yd);
    let ix = Matrix::identity(f, xd);
    let lact = x.lact().iter().map(|a| map_kron(&q, yd, &q, a, &iy)).collect();
    let ract = y.ract().iter().map(|c| map_kron(&q, yd, &q, &ix, c)).collect();
    let out = Bimodule::new_unchecked(x.left().clone(), y.right().clone(), q.dim(), lact, ract);
    Ok((out, q))
}

/// Summand X^x_deg ⊗_B Y^{n - x_deg} of the degree-n term.
#[derive(Debug, Clone)]
pub struct TensorBlock {
    pub x_deg: i32,
    pub x_dim: usize,
    pub y_dim: usize,
    pub q: Quotient,
    pub offset: usize,
}

#[derive(Debug, Clone)]
pub struct TensorComplex {
    pub complex: ChainComplex<Bimodule>,
    pub blocks: Vec<Vec<TensorBlock>>,
}

/// Total complex of X ⊗_B Y with d(x ⊗ y) = dx ⊗ y + (-1)^{deg x} x ⊗ dy.
/// The outer A- and C-actions are kept.
pub fn tensor_complex(x: &ChainComplex<Bimodule>, y: &ChainComplex<Bimodule>, budget: &Budget) -> Result<TensorComplex> {
    let (x0, y0) = (&x.terms()[0], &y.terms()[0]);
    if !x0.right().same_tables(y0.left()) {
        return Err(Error::InvalidInput("tensor over mismatched middle algebras".into()));
    }
    let f = x.field();
    let lo = x.lo() + y.lo();
    let hi = x.hi() + y.hi();
    let keys: Vec<(i32, i32)> =
        (lo..=hi).flat_map(|n| (x.lo()..=x.hi()).filter(move |i| n - i >= y.lo() && n - i <= y.hi()).map(move |i| (n, i))).collect();
    let work: usize = keys.iter().map(|&(n, i)| (x.dim(i) * y.dim(n - i)).pow(2)).sum();
    let parts = par::map(Strategy::Auto, work, &keys, |&(n, i)| {
        tensor_bimodules(x.term(i).expect("in range"), y.term(n - i).expect("in range"), budget)
    });
    let len = (hi - lo + 1) as usize;
    let mut blocks: Vec<Vec<TensorBlock>> = vec![Vec::new(); len];
    let mut pieces: Vec<Vec<Bimodule>> = vec![Vec::new(); len];
    let mut dims = vec![0usize; len];
    for (&(n, i), part) in keys.iter().zip(parts) {
        let (b, q) = part?;
        let k = (n - lo) as usize;
        blocks[k].push(TensorBlock { x_deg: i, x_dim: x.dim(i), y_dim: y.dim(n - i), q, offset: dims[k] });
        dims[k] += b.dim();
        pieces[k].push(b);
    }
    let mut terms = Vec::with_capacity(len);
    for (k, p) in pieces.into_iter().enumerate() {
        if p.is_empty() {
            terms.push(Bimodule::free(x0.left().clone(), y0.right().clone(), 0));
            debug_assert_eq!(dims[k], 0);
        } else {
            terms.push(Bimodule::direct_sum(&p));
        }
    }
    let mut diffs = Vec::with_capacity(len);
    for n in lo..=hi {
        let k = (n - lo) as usize;
        let next_dim = dims.get(k + 1).copied().unwrap_or(0);
        let mut d = Matrix::zeros(f, next_dim, dims[k]);
        if k + 1 < len {
            for b in &blocks[k] {
                let i = b.x_deg;
                let j = n - i;
                if let Some(nb) = blocks[k + 1].iter().find(|nb| nb.x_deg == i + 1) {
                    let iy = Matrix::identity(f, b.y_dim);
                    d.add_block(nb.offset, b.offset, &map_kron(&b.q, b.y_dim, &nb.q, &x.diff(i), &iy));
                }
                if let Some(nb) = blocks[k + 1].iter().find(|nb| nb.x_deg == i) {
                    let ix = Matrix::identity(f, b.x_dim);
                    let m = map_kron(&b.q, b.y_dim, &nb.q, &ix, &y.diff(j)).scale(f.sign(i as i64));
                    d.add_block(nb.offset, b.offset, &m);
                }
            }
        }
        diffs.push(d);
    }
    let complex = ChainComplex::new_unchecked(lo, terms, diffs)?;
    Ok(TensorComplex { complex, blocks })
}

/// M ⊗_B N for single bimodules (see [`tensor_bimodules`]).
pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<Bimodule> {
    Ok(tensor_bimodules(m, n, &Budget::from_env())?.0)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::Algebra;
    use crate::modcx::Module;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn over_k_dims_multiply() {
        let f = f5();
        let k = Arc::new(Algebra::ground(f));
        let a = Bimodule::free(k.clone(), k.clone(), 3);
        let b = Bimodule::free(k.clone(), k, 2);
        assert_eq!(tensor_over(&a, &b).unwrap().dim(), 6);
    }

    #[test]
    fn residue_tensor_residue() {
        let s = Arc::new(Algebra::truncated_poly(f5(), 2).unwrap());
        let k = Module::residue(s.clone()).unwrap();
        let right = Bimodule::from_right(&k.over_opposite(), s).unwrap();
        let left = Bimodule::from_left(&k);
        assert_eq!(tensor_over(&right, &left).unwrap().dim(), 1);
    }

    #[test]
    fn unit_law_is_bijective() {
        let f = f5();
        let t = Arc::new(Algebra::triangular2(f));
        let reg = Bimodule::regular(t.clone());
        let n = Bimodule::free(t.clone(), Arc::new(Algebra::truncated_poly(f, 2).unwrap()), 1);
        let (out, q) = tensor_bimodules(&reg, &n, &Budget::unlimited()).unwrap();
        assert_eq!(out.dim(), n.dim());
        // b ⊗ n |-> b n on quotient representatives
        let cols: Vec<Vec<u32>> = q
            .cols
            .iter()
            .map(|&c| {
                let (u, v) = (c / n.dim(), c % n.dim());
                n.lact()[u].column(v)
            })
            .collect();
        let m = Matrix::from_columns(f, n.dim(), &cols);
        assert!(m.inverse().is_some());
    }

    #[test]
    fn complex_differential_squares_to_zero() {
        let f = f5();
        let k = Arc::new(Algebra::ground(f));
        let one = Bimodule::free(k.clone(), k.clone(), 1);
        let id = Matrix::identity(f, 1);
        let c = ChainComplex::new(0, vec![one.clone(), one.clone()], vec![id]).unwrap();
        let t = tensor_complex(&c, &c, &Budget::unlimited()).unwrap();
        t.complex.validate().unwrap();
        assert_eq!(t.complex.dims().dims, vec![1, 2, 1]);
        assert_eq!(t.complex.homology().dims, vec![0, 0, 0]);
    }
}
