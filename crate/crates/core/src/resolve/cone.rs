use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::exactla::{Budget, Fp, Matrix, Subspace};
use crate::modcx::{ChainComplex, GradedDims, Module};

use super::free::{FreeComplex, TMatrix};

/// A complex of free modules P with a quasi-isomorphism P -> C, valid in
/// degrees above `bottom` (everywhere when `complete`).
#[derive(Debug, Clone)]
pub struct Resolution {
    pub target: ChainComplex<Module>,
    pub free: FreeComplex,
    /// images[k][g]: image in the target of generator g of degree free.lo + k
    pub images: Vec<Vec<Vec<u32>>>,
    /// lowest degree built
    pub bottom: i32,
    /// P is an honest finite resolution (kernel vanished)
    pub complete: bool,
}

impl Resolution {
    pub fn ranks(&self) -> &[usize] {
        self.free.ranks()
    }

    /// Generator counts in homological order F_0, F_1, ... (module input in degree 0).
    pub fn homological_ranks(&self) -> Vec<usize> {
        (0..=(-self.free.lo()).max(0)).map(|i| self.free.rank(-i)).collect()
    }

    /// Highest degree j for which H^j(Hom(P, N)) is the true Ext, for N
    /// starting in degree `n_lo`.
    pub fn ext_valid_upto(&self, n_lo: i32) -> i32 {
        if self.complete {
            i32::MAX
        } else {
            n_lo - self.bottom - 1
        }
    }

    /// Lowest degree j for which H^j(P ⊗ N) is the true Tor, for N ending
    /// in degree `n_hi`.
    pub fn tor_valid_from(&self, n_hi: i32) -> i32 {
        if self.complete {
            i32::MIN
        } else {
            self.bottom + n_hi + 1
        }
    }

    /// k-matrix of the comparison map P^deg -> C^deg.
    pub fn phi(&self, deg: i32) -> Matrix {
        phi_matrix(&self.free, &self.images, &self.target, deg)
    }

    /// Check d∘d = 0, that phi is a chain map, and that the mapping cone is
    /// exact in every degree the construction covers.
    pub fn verify(&self, budget: &Budget) -> Result<()> {
        self.free.check_square_zero()?;
        let p = self.free.to_complex(budget)?;
        for deg in p.lo()..=p.hi().max(self.target.hi()) {
            let lhs = self.target.diff(deg).mul(&self.phi(deg))?;
            let rhs = self.phi(deg + 1).mul(&p.diff(deg))?;
            if lhs != rhs {
                return Err(Error::Violation(format!("comparison map is not a chain map in degree {deg}")));
            }
        }
        let hi = self.target.hi();
        let lo = self.bottom;
        let cone = mapping_cone(&p, &self.target, |d| self.phi(d), lo - 1, hi)?;
        let h = cone.homology_dims(lo, hi);
        if h.total() != 0 {
            return Err(Error::Violation(format!("mapping cone not exact: {h}")));
        }
        Ok(())
    }

    /// Homology of P on a window.
    pub fn homology(&self, lo: i32, hi: i32, budget: &Budget) -> Result<GradedDims> {
        Ok(self.free.to_complex(budget)?.homology_dims(lo, hi))
    }
}

fn phi_matrix(p: &FreeComplex, images: &[Vec<Vec<u32>>], c: &ChainComplex<Module>, deg: i32) -> Matrix {
    let t = p.algebra().dim();
    let f = p.algebra().field();
    let mut m = Matrix::zeros(f, c.dim(deg), p.rank(deg) * t);
    if let (Some(term), true) = (c.term(deg), deg >= p.lo()) {
        if let Some(imgs) = images.get((deg - p.lo()) as usize) {
            for (g, img) in imgs.iter().enumerate() {
                for (b, a) in term.action().iter().enumerate() {
                    let col = a.mul_vec(img).expect("shape");
                    for (r, v) in col.into_iter().enumerate() {
                        m.set(r, g * t + b, v);
                    }
                }
            }
        }
    }
    m
}

/// Explicit mapping cone of phi: P -> C over the k-spaces, degrees [lo, hi]:
/// Cone^n = P^{n+1} ⊕ C^n, d(p, c) = (-dp, phi p + dc).
fn mapping_cone(
    p: &ChainComplex<Module>,
    c: &ChainComplex<Module>,
    phi: impl Fn(i32) -> Matrix,
    lo: i32,
    hi: i32,
) -> Result<ChainComplex<Module>> {
    let f = p.field();
    let k = std::sync::Arc::new(crate::algebra::Algebra::ground(f));
    let dim = |n: i32| p.dim(n + 1) + c.dim(n);
    let terms = (lo..=hi).map(|n| Module::new_unchecked(k.clone(), dim(n), vec![Matrix::identity(f, dim(n))])).collect();
    let diffs = (lo..=hi)
        .map(|n| {
            let mut d = Matrix::zeros(f, if n < hi { dim(n + 1) } else { 0 }, dim(n));
            if n < hi {
                let pn = p.dim(n + 1);
                d.set_block(0, 0, &p.diff(n + 1).neg());
                d.set_block(p.dim(n + 2), 0, &phi(n + 1));
                d.set_block(p.dim(n + 2), pn, &c.diff(n));
            }
            d
        })
        .collect();
    ChainComplex::new_unchecked(lo, terms, diffs)
}

fn left_action_on(alg: &AlgebraRef, rank: usize, v: &[u32], b: usize) -> Vec<u32> {
    let t = alg.dim();
    let e = alg.basis_vector(b);
    let mut out = Vec::with_capacity(rank * t);
    for g in 0..rank {
        out.extend(alg.mul(&e, &v[g * t..(g + 1) * t]));
    }
    out
}

struct Ambient<'a> {
    alg: &'a AlgebraRef,
    r1: usize,
    cn: Option<&'a Module>,
}

impl Ambient<'_> {
    fn act(&self, b: usize, v: &[u32]) -> Vec<u32> {
        let split = self.r1 * self.alg.dim();
        let mut out = left_action_on(self.alg, self.r1, &v[..split], b);
        if let Some(m) = self.cn {
            out.extend(m.action()[b].mul_vec(&v[split..]).expect("shape"));
        }
        out
    }

    fn span_into(&self, span: &mut Subspace, v: &[u32]) {
        for b in 0..self.alg.dim() {
            span.insert(&self.act(b, v));
        }
    }

    fn t_span(&self, gens: &[Vec<u32>], base: &Subspace) -> Subspace {
        let mut s = base.clone();
        for g in gens {
            self.span_into(&mut s, g);
        }
        s
    }
}

/// Generators of Z modulo W as a T-module: first a basis of
/// Z / (W + rad·Z), then anything still missing; finally try to merge
/// pairs of generators.
fn choose_generators(field: Fp, amb: &Ambient<'_>, z: &Subspace, w: &Subspace) -> Vec<Vec<u32>> {
    let nil = amb.alg.nilpotent_basis();
    let mut quot = w.clone();
    for zb in z.basis() {
        for &b in &nil {
            quot.insert(&amb.act(b, zb));
        }
    }
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut span = w.clone();
    for zb in z.basis() {
        if quot.insert(zb) {
            amb.span_into(&mut span, zb);
            gens.push(zb.clone());
        }
    }
    for zb in z.basis() {
        if span.dim() == z.dim() {
            break;
        }
        if !span.contains(zb) {
            amb.span_into(&mut span, zb);
            gens.push(zb.clone());
        }
    }
    // merging pass: replace g_a, g_b by g_a + g_b when that still generates
    let mut a = 0;
    while a < gens.len() {
        let mut merged = false;
        for b in (a + 1)..gens.len() {
            let sum: Vec<u32> = gens[a].iter().zip(&gens[b]).map(|(&x, &y)| field.add(x, y)).collect();
            let mut trial: Vec<Vec<u32>> = gens.iter().enumerate().filter(|(i, _)| *i != a && *i != b).map(|(_, g)| g.clone()).collect();
            trial.push(sum.clone());
            let s = amb.t_span(&trial, w);
            if s.dim() == z.dim() {
                gens.remove(b);
                gens[a] = sum;
                merged = true;
                break;
            }
        }
        if !merged {
            a += 1;
        }
    }
    gens
}

/// Resolve a bounded complex C of T-modules by free modules down to degree
/// `C.lo - length`, via successive covers of the cycles of the mapping cone.
pub fn resolve_complex(c: &ChainComplex<Module>, length: usize, budget: &Budget) -> Result<Resolution> {
    c.validate()?;
    let alg = c.terms()[0].algebra().clone();
    let f = alg.field();
    let t = alg.dim();
    let bottom = c.lo() - length as i32;
    // built from the top down; index 0 = degree hi
    let mut ranks_rev: Vec<usize> = Vec::new();
    let mut tdiffs_rev: Vec<TMatrix> = Vec::new();
    let mut images_rev: Vec<Vec<Vec<u32>>> = Vec::new();
    // P^{n+1}, P^{n+2} data needed at step n
    let mut complete = false;
    let mut n = c.hi();
    while n >= bottom {
        let r1 = ranks_rev.last().copied().unwrap_or(0); // rank of P^{n+1}
        let r2 = if ranks_rev.len() >= 2 { ranks_rev[ranks_rev.len() - 2] } else { 0 };
        let cn = c.dim(n);
        let a = r1 * t;
        let amb_dim = a + cn;
        let rows = r2 * t + c.dim(n + 1);
        budget.check(rows, amb_dim)?;
        let mut delta = Matrix::zeros(f, rows, amb_dim);
        if r1 > 0 {
            // -d_P on P^{n+1} -> P^{n+2}, and phi^{n+1}
            let tmp = FreeComplex::new(
                alg.clone(),
                n + 1,
                vec![r1, r2],
                vec![tdiffs_rev.last().cloned().unwrap_or_else(|| TMatrix::zeros(r2, r1, t)), TMatrix::zeros(0, r2, t)],
            )?;
            delta.set_block(0, 0, &tmp.kdiff(n + 1).neg());
            if let Some(term) = c.term(n + 1) {
                let imgs = images_rev.last().expect("built");
                for (g, img) in imgs.iter().enumerate() {
                    for (b, act) in term.action().iter().enumerate() {
                        let col = act.mul_vec(img)?;
                        for (r, v) in col.into_iter().enumerate() {
                            delta.set(r2 * t + r, g * t + b, v);
                        }
                    }
                }
            }
        }
        if cn > 0 {
            delta.set_block(r2 * t, a, &c.diff(n));
        }
        let z = Subspace::span(f, amb_dim, delta.kernel_basis().iter().map(|v| v.as_slice()));
        let mut w = Subspace::zero(f, amb_dim);
        if cn > 0 {
            let dprev = c.diff(n - 1);
            for col in dprev.columns() {
                let mut v = vec![0; a];
                v.extend(col);
                w.insert(&v);
            }
        }
        let amb = Ambient { alg: &alg, r1, cn: c.term(n) };
        let gens = choose_generators(f, &amb, &z, &w);
        let rn = gens.len();
        let mut td = TMatrix::zeros(r1, rn, t);
        let mut imgs = Vec::with_capacity(rn);
        for (g, z) in gens.iter().enumerate() {
            for i in 0..r1 {
                let slot = td.get_mut(i, g);
                for (s, &x) in slot.iter_mut().zip(&z[i * t..(i + 1) * t]) {
                    *s = f.neg(x);
                }
            }
            imgs.push(z[a..].to_vec());
        }
        ranks_rev.push(rn);
        tdiffs_rev.push(td);
        images_rev.push(imgs);
        if n < c.lo() && rn == 0 {
            complete = true;
            break;
        }
        n -= 1;
    }
    let lo = n.max(bottom);
    ranks_rev.reverse();
    images_rev.reverse();
    // tdiffs_rev[k] goes from degree (hi - k) to hi - k + 1; re-index upward
    tdiffs_rev.reverse();
    let free = FreeComplex::new(alg, lo, ranks_rev, tdiffs_rev)?;
    Ok(Resolution { target: c.clone(), free, images: images_rev, bottom: lo, complete })
}

/// Free resolution of a module placed in degree 0, down to degree -length.
pub fn free_resolution(m: &Module, length: usize, budget: &Budget) -> Result<Resolution> {
    resolve_complex(&ChainComplex::concentrated(m.clone(), 0), length, budget)
}
