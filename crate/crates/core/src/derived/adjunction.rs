use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraRef;
use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix, Quotient, Subspace};
use crate::modcx::{hom_right, intertwiners, map_kron, tensor_bimodules, tensor_complex, Bimodule, ChainComplex, HomData, Term};
use crate::resolve::free_resolution;

use super::functors::{default_length, rhom_complex, DerivedOpts};
use super::reduction::PairedDims;

/// Outcome of the explicit adjunction a(x, y, z).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdjointReport {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub bijective: bool,
    pub bilinear: bool,
    pub natural_x: bool,
    pub natural_z: bool,
}

impl AdjointReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.bilinear && self.natural_x && self.natural_z
    }
}

/// Hom_C(x ⊗_B y, z), Hom_B(x, Hom_C(y, z)) and the map a between them.
pub struct AdjointSides {
    pub tensor: Bimodule,
    pub quotient: Quotient,
    pub lhs: Bimodule,
    pub lhs_data: HomData,
    pub inner: Bimodule,
    pub inner_data: HomData,
    pub rhs: Bimodule,
    pub rhs_data: HomData,
    /// a: lhs -> rhs, a(f)(ξ)(η) = f(ξ ⊗ η)
    pub a: Matrix,
}

fn single(b: &Bimodule) -> ChainComplex<Bimodule> {
    ChainComplex::concentrated(b.clone(), 0)
}

fn space(d: &HomData) -> &Subspace {
    &d.blocks[0][0].space
}

fn coords(d: &HomData, m: &Matrix) -> Result<Vec<u32>> {
    space(d).coords(m.data()).ok_or_else(|| Error::Violation("map is not in the Hom space".into()))
}

/// Matrix (on Hom coordinates) of a map F |-> g(F) between two Hom spaces.
fn induced(src: &HomData, tgt: &HomData, g: impl Fn(&Matrix) -> Result<Matrix>) -> Result<Matrix> {
    let f = space(src).field();
    let cols = space(src)
        .basis()
        .iter()
        .map(|v| {
            let b = &src.blocks[0][0];
            let m = Matrix::from_data(f, b.tgt_dim, b.src_dim, v.clone())?;
            coords(tgt, &g(&m)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(f, space(tgt).dim(), &cols))
}

impl AdjointSides {
    pub fn new(x: &Bimodule, y: &Bimodule, z: &Bimodule, budget: &Budget) -> Result<Self> {
        if !y.right().same_tables(z.right()) {
            return Err(Error::InvalidInput("y and z must share their right algebra".into()));
        }
        let f = x.field();
        let (t, q) = tensor_bimodules(x, y, budget)?;
        let (lc, lhs_data) = hom_right(&single(&t), &single(z), budget)?;
        let (hc, inner_data) = hom_right(&single(y), &single(z), budget)?;
        let (rc, rhs_data) = hom_right(&single(x), &hc, budget)?;
        let (lhs, inner, rhs) = (lc.terms()[0].clone(), hc.terms()[0].clone(), rc.terms()[0].clone());
        let yd = y.dim();
        let mut cols = Vec::with_capacity(lhs.dim());
        for v in space(&lhs_data).basis() {
            let fm = Matrix::from_data(f, z.dim(), t.dim(), v.clone())?;
            let mut g = Matrix::zeros(f, inner.dim(), x.dim());
            for u in 0..x.dim() {
                let gcols: Vec<Vec<u32>> = (0..yd)
                    .map(|w| {
                        let mut e = vec![0; x.dim() * yd];
                        e[u * yd + w] = 1;
                        fm.mul_vec(&q.project(&e)).expect("shape")
                    })
                    .collect();
                let gu = Matrix::from_columns(f, z.dim(), &gcols);
                let c = coords(&inner_data, &gu)?;
                for (r, val) in c.into_iter().enumerate() {
                    g.set(r, u, val);
                }
            }
            cols.push(coords(&rhs_data, &g)?);
        }
        let a = Matrix::from_columns(f, rhs.dim(), &cols);
        Ok(AdjointSides { tensor: t, quotient: q, lhs, lhs_data, inner, inner_data, rhs, rhs_data, a })
    }

    pub fn bijective(&self) -> bool {
        self.a.is_square() && self.a.inverse().is_some()
    }

    /// a commutes with the outer D- and A-actions.
    pub fn bilinear(&self) -> bool {
        let check = |l: &[Matrix], r: &[Matrix]| l.iter().zip(r).all(|(ml, mr)| self.a.mul(ml).ok() == mr.mul(&self.a).ok());
        check(self.lhs.lact(), self.rhs.lact()) && check(self.lhs.ract(), self.rhs.ract())
    }
}

/// Naturality of a in z along a bimodule map beta: z -> z2.
pub fn natural_in_z(x: &Bimodule, y: &Bimodule, z: &Bimodule, z2: &Bimodule, beta: &Matrix, budget: &Budget) -> Result<bool> {
    let s1 = AdjointSides::new(x, y, z, budget)?;
    let s2 = AdjointSides::new(x, y, z2, budget)?;
    let bl = induced(&s1.lhs_data, &s2.lhs_data, |m| beta.mul(m))?;
    let bh = induced(&s1.inner_data, &s2.inner_data, |m| beta.mul(m))?;
    let br = induced(&s1.rhs_data, &s2.rhs_data, |m| bh.mul(m))?;
    Ok(s2.a.mul(&bl)? == br.mul(&s1.a)?)
}

/// Naturality of a in x along a bimodule map alpha: x2 -> x.
pub fn natural_in_x(x: &Bimodule, x2: &Bimodule, y: &Bimodule, z: &Bimodule, alpha: &Matrix, budget: &Budget) -> Result<bool> {
    let s1 = AdjointSides::new(x, y, z, budget)?;
    let s2 = AdjointSides::new(x2, y, z, budget)?;
    let iy = Matrix::identity(x.field(), y.dim());
    let ax = map_kron(&s2.quotient, y.dim(), &s1.quotient, alpha, &iy);
    let al = induced(&s1.lhs_data, &s2.lhs_data, |m| m.mul(&ax))?;
    let ar = induced(&s1.rhs_data, &s2.rhs_data, |m| m.mul(alpha))?;
    Ok(s2.a.mul(&al)? == ar.mul(&s1.a)?)
}

/// Bimodule maps x -> y (both actions intertwined), as a subspace of
/// row-major matrices.
pub fn bimodule_maps(x: &Bimodule, y: &Bimodule, budget: &Budget) -> Result<Subspace> {
    let pairs: Vec<(&Matrix, &Matrix)> = x.lact().iter().zip(y.lact()).chain(x.ract().iter().zip(y.ract())).collect();
    intertwiners(x.field(), x.dim(), y.dim(), &pairs, budget)
}

pub fn random_map<R: Rng>(space: &Subspace, rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let p = space.field().p();
    let c: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..p)).collect();
    Matrix::from_data(space.field(), rows, cols, space.combine(&c)).expect("shape")
}

/// Smallest sub-bimodule containing v.
pub fn generated_sub(b: &Bimodule, v: &[u32]) -> Subspace {
    let mut s = Subspace::zero(b.field(), b.dim());
    let mut frontier = vec![v.to_vec()];
    while let Some(w) = frontier.pop() {
        if s.insert(&w) {
            for op in b.operators() {
                frontier.push(op.mul_vec(&w).expect("shape"));
            }
        }
    }
    s
}

/// A random bimodule of dimension in [1, max_dim]: the free bimodule, or a
/// cyclic sub-bimodule of it, or a quotient by one.
pub fn random_bimodule<R: Rng>(left: &AlgebraRef, right: &AlgebraRef, max_dim: usize, rng: &mut R) -> Bimodule {
    let free = Bimodule::free(left.clone(), right.clone(), 1);
    let p = free.field().p();
    for _ in 0..64 {
        let choice = rng.gen_range(0..3);
        if choice == 0 && free.dim() <= max_dim {
            return free;
        }
        let v: Vec<u32> = (0..free.dim()).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..p) } else { 0 }).collect();
        let sub = generated_sub(&free, &v);
        let cand = if choice == 1 { free.restrict_to(&sub).expect("sub-bimodule") } else { free.quotient_by(&Quotient::new(sub)) };
        if (1..=max_dim).contains(&cand.dim()) {
            return cand;
        }
    }
    let mut e = vec![0; free.dim()];
    e[free.dim() - 1] = 1;
    free.restrict_to(&generated_sub(&free, &e)).expect("sub-bimodule")
}

/// a(x, y, z) with bijectivity, bilinearity, and naturality along a random
/// endomorphism plus a random quotient of z and a random sub-bimodule of x.
pub fn adjoint_assoc_classical<R: Rng>(x: &Bimodule, y: &Bimodule, z: &Bimodule, rng: &mut R, budget: &Budget) -> Result<AdjointReport> {
    let sides = AdjointSides::new(x, y, z, budget)?;
    let mut natural_z = true;
    let endo_z = random_map(&bimodule_maps(z, z, budget)?, z.dim(), z.dim(), rng);
    natural_z &= natural_in_z(x, y, z, z, &endo_z, budget)?;
    let v: Vec<u32> = (0..z.dim()).map(|_| rng.gen_range(0..z.field().p())).collect();
    let q = Quotient::new(generated_sub(z, &v));
    let z2 = z.quotient_by(&q);
    natural_z &= natural_in_z(x, y, z, &z2, &q.projection(), budget)?;
    let mut natural_x = true;
    let endo_x = random_map(&bimodule_maps(x, x, budget)?, x.dim(), x.dim(), rng);
    natural_x &= natural_in_x(x, x, y, z, &endo_x, budget)?;
    let v: Vec<u32> = (0..x.dim()).map(|_| rng.gen_range(0..x.field().p())).collect();
    let sub = generated_sub(x, &v);
    let x2 = x.restrict_to(&sub).ok_or_else(|| Error::Violation("generated subspace is not a sub-bimodule".into()))?;
    natural_x &= natural_in_x(x, &x2, y, z, &sub.basis_matrix(), budget)?;
    Ok(AdjointReport {
        lhs_dim: sides.lhs.dim(),
        rhs_dim: sides.rhs.dim(),
        bijective: sides.bijective(),
        bilinear: sides.bilinear(),
        natural_x,
        natural_z,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AssociatorReport {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub well_defined: bool,
    pub bijective: bool,
    pub bilinear: bool,
    pub inverse_ok: bool,
}

impl AssociatorReport {
    pub fn passed(&self) -> bool {
        self.well_defined && self.bijective && self.bilinear && self.inverse_ok
    }
}

/// (w ⊗_A x) ⊗_B y -> w ⊗_A (x ⊗_B y) on coequalizer representatives.
pub fn tensor_associator(w: &Bimodule, x: &Bimodule, y: &Bimodule, budget: &Budget) -> Result<(Matrix, AssociatorReport)> {
    let f = w.field();
    let (wd, xd, yd) = (w.dim(), x.dim(), y.dim());
    let (wx, q1) = tensor_bimodules(w, x, budget)?;
    let (lhs, q2) = tensor_bimodules(&wx, y, budget)?;
    let (xy, q3) = tensor_bimodules(x, y, budget)?;
    let (rhs, q4) = tensor_bimodules(w, &xy, budget)?;
    let n = wd * xd * yd;
    budget.check(lhs.dim() + rhs.dim(), n)?;
    let unit = |len: usize, i: usize| {
        let mut e = vec![0; len];
        e[i] = 1;
        e
    };
    let kron = |a: &[u32], b: &[u32]| crate::algebra::kron_vec(f, a, b);
    let mut fl = Vec::with_capacity(n);
    let mut fr = Vec::with_capacity(n);
    for a in 0..wd {
        for b in 0..xd {
            for c in 0..yd {
                let wxv = q1.project(&unit(wd * xd, a * xd + b));
                fl.push(q2.project(&kron(&wxv, &unit(yd, c))));
                let xyv = q3.project(&unit(xd * yd, b * yd + c));
                fr.push(q4.project(&kron(&unit(wd, a), &xyv)));
            }
        }
    }
    let fl = Matrix::from_columns(f, lhs.dim(), &fl);
    let fr = Matrix::from_columns(f, rhs.dim(), &fr);
    let (rl, rr) = (fl.rank(), fr.rank());
    let both = Matrix::vstack(&[&fl, &fr])?.rank();
    let well_defined = rl == lhs.dim() && rr == rhs.dim() && both == rl && both == rr;
    // sections: LHS basis -> representative triple
    let sect = |q_outer: &Quotient, q_inner: &Quotient, inner_second: usize, left_inner: bool| -> Matrix {
        let cols: Vec<Vec<u32>> = q_outer
            .cols
            .iter()
            .map(|&c| {
                let mut e = vec![0; n];
                let (i, j) = (c / inner_second, c % inner_second);
                let (a, b, cc) = if left_inner {
                    // c = i * yd + j, i indexes wx basis
                    let ab = q_inner.cols[i];
                    (ab / xd, ab % xd, j)
                } else {
                    // c = i * dim(xy) + j, j indexes xy basis
                    let bc = q_inner.cols[j];
                    (i, bc / yd, bc % yd)
                };
                e[(a * xd + b) * yd + cc] = 1;
                e
            })
            .collect();
        Matrix::from_columns(f, n, &cols)
    };
    let sl = sect(&q2, &q1, yd, true);
    let sr = sect(&q4, &q3, xy.dim(), false);
    let phi = fr.mul(&sl)?;
    let psi = fl.mul(&sr)?;
    let bijective = phi.is_square() && phi.inverse().is_some();
    let inverse_ok = psi.mul(&phi)? == Matrix::identity(f, lhs.dim()) && phi.mul(&psi)? == Matrix::identity(f, rhs.dim());
    let bil = |l: &[Matrix], r: &[Matrix]| l.iter().zip(r).all(|(ml, mr)| phi.mul(ml).ok() == mr.mul(&phi).ok());
    let bilinear = bil(lhs.lact(), rhs.lact()) && bil(lhs.ract(), rhs.ract());
    let report = AssociatorReport { lhs_dim: lhs.dim(), rhs_dim: rhs.dim(), well_defined, bijective, bilinear, inverse_ok };
    Ok((phi, report))
}

fn env_of(b: &Bimodule) -> Result<AlgebraRef> {
    Ok(Arc::new(b.enveloping()?))
}

/// Graded dims of Ext_{A⊗C^op}(x ⊗^L_B y, z) and Ext_{A⊗B^op}(x, RHom_C(y, z)).
pub fn ext_adjoint_assoc_check(x: &Bimodule, y: &Bimodule, z: &Bimodule, opts: &DerivedOpts) -> Result<PairedDims> {
    if !x.right().same_tables(y.left()) || !x.left().same_tables(z.left()) || !y.right().same_tables(z.right()) {
        return Err(Error::InvalidInput("expected x in A-B, y in B-C, z in A-C".into()));
    }
    let budget = &opts.budget;
    let length = opts.length.unwrap_or_else(|| default_length(opts.window));
    let inner = DerivedOpts { length: None, ..*opts };
    let env_ab = env_of(x)?;
    let env_bc = env_of(y)?;
    let env_ac = env_of(z)?;
    let x_mod = x.to_module(env_ab.clone())?;
    let z_mod = z.to_module(env_ac.clone())?;
    // left: resolve x, tensor with y, cut to the valid range, Ext into z
    let rx = free_resolution(&x_mod, length, budget)?;
    let px = rx.free.to_complex(budget)?.map_terms(|m| Bimodule::from_module(x.left().clone(), x.right().clone(), m))?;
    let t = tensor_complex(&px, &single(y), budget)?.complex.trunc_ge(rx.tor_valid_from(0))?;
    let t_mod = t.map_terms(|b| b.to_module(env_ac.clone()))?;
    let lhs = rhom_complex(&t_mod, &single(&Bimodule::from_left(&z_mod)), &inner)?.dims;
    // right: resolve y, Hom into z, cut, Ext from x
    let ry = free_resolution(&y.to_module(env_bc.clone())?, length, budget)?;
    let py = ry.free.to_complex(budget)?.map_terms(|m| Bimodule::from_module(y.left().clone(), y.right().clone(), m))?;
    let (h, _) = hom_right(&py, &single(z), budget)?;
    let h = h.trunc_le(ry.ext_valid_upto(0))?;
    let h_mod = h.map_terms(|b| Ok(Bimodule::from_left(&b.to_module(env_ab.clone())?)))?;
    let rhs = rhom_complex(&ChainComplex::concentrated(x_mod, 0), &h_mod, &inner)?.dims;
    Ok(PairedDims::new(lhs, rhs))
}

/// One triple of the classical grid: algebra indices (A, B, C, D), bimodule
/// dims (w, x, y, z), and both reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridItem {
    pub algebras: [usize; 4],
    pub dims: [usize; 4],
    pub adjoint: AdjointReport,
    pub associator: AssociatorReport,
}

impl GridItem {
    pub fn passed(&self) -> bool {
        self.adjoint.passed() && self.associator.passed()
    }
}

/// Seeded grid for a(x, y, z) and the associator on (w, x, y), with
/// x: A-B, y: B-C, z: D-C, w: D-A.
pub fn classical_grid(algebras: &[AlgebraRef], triples: usize, seed: u64, max_dim: usize, budget: &Budget) -> Result<Vec<GridItem>> {
    use rand::SeedableRng;
    if algebras.is_empty() {
        return Err(Error::InvalidInput("grid needs at least one algebra".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..triples)
        .map(|_| {
            let ix: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..algebras.len()));
            let [a, b, c, d] = ix.map(|i| algebras[i].clone());
            let x = random_bimodule(&a, &b, max_dim, &mut rng);
            let y = random_bimodule(&b, &c, max_dim, &mut rng);
            let z = random_bimodule(&d, &c, max_dim, &mut rng);
            let w = random_bimodule(&d, &a, max_dim, &mut rng);
            let adjoint = adjoint_assoc_classical(&x, &y, &z, &mut rng, budget)?;
            let (_, associator) = tensor_associator(&w, &x, &y, budget)?;
            Ok(GridItem { algebras: ix, dims: [w.dim(), x.dim(), y.dim(), z.dim()], adjoint, associator })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtGridItem {
    /// indices of A in `lefts`, B and C in `middles`
    pub algebras: [usize; 3],
    pub dims: [usize; 3],
    /// y = B, C = B
    pub unit: bool,
    pub ext: PairedDims,
}

/// Seeded grid for the Ext-level adjunction; every third triple is the
/// unit case y = B.
pub fn ext_grid(
    lefts: &[AlgebraRef],
    middles: &[AlgebraRef],
    triples: usize,
    seed: u64,
    max_dim: usize,
    opts: &DerivedOpts,
) -> Result<Vec<ExtGridItem>> {
    use rand::SeedableRng;
    if lefts.is_empty() || middles.is_empty() {
        return Err(Error::InvalidInput("grid needs algebras".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..triples)
        .map(|t| {
            let ia = rng.gen_range(0..lefts.len());
            let ib = rng.gen_range(0..middles.len());
            let unit = t % 3 == 0;
            let ic = if unit { ib } else { rng.gen_range(0..middles.len()) };
            let (a, b, c) = (&lefts[ia], &middles[ib], &middles[ic]);
            let x = random_bimodule(a, b, max_dim, &mut rng);
            let y = if unit { Bimodule::regular(b.clone()) } else { random_bimodule(b, c, max_dim, &mut rng) };
            let z = random_bimodule(a, c, max_dim, &mut rng);
            let ext = ext_adjoint_assoc_check(&x, &y, &z, opts)?;
            Ok(ExtGridItem { algebras: [ia, ib, ic], dims: [x.dim(), y.dim(), z.dim()], unit, ext })
        })
        .collect()
}
