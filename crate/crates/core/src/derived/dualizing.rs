use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix};
use crate::modcx::{hom_space, GradedDims, Module, Term};

use super::functors::DerivedOpts;
use super::hochschild::{hochschild_homology, SetupSigma};

/// D^σ = Hom_R(S, R) with (s·f)(t) = f(t s).
#[derive(Debug, Clone)]
pub struct Dualizing {
    pub module: Module,
    /// homology of S ⊗^L_{S^e} Hom_R(S, S) on the window
    pub oracle: GradedDims,
    /// an S-linear bijection S -> D^σ (image of 1, matrix), when one exists
    pub iso: Option<(Vec<u32>, Matrix)>,
}

impl Dualizing {
    /// Oracle homology is concentrated in degree 0 with the dimension of D.
    pub fn oracle_agrees(&self) -> bool {
        self.oracle.is_concentrated_in(0) && self.oracle.get(0) == self.module.dim()
    }
}

pub fn dualizing_module(setup: &SetupSigma, budget: &Budget) -> Result<Module> {
    let s = setup.s();
    let r = setup.r();
    let f = s.field();
    let s_over_r = Module::regular(s.clone()).restrict_along(&setup.env.cert.map)?;
    let r_reg = Module::regular(r.clone());
    let space = hom_space(&s_over_r, &r_reg, budget)?;
    let act = (0..s.dim())
        .map(|i| {
            let rs = s.right_mult(&s.basis_vector(i));
            let cols: Vec<Vec<u32>> = space
                .basis()
                .iter()
                .map(|v| {
                    let fm = Matrix::from_data(f, r.dim(), s.dim(), v.clone()).expect("shape");
                    let g = fm.mul(&rs).expect("shape");
                    space.coords(g.data()).expect("Hom_R(S, R) is stable under S")
                })
                .collect();
            Matrix::from_columns(f, space.dim(), &cols)
        })
        .collect();
    Ok(Module::new(s.clone(), space.dim(), act)?)
}

/// S ⊗^L_{S^e} Hom_R(S, S): the tensor expression D^σ should agree with.
pub fn dualizing_oracle(setup: &SetupSigma, opts: &DerivedOpts) -> Result<GradedDims> {
    let s = Module::regular(setup.s().clone());
    let x = setup.hom_over_r(&s, &s, &opts.budget)?;
    Ok(hochschild_homology(setup, &x, opts)?.dims)
}

fn iso_from(d: &Module, v: &[u32]) -> Option<Matrix> {
    let cols: Vec<Vec<u32>> = d.action().iter().map(|a| a.mul_vec(v).expect("shape")).collect();
    let m = Matrix::from_columns(d.field(), d.dim(), &cols);
    (m.is_square() && m.rank() == d.dim()).then_some(m)
}

/// Search for d in D with s |-> s·d bijective: basis vectors, then seeded
/// random vectors, then exhaustive enumeration when D is small.
pub fn find_iso_to_regular(d: &Module) -> Option<(Vec<u32>, Matrix)> {
    let n = d.dim();
    if n != d.algebra().dim() {
        return None;
    }
    let p = d.field().p();
    let mut candidates: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    candidates.push(vec![1; n]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..64 {
        candidates.push((0..n).map(|_| rng.gen_range(0..p)).collect());
    }
    for v in &candidates {
        if let Some(m) = iso_from(d, v) {
            return Some((v.clone(), m));
        }
    }
    let total = (p as u64).checked_pow(n as u32)?;
    if total > 1 << 20 {
        return None;
    }
    for mut k in 0..total {
        let v: Vec<u32> = (0..n)
            .map(|_| {
                let x = (k % p as u64) as u32;
                k /= p as u64;
                x
            })
            .collect();
        if let Some(m) = iso_from(d, &v) {
            return Some((v, m));
        }
    }
    None
}

pub fn dualizing_complex(setup: &SetupSigma, opts: &DerivedOpts) -> Result<Dualizing> {
    let module = dualizing_module(setup, &opts.budget)?;
    if module.dim() != setup.s().dim() {
        return Err(Error::Violation(format!(
            "Hom_R(S, R) has dimension {} but S is free of rank {} over R of dimension {}",
            module.dim(),
            setup.env.cert.rank(),
            setup.r().dim()
        )));
    }
    let oracle = dualizing_oracle(setup, opts)?;
    let iso = find_iso_to_regular(&module);
    Ok(Dualizing { module, oracle, iso })
}
