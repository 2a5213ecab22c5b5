use std::sync::Arc;

use crate::algebra::{AlgebraRef, Enveloping, FreeBasisCert};
use crate::error::{Error, Result};
use crate::exactla::{Budget, Matrix};
use crate::modcx::{tensor_bimodules, Bimodule, ChainComplex, Module, Term};

use super::functors::{ltensor_complex, rhom_complex, Derived, DerivedOpts};

/// σ: R -> S finite free, with S^e = S ⊗_R S and S as an S^e-module via μ.
#[derive(Debug, Clone)]
pub struct SetupSigma {
    pub env: Enveloping,
    pub s_module: Module,
}

impl SetupSigma {
    pub fn new(cert: FreeBasisCert) -> Result<Self> {
        let env = Enveloping::new(cert)?;
        let s_module = Module::regular(env.algebra().clone()).restrict_along(&env.mult)?;
        Ok(SetupSigma { env, s_module })
    }

    /// R = k.
    pub fn over_ground(s: AlgebraRef) -> Result<Self> {
        Self::new(FreeBasisCert::over_ground(s)?)
    }

    pub fn s(&self) -> &AlgebraRef {
        self.env.algebra()
    }
    pub fn r(&self) -> &AlgebraRef {
        self.env.base()
    }
    pub fn env_algebra(&self) -> &AlgebraRef {
        &self.env.env
    }
    pub fn base_is_ground(&self) -> bool {
        self.env.cert.base_is_ground()
    }

    fn sigma_action(&self, m: &Module) -> Vec<Matrix> {
        let r = self.r();
        (0..r.dim()).map(|a| m.act_elem(&self.env.cert.map.apply(&r.basis_vector(a)))).collect()
    }

    /// An S-module as an R-S bimodule (R through σ).
    pub fn as_r_s(&self, m: &Module) -> Bimodule {
        Bimodule::new_unchecked(self.r().clone(), self.s().clone(), m.dim(), self.sigma_action(m), m.action().to_vec())
    }

    /// An S-module as an S-R bimodule (R through σ).
    pub fn as_s_r(&self, m: &Module) -> Bimodule {
        Bimodule::new_unchecked(self.s().clone(), self.r().clone(), m.dim(), m.action().to_vec(), self.sigma_action(m))
    }

    /// The S^e-module of an R-balanced S-S bimodule: π(Σ c_ij s_i ⊗ s_j)
    /// acts by Σ c_ij L(s_i) R(s_j).
    pub fn to_env_module(&self, b: &Bimodule) -> Result<Module> {
        let s = self.s();
        if !b.left().same_tables(s) || !b.right().same_tables(s) {
            return Err(Error::InvalidInput("expected an S-S bimodule".into()));
        }
        let n = s.dim();
        let f = s.field();
        let reps = &self.env.reps;
        let act = (0..reps.cols())
            .map(|alpha| {
                let mut m = Matrix::zeros(f, b.dim(), b.dim());
                for i in 0..n {
                    for j in 0..n {
                        let c = reps.get(i * n + j, alpha);
                        if c != 0 {
                            m.add_scaled(&b.lact()[i].mul(&b.ract()[j]).expect("square"), c);
                        }
                    }
                }
                m
            })
            .collect();
        Module::new(self.env_algebra().clone(), b.dim(), act).map_err(|v| Error::Violation(format!("bimodule is not R-balanced: {v}")))
    }

    /// M ⊗_R N as an S^e-module.
    pub fn tensor_over_r(&self, m: &Module, n: &Module, budget: &Budget) -> Result<Module> {
        let (t, _) = tensor_bimodules(&self.as_s_r(m), &self.as_r_s(n), budget)?;
        self.to_env_module(&t)
    }

    /// Hom_R(M, N) as an S^e-module: s ⊗ s' acts by f |-> s' f(s ·)
    /// (left factor precomposes, right factor postcomposes).
    pub fn hom_over_r(&self, m: &Module, n: &Module, budget: &Budget) -> Result<Module> {
        let x = ChainComplex::concentrated(self.as_r_s(m), 0);
        let y = ChainComplex::concentrated(self.as_r_s(n), 0);
        let (h, _) = crate::modcx::hom_left(&x, &y, budget)?;
        self.to_env_module(&h.terms()[0])
    }

    /// Whether an S-module is free over R, with a witness basis.
    pub fn certify_r_free(&self, m: &Module) -> Option<Vec<Vec<u32>>> {
        if self.base_is_ground() {
            return Some(
                (0..m.dim())
                    .map(|i| {
                        let mut v = vec![0; m.dim()];
                        v[i] = 1;
                        v
                    })
                    .collect(),
            );
        }
        let r = self.r();
        let f = r.field();
        let acts = self.sigma_action(m);
        let nil = r.nilpotent_basis();
        let mut rad = crate::exactla::Subspace::zero(f, m.dim());
        for &b in &nil {
            for col in acts[b].columns() {
                rad.insert(&col);
            }
        }
        let mut gens = Vec::new();
        for i in 0..m.dim() {
            let mut e = vec![0; m.dim()];
            e[i] = 1;
            if rad.insert(&e) {
                gens.push(e);
            }
        }
        // evaluation R^n -> M must be bijective
        let cols: Vec<Vec<u32>> = gens.iter().flat_map(|g| acts.iter().map(move |a| a.mul_vec(g).expect("shape"))).collect();
        let ev = Matrix::from_columns(f, m.dim(), &cols);
        (ev.is_square() && ev.rank() == m.dim()).then_some(gens)
    }
}

/// HH^*(σ; X) = Ext_{S^e}(S, X).
pub fn hochschild_cohomology(setup: &SetupSigma, x: &Module, opts: &DerivedOpts) -> Result<Derived> {
    check_env(setup, x)?;
    rhom_complex(&ChainComplex::concentrated(setup.s_module.clone(), 0), &ChainComplex::concentrated(Bimodule::from_left(x), 0), opts)
}

/// HH_*(σ; X) = Tor^{S^e}(S, X), in cohomological (non-positive) degrees.
pub fn hochschild_homology(setup: &SetupSigma, x: &Module, opts: &DerivedOpts) -> Result<Derived> {
    check_env(setup, x)?;
    // S^e is commutative here, so S is its own opposite module
    ltensor_complex(&ChainComplex::concentrated(setup.s_module.clone(), 0), &ChainComplex::concentrated(Bimodule::from_left(x), 0), opts)
}

fn check_env(setup: &SetupSigma, x: &Module) -> Result<()> {
    if !x.algebra().same_tables(setup.env_algebra()) {
        return Err(Error::InvalidInput("coefficients must be an S^e-module".into()));
    }
    Ok(())
}

/// The S^e-module S^e itself.
pub fn env_regular(setup: &SetupSigma) -> Module {
    Module::regular(Arc::clone(setup.env_algebra()))
}
