use serde::{Deserialize, Serialize};

use crate::algebra::FreeBasisCert;
use crate::error::{Error, Result};
use crate::exactla::Budget;
use crate::modcx::{Bimodule, ChainComplex, GradedDims, Module};
use crate::resolve::{bar_resolution, hom_from_free, resolve_complex, tensor_free, Resolution};

/// Closed degree window [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
}

impl Window {
    pub const fn new(lo: i32, hi: i32) -> Self {
        Window { lo, hi }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -4, hi: 4 }
    }
}

/// Which resolution feeds a derived functor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    KernelCover,
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DerivedOpts {
    pub window: Window,
    /// resolution length; `None` picks the smallest length valid on the window
    pub length: Option<usize>,
    pub engine: Engine,
    pub budget: Budget,
}

impl Default for DerivedOpts {
    fn default() -> Self {
        DerivedOpts { window: Window::default(), length: None, engine: Engine::KernelCover, budget: Budget::from_env() }
    }
}

impl DerivedOpts {
    pub fn window(lo: i32, hi: i32) -> Self {
        DerivedOpts { window: Window::new(lo, hi), ..Default::default() }
    }
    pub fn with_length(mut self, l: usize) -> Self {
        self.length = Some(l);
        self
    }
    pub fn with_engine(mut self, e: Engine) -> Self {
        self.engine = e;
        self
    }
    pub fn with_budget(mut self, b: Budget) -> Self {
        self.budget = b;
        self
    }
}

/// Length rule for module inputs: window top + 2.
pub fn default_length(w: Window) -> usize {
    (w.hi.max(0) + 2) as usize
}

fn pick_length(opts: &DerivedOpts, needed: i32) -> Result<usize> {
    let needed = needed.max(0) as usize;
    match opts.length {
        Some(l) if l < needed => Err(Error::InvalidInput(format!(
            "resolution length {l} is too short for window [{}, {}] (need {needed})",
            opts.window.lo, opts.window.hi
        ))),
        Some(l) => Ok(l),
        None => Ok(needed.max(default_length(opts.window))),
    }
}

/// A derived functor value: the complex, its homology on the window, and
/// the generator counts of the resolution used.
#[derive(Debug, Clone)]
pub struct Derived {
    pub complex: ChainComplex<Bimodule>,
    pub dims: GradedDims,
    pub ranks: Vec<usize>,
}

fn resolve(c: &ChainComplex<Module>, length: usize, opts: &DerivedOpts) -> Result<Resolution> {
    match opts.engine {
        Engine::KernelCover => resolve_complex(c, length, &opts.budget),
        Engine::Bar => {
            if c.terms().len() != 1 || c.lo() != 0 {
                return Err(Error::Unsupported("bar resolution of a complex".into()));
            }
            let m = &c.terms()[0];
            let cert = FreeBasisCert::over_ground(m.algebra().clone())?;
            bar_resolution(&cert, m, length, &opts.budget)
        }
    }
}

/// RHom_B(C, N) for a bounded complex C of B-modules and a complex N of
/// B-Q bimodules; H^j on the window.
pub fn rhom_complex(c: &ChainComplex<Module>, n: &ChainComplex<Bimodule>, opts: &DerivedOpts) -> Result<Derived> {
    let needed = c.lo() - n.lo() + opts.window.hi + 1;
    let length = pick_length(opts, needed)?;
    let res = resolve(c, length, opts)?;
    let complex = hom_from_free(&res.free, n, &opts.budget)?;
    let dims = complex.homology_dims(opts.window.lo, opts.window.hi);
    Ok(Derived { complex, dims, ranks: res.free.ranks().to_vec() })
}

/// C ⊗^L_B N for a complex C of right B-modules (given over B^op) and a
/// complex N of B-Q bimodules; the outer Q-action is kept.
pub fn ltensor_complex(c: &ChainComplex<Module>, n: &ChainComplex<Bimodule>, opts: &DerivedOpts) -> Result<Derived> {
    let needed = c.lo() + n.hi() + 1 - opts.window.lo;
    let length = pick_length(opts, needed)?;
    let res = resolve(c, length, opts)?;
    let complex = tensor_free(&res.free, n, &opts.budget)?;
    let dims = complex.homology_dims(opts.window.lo, opts.window.hi);
    Ok(Derived { complex, dims, ranks: res.free.ranks().to_vec() })
}

/// Ext^*_B(M, N) for modules.
pub fn rhom(m: &Module, n: &Module, opts: &DerivedOpts) -> Result<Derived> {
    if !m.algebra().same_tables(n.algebra()) {
        return Err(Error::InvalidInput("Ext between modules over different algebras".into()));
    }
    rhom_complex(&ChainComplex::concentrated(m.clone(), 0), &ChainComplex::concentrated(Bimodule::from_left(n), 0), opts)
}

/// Tor^B_*(M, N) for a right module M (a module over B^op; for commutative
/// B a B-module) and a left module N, in cohomological degrees.
pub fn ltensor(m: &Module, n: &Module, opts: &DerivedOpts) -> Result<Derived> {
    ltensor_complex(&ChainComplex::concentrated(m.clone(), 0), &ChainComplex::concentrated(Bimodule::from_left(n), 0), opts)
}
