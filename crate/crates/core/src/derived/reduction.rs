use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modcx::{Bimodule, ChainComplex, GradedDims, Module};
use crate::resolve::{free_resolution, hom_from_free};

use super::dualizing::dualizing_module;
use super::functors::{default_length, ltensor_complex, rhom_complex, DerivedOpts};
use super::hochschild::{hochschild_cohomology, hochschild_homology, SetupSigma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Co,
    Ho,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Co => "co",
            Mode::Ho => "ho",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "co" => Ok(Mode::Co),
            "ho" => Ok(Mode::Ho),
            _ => Err(Error::InvalidInput(format!("unknown mode '{s}' (expected co or ho)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedDims {
    pub lhs: GradedDims,
    pub rhs: GradedDims,
    pub equal: bool,
}

impl PairedDims {
    pub fn new(lhs: GradedDims, rhs: GradedDims) -> Self {
        let equal = lhs == rhs;
        PairedDims { lhs, rhs, equal }
    }
}

/// RHom_S(M, D^σ) as a complex of S-modules, cut at its last valid degree.
pub fn dual_complex(setup: &SetupSigma, m: &Module, opts: &DerivedOpts) -> Result<ChainComplex<Module>> {
    let d = dualizing_module(setup, &opts.budget)?;
    let length = opts.length.unwrap_or_else(|| default_length(opts.window));
    let res = free_resolution(m, length, &opts.budget)?;
    let dsym = Bimodule::symmetric(&d)?;
    let h = hom_from_free(&res.free, &ChainComplex::concentrated(dsym, 0), &opts.budget)?;
    let h = h.map_terms(|b| b.right_as_left())?;
    h.trunc_le(res.ext_valid_upto(0))
}

/// Both sides of the reduction isomorphisms, as graded dimensions:
/// co: Ext_{S^e}(S, M ⊗_R N) vs Ext_S(RHom_S(M, D^σ), N);
/// ho: Tor^{S^e}(S, Hom_R(M, N)) vs Tor^S(RHom_S(M, D^σ), N).
pub fn reduction_check(mode: Mode, setup: &SetupSigma, m: &Module, n: &Module, opts: &DerivedOpts) -> Result<PairedDims> {
    let s = setup.s();
    if !m.algebra().same_tables(s) || !n.algebra().same_tables(s) {
        return Err(Error::InvalidInput("M and N must be S-modules".into()));
    }
    if setup.certify_r_free(m).is_none() {
        return Err(Error::PreconditionUnverified("M is not certified free over R".into()));
    }
    let dual = dual_complex(setup, m, opts)?;
    let n_c = ChainComplex::concentrated(Bimodule::from_left(n), 0);
    // the second resolution is of a complex, so let it pick its own length
    let inner = DerivedOpts { length: None, ..*opts };
    match mode {
        Mode::Co => {
            let x = setup.tensor_over_r(m, n, &opts.budget)?;
            let lhs = hochschild_cohomology(setup, &x, opts)?.dims;
            let rhs = rhom_complex(&dual, &n_c, &inner)?.dims;
            Ok(PairedDims::new(lhs, rhs))
        }
        Mode::Ho => {
            let x = setup.hom_over_r(m, n, &opts.budget)?;
            let lhs = hochschild_homology(setup, &x, opts)?.dims;
            let rhs = ltensor_complex(&dual, &n_c, &inner)?.dims;
            Ok(PairedDims::new(lhs, rhs))
        }
    }
}

/// Residue module of S through its augmentation, or the regular module.
pub fn named_module(setup: &SetupSigma, name: &str) -> Result<Module> {
    match name {
        "S" | "s" => Ok(Module::regular(setup.s().clone())),
        "k" => Module::residue(setup.s().clone()),
        _ => Err(Error::InvalidInput(format!("unknown module '{name}' (expected S or k)"))),
    }
}
