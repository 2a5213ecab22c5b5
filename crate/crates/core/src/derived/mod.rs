//! Derived functors, Hochschild (co)homology, the relative dualizing
//! module, the reduction isomorphisms, and adjoint associativity.

mod adjunction;
mod dualizing;
mod functors;
mod hochschild;
mod reduction;

pub use adjunction::{
    adjoint_assoc_classical, bimodule_maps, classical_grid, ext_adjoint_assoc_check, ext_grid, generated_sub, natural_in_x, natural_in_z,
    random_bimodule, random_map, tensor_associator, AdjointReport, AdjointSides, AssociatorReport, ExtGridItem, GridItem,
};
pub use dualizing::{dualizing_complex, dualizing_module, dualizing_oracle, find_iso_to_regular, Dualizing};
pub use functors::{default_length, ltensor, ltensor_complex, rhom, rhom_complex, Derived, DerivedOpts, Engine, Window};
pub use hochschild::{env_regular, hochschild_cohomology, hochschild_homology, SetupSigma};
pub use reduction::{dual_complex, named_module, reduction_check, Mode, PairedDims};
