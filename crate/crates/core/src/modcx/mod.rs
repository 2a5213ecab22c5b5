//! Modules, bimodules, bounded complexes, Hom and tensor complexes.

mod complex;
mod hom;
mod homotopy;
mod module;
mod tensor;

pub use complex::{homology_dims, ChainComplex, ChainMap, ComplexJson, GradedDims};
pub use hom::{
    hom_complex, hom_complex_with, hom_left, hom_raw, hom_right, hom_space, intertwiners, HomBlock, HomComplex, HomData, OuterOp,
};
pub use homotopy::{chain_homotopic, chain_homotopic_with, Homotopy};
pub use module::{as_bimodule_module, element_action, validate_module, AlgebraSpec, Bimodule, Module, ModuleJson, ModuleViolation, Term};
pub use tensor::{balancing_relations, map_kron, tensor_bimodules, tensor_complex, tensor_over, TensorBlock, TensorComplex};
