//! Free resolutions: the cone-based kernel-cover engine and the bar
//! construction.

mod bar;
mod cone;
mod free;

pub use bar::bar_resolution;
pub use cone::{free_resolution, resolve_complex, Resolution};
pub use free::{hom_from_free, tensor_free, FreeComplex, TMatrix};
