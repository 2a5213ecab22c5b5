//! Finite truncated simplicial sets: nerves, horns, quasi-category checks,
//! homotopy categories, cones and colimits, and a truncated dg-nerve.

mod category;
mod colimit;
mod construct;
mod dgnerve;
mod hcat;
mod horn;
mod sset;

pub use category::{category_zoo, CategoryViolation, FinCategory, Morphism};
pub use colimit::{colimit_in_nerve, extend_to_cone, poset_diagram, Cocone, ColimitResult};
pub use construct::{
    boundary, cone, cone_with_keys, construct_simplicial, disjoint_union, horn, nerve, opposite, standard, Chain, ConeSimplex, Construct,
    Nerve, DEFAULT_TOP,
};
pub use dgnerve::{dg_nerve_trunc, DgNerve, DgSimplex};
pub use hcat::{check_relation, homotopy_category, homotopy_category_with, homotopy_pairs, HomotopyCategory, RelationCheck};
pub use horn::{enumerate_horns, filler_counts, horn_extensions, inner_kan_check, inner_kan_check_with, HornMap, KanReport};
pub use sset::{validate_simplicial, FinSimplicialSet, SimplicialJson, SimplicialMap, SimplicialViolation};
