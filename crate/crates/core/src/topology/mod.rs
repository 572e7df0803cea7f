//! Simplicial homology over prime fields, h-profiles and Euler integrals.

mod complex;
mod constructible;
mod field;
mod homology;
pub mod micro;
mod profile;

pub use complex::SimplicialComplex;
pub use constructible::{assemble_constructible, euler_integral, ConstructibleFunction};
pub use field::{is_prime, Fp, MAX_PRIME};
pub use homology::{homology_dims, image_rank};
pub use profile::{betti_full, h_profile, h_profiles, induced_subcomplex, CellStatus, HProfile};
