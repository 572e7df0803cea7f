//! Simulation and verification of Gromov–Hausdorff collapse for surfaces
//! with curvature bounded below by −1.
//!
//! The crate is organised bottom-up:
//!
//! * [`hyperbolic`]: exact geometry of H² and H³ (hyperboloid model with a
//!   Klein-chart interface), nearest-point projections, Fermi coordinates,
//!   point reflections and comparison angles.
//! * [`surfaces`]: generators for the collapsing families (tube spheres and
//!   their projective-plane quotients, flat tori and Klein bottles, doubled
//!   polygons), finite group quotients and a curvature spot check.
//! * [`gh`]: coupling metrics on the disjoint union of a surface and its
//!   limit, Hausdorff measurements, metric balls and small exact
//!   Gromov–Hausdorff oracles.
//! * [`topology`]: simplicial homology over prime fields, image ranks of
//!   inclusion-induced maps, two-scale profiles `h^a`, constructible
//!   functions and Euler-characteristic integration.
//!
//! Data-parallel loops go through [`exec::Exec`]; with the `parallel`
//! feature (default) they run on rayon, otherwise sequentially.

pub mod error;
pub mod exec;
pub mod gh;
pub mod hyperbolic;
pub mod surfaces;
pub mod topology;

pub use error::{Error, Result};
pub use exec::Exec;
