//! Numerical and combinatorial laboratory for Steklov eigenvalue multiplicity.
//!
//! - [`mesh`]: planar triangulations of disks with holes, rectangles and
//!   arbitrary polygonal loops, with Steklov/Neumann boundary tags.
//! - [`fem`]: P1 assembly, the discrete Dirichlet-to-Neumann operator and the
//!   Steklov / Steklov–Neumann eigensolvers with densities.
//! - [`nodal`]: nodal domains of discrete eigenfunctions, Courant and
//!   boundary-contact checks.
//! - [`graph`]: weighted graph Laplacians and Schrödinger pencils.
//! - [`tubular`]: thin-strip neighbourhoods of planar graphs and the
//!   convergence of their low spectrum to the graph spectrum.
//! - [`chromatic`]: rotation systems, surface classification, Heawood-type
//!   bounds, relative chromatic numbers and embedding certificates.

pub mod chromatic;
pub mod error;
pub mod fem;
pub mod graph;
pub mod linalg;
pub mod mesh;
pub mod nodal;
pub mod tubular;

pub use error::{Error, Result};
