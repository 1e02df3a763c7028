//! Graph embeddings in surfaces and relative chromatic numbers.
//!
//! Embeddings are signed rotation systems; faces come from boundary walks and
//! the closed surface from V − E + F plus orientability. A proper embedding
//! into Σ_p is certified by `p` removed faces covering every vertex.

mod certificate;
mod coloring;
mod rotation;
pub mod search;
mod surface;

pub use certificate::{verify_proper, CertificateReport, Claims, EmbeddingCertificate};
pub use coloring::{color_on_surface, complete_adjacency, greedy_color, is_proper_coloring, Coloring};
pub use rotation::{is_orientable, trace_faces, Face, RotationSystem};
pub use surface::{
    chr0_bounds, chr0_exact, chr0_known, chr_closed, classify_surface, coloring_constant, min_degree_bound,
    SurfaceSignature,
};
