//! P1 finite elements for the Steklov and Steklov–Neumann eigenproblems
//!
//! ```text
//!   div(γ ∇u) = 0         in Ω
//!   γ ∂u/∂ν   = σ ρ u     on the Steklov boundary
//!   ∂u/∂ν     = 0         on the Neumann boundary
//! ```
//!
//! with piecewise-constant γ (per triangle) and ρ (per boundary edge). The
//! pencil is reduced to the Steklov vertices by a Schur complement of the
//! stiffness matrix, which is the discrete Dirichlet-to-Neumann operator.

mod assemble;
mod cluster;
mod dtn;
mod solve;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{Marker, Mesh};

pub use assemble::{assemble_boundary_mass, assemble_stiffness, element_stiffness, to_dense};
pub use cluster::{cluster_multiplicities, Cluster, DEFAULT_REL_TOL};
pub use dtn::{dtn_reduce, DtnOperator};
pub use solve::{full_pencil_spectrum, solve_steklov, solve_steklov_neumann, SpectrumResult};

/// Conductivity per triangle and boundary density per boundary edge, in mesh
/// order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub gamma: Vec<f64>,
    pub rho: Vec<f64>,
}

impl DensitySpec {
    /// γ ≡ 1, ρ ≡ 1.
    pub fn uniform(mesh: &Mesh) -> Self {
        Self { gamma: vec![1.0; mesh.num_triangles()], rho: vec![1.0; mesh.boundary().len()] }
    }

    pub fn scaled(&self, gamma_factor: f64, rho_factor: f64) -> Self {
        Self {
            gamma: self.gamma.iter().map(|g| g * gamma_factor).collect(),
            rho: self.rho.iter().map(|r| r * rho_factor).collect(),
        }
    }

    /// Densities on `refine_uniform(mesh)`: each triangle hands γ to its four
    /// children, each boundary edge hands ρ to its two halves.
    pub fn refined(&self) -> Self {
        Self {
            gamma: self.gamma.iter().flat_map(|&g| [g; 4]).collect(),
            rho: self.rho.iter().flat_map(|&r| [r; 2]).collect(),
        }
    }

    /// Checks lengths and positivity. With `all_steklov` every boundary edge
    /// is treated as Steklov regardless of its marker.
    pub fn validate(&self, mesh: &Mesh, all_steklov: bool) -> Result<()> {
        if self.gamma.len() != mesh.num_triangles() {
            return Err(Error::InvalidDensity(format!(
                "{} gamma values for {} triangles",
                self.gamma.len(),
                mesh.num_triangles()
            )));
        }
        if self.rho.len() != mesh.boundary().len() {
            return Err(Error::InvalidDensity(format!(
                "{} rho values for {} boundary edges",
                self.rho.len(),
                mesh.boundary().len()
            )));
        }
        if let Some(t) = self.gamma.iter().position(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(Error::InvalidDensity(format!("gamma[{t}] = {} is not positive", self.gamma[t])));
        }
        for (k, (r, e)) in self.rho.iter().zip(mesh.boundary()).enumerate() {
            let steklov = all_steklov || e.marker == Marker::Steklov;
            if !r.is_finite() || *r < 0.0 || (steklov && *r == 0.0) {
                return Err(Error::InvalidDensity(format!(
                    "rho[{k}] = {r} on a {} edge",
                    if steklov { "Steklov" } else { "Neumann" }
                )));
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
