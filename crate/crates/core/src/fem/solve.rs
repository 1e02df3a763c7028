use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::assemble::{assemble_stiffness, boundary_mass, to_dense};
use super::cluster::{cluster_multiplicities, cluster_of, Cluster, DEFAULT_REL_TOL};
use super::dtn::dtn_reduce;
use super::DensitySpec;
use crate::error::{Error, Result};
use crate::linalg::generalized_symmetric_eigen;
use crate::mesh::Mesh;

/// Lowest eigenpairs of a Steklov pencil.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// σ₀ ≤ σ₁ ≤ …
    pub eigenvalues: Vec<f64>,
    /// Vertex values of each eigenfunction, harmonically extended inside and
    /// normalized in the ρ-weighted boundary inner product.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Vertices carrying the boundary inner product.
    pub boundary_dofs: Vec<usize>,
    pub clusters: Vec<Cluster>,
}

impl SpectrumResult {
    pub fn recluster(&mut self, rel_tol: f64) -> Result<()> {
        self.clusters = cluster_multiplicities(&self.eigenvalues, rel_tol)?;
        Ok(())
    }

    /// Size of the cluster containing σ_k.
    pub fn multiplicity(&self, k: usize) -> usize {
        cluster_of(&self.clusters, k).map_or(0, |c| self.clusters[c].multiplicity)
    }

    /// Cluster index of every eigenvalue.
    pub fn cluster_ids(&self) -> Vec<usize> {
        (0..self.eigenvalues.len()).map(|k| cluster_of(&self.clusters, k).unwrap_or(usize::MAX)).collect()
    }

    /// `k,sigma,multiplicity_cluster_id` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma,multiplicity_cluster_id\n");
        for (k, (s, c)) in self.eigenvalues.iter().zip(self.cluster_ids()).enumerate() {
            let _ = writeln!(out, "{k},{s:.16e},{c}");
        }
        out
    }
}

/// Steklov problem with every boundary edge carrying the Steklov condition.
/// Returns σ₀ … σ_k.
pub fn solve_steklov(mesh: &Mesh, densities: &DensitySpec, k: usize) -> Result<SpectrumResult> {
    densities.validate(mesh, true)?;
    let dofs = boundary_vertices(mesh, true);
    solve_pencil(mesh, densities, true, dofs, k)
}

/// Steklov condition on the Steklov-marked edges, homogeneous Neumann on the
/// rest. Returns σ₀ … σ_k.
pub fn solve_steklov_neumann(mesh: &Mesh, densities: &DensitySpec, k: usize) -> Result<SpectrumResult> {
    densities.validate(mesh, false)?;
    let dofs = boundary_vertices(mesh, false);
    if dofs.is_empty() {
        return Err(Error::NoSteklovBoundary("mesh has no Steklov edge".into()));
    }
    solve_pencil(mesh, densities, false, dofs, k)
}

fn boundary_vertices(mesh: &Mesh, all_steklov: bool) -> Vec<usize> {
    if !all_steklov {
        return mesh.steklov_vertices();
    }
    let mut v: Vec<usize> = mesh.boundary().iter().flat_map(|e| e.edge).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn solve_pencil(
    mesh: &Mesh,
    densities: &DensitySpec,
    all_steklov: bool,
    dofs: Vec<usize>,
    k: usize,
) -> Result<SpectrumResult> {
    if k + 1 > dofs.len() {
        return Err(Error::TooManyEigenpairs { requested: k + 1, available: dofs.len() });
    }
    let stiffness = assemble_stiffness(mesh, densities)?;
    let dtn = dtn_reduce(&stiffness, &dofs)?;

    let mut position = vec![usize::MAX; mesh.num_vertices()];
    for (i, &v) in dtn.steklov_dofs.iter().enumerate() {
        position[v] = i;
    }
    let ns = dtn.steklov_dofs.len();
    let mut mass = DMatrix::zeros(ns, ns);
    for (i, j, &v) in boundary_mass(mesh, densities, all_steklov).triplet_iter() {
        mass[(position[i], position[j])] += v;
    }

    let pairs = generalized_symmetric_eigen(&dtn.schur, &mass)?;
    let scale = pairs.values.last().copied().unwrap_or(1.0).abs().max(1.0);
    let mut eigenvalues = Vec::with_capacity(k + 1);
    let mut eigenvectors = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let s = pairs.values[i];
        if s < -1e-9 * scale {
            return Err(Error::Eigensolver(format!("negative Steklov eigenvalue {s}")));
        }
        eigenvalues.push(s.max(0.0));
        let boundary = DVector::from_column_slice(pairs.vectors.column(i).as_slice());
        eigenvectors.push(dtn.extend(&boundary));
    }
    let clusters = cluster_multiplicities(&eigenvalues, DEFAULT_REL_TOL)?;
    Ok(SpectrumResult { eigenvalues, eigenvectors, boundary_dofs: dtn.steklov_dofs, clusters })
}

/// Finite eigenvalues of the unreduced pencil `(K, M_∂)` over all vertices,
/// computed densely as `M_∂ v = θ (K + M_∂) v`, `σ = 1/θ − 1`.
///
/// Independent of the Schur-complement route; intended for small meshes.
pub fn full_pencil_spectrum(mesh: &Mesh, densities: &DensitySpec, all_steklov: bool) -> Result<Vec<f64>> {
    densities.validate(mesh, all_steklov)?;
    let k = to_dense(&assemble_stiffness(mesh, densities)?);
    let m = to_dense(&boundary_mass(mesh, densities, all_steklov));
    let shifted = &k + &m;
    let pairs = generalized_symmetric_eigen(&m, &shifted)?;
    let finite = boundary_vertices(mesh, all_steklov).len();
    let mut sigma: Vec<f64> = pairs.values.iter().rev().take(finite).map(|&t| (1.0 / t - 1.0).max(0.0)).collect();
    sigma.sort_by(f64::total_cmp);
    Ok(sigma)
}
