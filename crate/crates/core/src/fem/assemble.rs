use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use super::DensitySpec;
use crate::error::{Error, Result};
use crate::mesh::{signed_area, Marker, Mesh, Point};

/// Element matrix of `∫ γ ∇φᵢ·∇φⱼ` for the P1 basis on one triangle.
pub fn element_stiffness(p: [Point; 3], gamma: f64) -> Result<[[f64; 3]; 3]> {
    let area = signed_area(p[0], p[1], p[2]);
    if area.abs() <= f64::EPSILON * 16.0 {
        return Err(Error::InvalidMesh(format!("degenerate triangle with area {area}")));
    }
    // gradient of φᵢ is (b_i, c_i) / 2A
    let b = [p[1][1] - p[2][1], p[2][1] - p[0][1], p[0][1] - p[1][1]];
    let c = [p[2][0] - p[1][0], p[0][0] - p[2][0], p[1][0] - p[0][0]];
    let scale = gamma / (4.0 * area.abs());
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = scale * (b[i] * b[j] + c[i] * c[j]);
        }
    }
    Ok(k)
}

/// Global stiffness matrix `Kᵢⱼ = ∫ γ ∇φᵢ·∇φⱼ`.
pub fn assemble_stiffness(mesh: &Mesh, densities: &DensitySpec) -> Result<CsrMatrix<f64>> {
    if densities.gamma.len() != mesh.num_triangles() {
        return Err(Error::InvalidDensity("gamma length does not match triangles".into()));
    }
    let n = mesh.num_vertices();
    let mut coo = CooMatrix::new(n, n);
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = tri.map(|v| mesh.vertices()[v]);
        let k = element_stiffness(p, densities.gamma[t])?;
        for i in 0..3 {
            for j in 0..3 {
                coo.push(tri[i], tri[j], k[i][j]);
            }
        }
    }
    Ok(CsrMatrix::from(&coo))
}

/// Consistent boundary mass `∫ ρ φᵢ φⱼ` over the Steklov edges (or over every
/// boundary edge when `all_steklov`).
pub(crate) fn boundary_mass(mesh: &Mesh, densities: &DensitySpec, all_steklov: bool) -> CsrMatrix<f64> {
    let n = mesh.num_vertices();
    let mut coo = CooMatrix::new(n, n);
    for (e, rho) in mesh.boundary().iter().zip(&densities.rho) {
        if !all_steklov && e.marker != Marker::Steklov {
            continue;
        }
        let [a, b] = e.edge;
        let w = rho * mesh.edge_length(a, b);
        coo.push(a, a, w / 3.0);
        coo.push(b, b, w / 3.0);
        coo.push(a, b, w / 6.0);
        coo.push(b, a, w / 6.0);
    }
    CsrMatrix::from(&coo)
}

/// Boundary mass matrix supported on the Steklov-marked edges.
pub fn assemble_boundary_mass(mesh: &Mesh, densities: &DensitySpec) -> Result<CsrMatrix<f64>> {
    if densities.rho.len() != mesh.boundary().len() {
        return Err(Error::InvalidDensity("rho length does not match boundary edges".into()));
    }
    Ok(boundary_mass(mesh, densities, false))
}

pub fn to_dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        d[(i, j)] += *v;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, BoundaryEdge, DomainSpec};

    #[test]
    fn unit_right_triangle_element() {
        let k = element_stiffness([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 1.0).unwrap();
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        assert!(element_stiffness([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], 1.0).is_err());
    }

    #[test]
    fn stiffness_kernel_symmetry_and_linearity() {
        let mesh = build_domain(&DomainSpec::disk(1.0, 0.3)).unwrap();
        let d = DensitySpec::uniform(&mesh);
        let k = to_dense(&assemble_stiffness(&mesh, &d).unwrap());
        let ones = nalgebra::DVector::from_element(mesh.num_vertices(), 1.0);
        assert!((&k * &ones).amax() < 1e-12);
        assert!((&k - k.transpose()).amax() < 1e-14);
        let k2 = to_dense(&assemble_stiffness(&mesh, &d.scaled(2.0, 1.0)).unwrap());
        assert!((&k2 - &k * 2.0).amax() < 1e-12);
        // couplings only along mesh edges
        let edges = mesh.edge_triangles();
        for i in 0..mesh.num_vertices() {
            for j in 0..mesh.num_vertices() {
                if i != j && k[(i, j)] != 0.0 {
                    assert!(edges.contains_key(&crate::mesh::edge_key(i, j)));
                }
            }
        }
    }

    #[test]
    fn single_edge_mass_block() {
        let mesh = Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            vec![
                BoundaryEdge { edge: [0, 1], marker: Marker::Steklov, component: 0 },
                BoundaryEdge { edge: [1, 2], marker: Marker::Neumann, component: 0 },
                BoundaryEdge { edge: [2, 0], marker: Marker::Neumann, component: 0 },
            ],
        )
        .unwrap();
        let d = DensitySpec { gamma: vec![1.0], rho: vec![1.0, 0.0, 0.0] };
        let m = to_dense(&assemble_boundary_mass(&mesh, &d).unwrap());
        let expected = [[1.0 / 3.0, 1.0 / 6.0, 0.0], [1.0 / 6.0, 1.0 / 3.0, 0.0], [0.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((m[(i, j)] - expected[i][j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn total_mass_is_weighted_perimeter() {
        let mesh = build_domain(&DomainSpec::annulus(0.5, 1.0, 0.2)).unwrap();
        let rho: Vec<f64> = (0..mesh.boundary().len()).map(|k| 1.0 + (k % 3) as f64).collect();
        let d = DensitySpec { gamma: vec![1.0; mesh.num_triangles()], rho };
        let m = to_dense(&assemble_boundary_mass(&mesh, &d).unwrap());
        let expected: f64 = mesh
            .boundary()
            .iter()
            .zip(&d.rho)
            .map(|(e, r)| r * mesh.edge_length(e.edge[0], e.edge[1]))
            .sum();
        assert!((m.sum() - expected).abs() < 1e-12);
    }
}
