use std::collections::HashMap;

use super::{edge_key, BoundaryEdge, Mesh};
use crate::error::Result;

/// Splits every triangle into four through its edge midpoints. Boundary edges
/// split in two and keep their marker and component.
pub fn refine_uniform(mesh: &Mesh) -> Result<Mesh> {
    let mut vertices = mesh.vertices().to_vec();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        *midpoint.entry(edge_key(a, b)).or_insert_with(|| {
            let (p, q) = (vertices[a], vertices[b]);
            vertices.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
            vertices.len() - 1
        })
    };
    let mut triangles = Vec::with_capacity(4 * mesh.num_triangles());
    for &[a, b, c] in mesh.triangles() {
        let ab = mid(a, b, &mut vertices);
        let bc = mid(b, c, &mut vertices);
        let ca = mid(c, a, &mut vertices);
        triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let mut boundary = Vec::with_capacity(2 * mesh.boundary().len());
    for e in mesh.boundary() {
        let [a, b] = e.edge;
        let m = mid(a, b, &mut vertices);
        boundary.push(BoundaryEdge { edge: [a, m], ..e.clone() });
        boundary.push(BoundaryEdge { edge: [m, b], ..e.clone() });
    }
    Mesh::new(vertices, triangles, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, DomainSpec, Marker};
    use std::collections::BTreeMap;

    #[test]
    fn refinement_counts_and_topology() {
        let m = build_domain(&DomainSpec::annulus(0.4, 1.0, 0.25)).unwrap();
        let m = m.mark_boundary(&BTreeMap::from([(1, Marker::Neumann)])).unwrap();
        let r = refine_uniform(&m).unwrap();
        assert_eq!(r.num_triangles(), 4 * m.num_triangles());
        assert_eq!(r.boundary().len(), 2 * m.boundary().len());
        assert_eq!(r.euler_characteristic(), m.euler_characteristic());
        assert_eq!(r.num_components(), m.num_components());
        let neumann = |mesh: &Mesh| mesh.boundary().iter().filter(|e| e.marker == Marker::Neumann).count();
        assert_eq!(neumann(&r), 2 * neumann(&m));
        assert!(r.boundary().iter().all(|e| (e.marker == Marker::Neumann) == (e.component == 1)));
    }
}
