//! Nodal domains of discrete eigenfunctions.
//!
//! A triangle takes the majority sign of its nonzero vertices (ties and
//! all-zero triangles count as positive); nodal domains are the
//! edge-connected components of equally signed triangles. Zero vertices never
//! separate domains on their own.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Relative threshold below which a vertex value counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
            Sign::Zero => "0",
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalDecomposition {
    pub vertex_signs: Vec<Sign>,
    /// Domain id of each triangle.
    pub domain_labels: Vec<usize>,
    pub domain_signs: Vec<Sign>,
    pub touches_boundary: Vec<bool>,
}

impl NodalDecomposition {
    pub fn num_domains(&self) -> usize {
        self.domain_signs.len()
    }

    /// `triangle_id,domain_id,sign` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("triangle_id,domain_id,sign\n");
        for (t, &d) in self.domain_labels.iter().enumerate() {
            let _ = writeln!(out, "{t},{d},{}", self.domain_signs[d].symbol());
        }
        out
    }
}

pub fn nodal_domains(mesh: &Mesh, eigenvector: &[f64], zero_tol: f64) -> Result<NodalDecomposition> {
    if eigenvector.len() != mesh.num_vertices() {
        return Err(Error::Dimension(format!(
            "eigenvector has {} entries for {} vertices",
            eigenvector.len(),
            mesh.num_vertices()
        )));
    }
    if !(zero_tol.is_finite() && zero_tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("zero_tol must be non-negative, got {zero_tol}")));
    }
    if eigenvector.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("eigenvector has non-finite entries".into()));
    }
    let max = eigenvector.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max == 0.0 {
        return Err(Error::ZeroVector);
    }
    let cut = zero_tol * max;
    let vertex_signs: Vec<Sign> = eigenvector
        .iter()
        .map(|&v| {
            if v.abs() <= cut {
                Sign::Zero
            } else if v > 0.0 {
                Sign::Positive
            } else {
                Sign::Negative
            }
        })
        .collect();

    let tri_signs: Vec<Sign> = mesh
        .triangles()
        .iter()
        .map(|t| {
            let score: i32 = t
                .iter()
                .map(|&v| match vertex_signs[v] {
                    Sign::Positive => 1,
                    Sign::Negative => -1,
                    Sign::Zero => 0,
                })
                .sum();
            if score < 0 {
                Sign::Negative
            } else {
                Sign::Positive
            }
        })
        .collect();

    let nt = mesh.num_triangles();
    let mut neighbours = vec![Vec::with_capacity(3); nt];
    for tris in mesh.edge_triangles().values() {
        if let [a, b] = tris[..] {
            neighbours[a].push(b);
            neighbours[b].push(a);
        }
    }
    neighbours.iter_mut().for_each(|n| n.sort_unstable());

    let mut labels = vec![usize::MAX; nt];
    let mut domain_signs = Vec::new();
    for start in 0..nt {
        if labels[start] != usize::MAX {
            continue;
        }
        let id = domain_signs.len();
        domain_signs.push(tri_signs[start]);
        labels[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &u in &neighbours[t] {
                if labels[u] == usize::MAX && tri_signs[u] == tri_signs[t] {
                    labels[u] = id;
                    queue.push_back(u);
                }
            }
        }
    }
    let touches_boundary = boundary_touch(mesh, &labels, domain_signs.len());
    Ok(NodalDecomposition { vertex_signs, domain_labels: labels, domain_signs, touches_boundary })
}

fn boundary_touch(mesh: &Mesh, labels: &[usize], domains: usize) -> Vec<bool> {
    let edges = mesh.edge_triangles();
    let mut touches = vec![false; domains];
    for e in mesh.boundary() {
        if let Some(tris) = edges.get(&crate::mesh::edge_key(e.edge[0], e.edge[1])) {
            if let Some(&l) = tris.first().and_then(|&t| labels.get(t)) {
                touches[l] = true;
            }
        }
    }
    touches
}

/// At most `k + 1` nodal domains.
pub fn courant_check(decomposition: &NodalDecomposition, k: usize) -> bool {
    decomposition.num_domains() <= k + 1
}

/// Every domain holds a triangle owning a boundary edge of `mesh`.
pub fn boundary_contact_check(decomposition: &NodalDecomposition, mesh: &Mesh) -> bool {
    if decomposition.domain_labels.len() != mesh.num_triangles() {
        return false;
    }
    let used: HashSet<usize> = decomposition.domain_labels.iter().copied().collect();
    let touches = boundary_touch(mesh, &decomposition.domain_labels, decomposition.num_domains());
    used.iter().all(|&d| touches.get(d).copied().unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_domain, DomainSpec};
    use proptest::prelude::*;

    fn disk() -> Mesh {
        build_domain(&DomainSpec::disk(1.0, 0.2)).unwrap()
    }

    #[test]
    fn constant_has_one_domain() {
        let m = disk();
        let d = nodal_domains(&m, &vec![2.0; m.num_vertices()], DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(d.num_domains(), 1);
        assert!(courant_check(&d, 0));
        assert!(boundary_contact_check(&d, &m));
    }

    #[test]
    fn linear_function_splits_disk_in_two() {
        let m = disk();
        let u: Vec<f64> = m.vertices().iter().map(|p| p[0]).collect();
        let d = nodal_domains(&m, &u, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(d.num_domains(), 2);
        assert_ne!(d.domain_signs[0], d.domain_signs[1]);
        assert!(courant_check(&d, 1));
        assert!(boundary_contact_check(&d, &m));
    }

    #[test]
    fn quadratic_harmonic_has_four_domains() {
        let m = disk();
        // r² cos 2θ = x² − y²
        let u: Vec<f64> = m.vertices().iter().map(|p| p[0] * p[0] - p[1] * p[1]).collect();
        let d = nodal_domains(&m, &u, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(d.num_domains(), 4);
        assert!(courant_check(&d, 3));
        assert!(!courant_check(&d, 2));
    }

    #[test]
    fn interior_bump_fails_contact() {
        let m = disk();
        let u: Vec<f64> = m.vertices().iter().map(|p| p[0] * p[0] + p[1] * p[1] - 0.25).collect();
        let d = nodal_domains(&m, &u, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(d.num_domains(), 2);
        assert!(!boundary_contact_check(&d, &m));
    }

    #[test]
    fn zero_vector_rejected() {
        let m = disk();
        assert!(matches!(nodal_domains(&m, &vec![0.0; m.num_vertices()], 1e-9), Err(Error::ZeroVector)));
        assert!(nodal_domains(&m, &[1.0], 1e-9).is_err());
    }

    #[test]
    fn csv_rows() {
        let m = disk();
        let u: Vec<f64> = m.vertices().iter().map(|p| p[1]).collect();
        let d = nodal_domains(&m, &u, DEFAULT_ZERO_TOL).unwrap();
        let csv = d.to_csv();
        assert_eq!(csv.lines().count(), m.num_triangles() + 1);
        assert!(csv.starts_with("triangle_id,domain_id,sign\n0,0,"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn labels_partition_and_negation_is_symmetric(seed in proptest::collection::vec(-1.0f64..1.0, 6)) {
            let m = build_domain(&DomainSpec::disk(1.0, 0.35)).unwrap();
            // smooth-ish nonvanishing field
            let u: Vec<f64> = m.vertices().iter().map(|p| {
                let v = seed[0] + seed[1] * p[0] + seed[2] * p[1] + seed[3] * p[0] * p[1]
                    + seed[4] * (p[0] * p[0] - p[1] * p[1]) + seed[5] * (3.0 * p[0]).sin();
                if v == 0.0 { 1e-3 } else { v }
            }).collect();
            let d = nodal_domains(&m, &u, 0.0).unwrap();
            prop_assert!(d.domain_labels.iter().all(|&l| l < d.num_domains()));
            for tris in m.edge_triangles().values() {
                if let [a, b] = tris[..] {
                    if d.domain_labels[a] == d.domain_labels[b] {
                        prop_assert_eq!(d.domain_signs[d.domain_labels[a]], d.domain_signs[d.domain_labels[b]]);
                    }
                }
            }
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            let e = nodal_domains(&m, &neg, 0.0).unwrap();
            prop_assert_eq!(&d.domain_labels, &e.domain_labels);
            let flipped: Vec<Sign> = d.domain_signs.iter().map(|s| s.flip()).collect();
            prop_assert_eq!(flipped, e.domain_signs);
        }
    }
}
