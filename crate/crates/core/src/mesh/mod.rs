//! Conforming triangulations of flat planar domains with labeled boundary.

mod build;
mod refine;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use build::{build_domain, triangulate_loops, BoundaryLoop, DomainSpec, Shape};
pub(crate) use build::{lattice_points, point_segment_distance, segment_distance, segments_intersect};
pub use refine::refine_uniform;

/// Vertices closer than this are considered duplicates.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

pub type Point = [f64; 2];

/// Boundary condition carried by a boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Marker {
    #[serde(rename = "S")]
    Steklov,
    #[serde(rename = "N")]
    Neumann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub edge: [usize; 2],
    pub marker: Marker,
    pub component: usize,
}

/// A validated planar P1 mesh. Triangles are counter-clockwise and every
/// boundary edge is tagged with a marker and the index of its boundary loop.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
}

#[derive(Deserialize)]
struct RawMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
}

impl<'de> Deserialize<'de> for Mesh {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMesh::deserialize(d)?;
        Mesh::new(raw.vertices, raw.triangles, raw.boundary).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub(crate) fn signed_area(p: Point, q: Point, r: Point) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]))
}

impl Mesh {
    /// Validates and wraps raw mesh data.
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: Vec<BoundaryEdge>,
    ) -> Result<Self> {
        let mesh = Self { vertices, triangles, boundary };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Number of boundary loops.
    pub fn num_components(&self) -> usize {
        self.boundary.iter().map(|e| e.component + 1).max().unwrap_or(0)
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.vertices[a], self.vertices[b]);
        (q[0] - p[0]).hypot(q[1] - p[1])
    }

    /// Map from undirected edge to the triangles containing it.
    pub fn edge_triangles(&self) -> HashMap<(usize, usize), Vec<usize>> {
        let mut map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                map.entry(edge_key(tri[k], tri[(k + 1) % 3])).or_default().push(t);
            }
        }
        map
    }

    pub fn num_edges(&self) -> usize {
        self.edge_triangles().len()
    }

    /// `V − E + F` over all simplices of the triangulation.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.num_edges() as i64 + self.triangles.len() as i64
    }

    /// Sorted vertices incident to at least one Steklov edge.
    pub fn steklov_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .boundary
            .iter()
            .filter(|e| e.marker == Marker::Steklov)
            .flat_map(|e| e.edge)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of maximal connected runs of Steklov edges.
    pub fn steklov_segments(&self) -> usize {
        let edges: Vec<[usize; 2]> = self
            .boundary
            .iter()
            .filter(|e| e.marker == Marker::Steklov)
            .map(|e| e.edge)
            .collect();
        let mut parent: HashMap<usize, usize> = HashMap::new();
        fn find(parent: &mut HashMap<usize, usize>, x: usize) -> usize {
            let p = *parent.entry(x).or_insert(x);
            if p == x {
                x
            } else {
                let r = find(parent, p);
                parent.insert(x, r);
                r
            }
        }
        for [a, b] in &edges {
            let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
            if ra != rb {
                parent.insert(ra, rb);
            }
        }
        let keys: Vec<usize> = parent.keys().copied().collect();
        let mut roots: Vec<usize> = keys.into_iter().map(|k| find(&mut parent, k)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Replaces the marker of every boundary loop listed in `assignment`.
    pub fn mark_boundary(&self, assignment: &BTreeMap<usize, Marker>) -> Result<Mesh> {
        let l = self.num_components();
        if let Some(&bad) = assignment.keys().find(|&&c| c >= l) {
            return Err(Error::InvalidArgument(format!(
                "boundary component {bad} does not exist (mesh has {l})"
            )));
        }
        let mut out = self.clone();
        for e in &mut out.boundary {
            if let Some(&m) = assignment.get(&e.component) {
                e.marker = m;
            }
        }
        if out.boundary.iter().all(|e| e.marker == Marker::Neumann) {
            return Err(Error::NoSteklovBoundary(
                "assignment marks every boundary edge Neumann".into(),
            ));
        }
        Ok(out)
    }

    /// Re-marks individual boundary edges; `rule` receives the two endpoint
    /// coordinates and returns the new marker, or `None` to keep the old one.
    pub fn mark_edges<F>(&self, mut rule: F) -> Result<Mesh>
    where
        F: FnMut(Point, Point) -> Option<Marker>,
    {
        let mut out = self.clone();
        for e in &mut out.boundary {
            if let Some(m) = rule(self.vertices[e.edge[0]], self.vertices[e.edge[1]]) {
                e.marker = m;
            }
        }
        if out.boundary.iter().all(|e| e.marker == Marker::Neumann) {
            return Err(Error::NoSteklovBoundary("every boundary edge is Neumann".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        if let Some(i) = self.vertices.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidMesh(format!("vertex {i} has non-finite coordinates")));
        }
        self.check_duplicates()?;
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            if self.triangle_area(t) <= 0.0 {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} is degenerate or clockwise (area {})",
                    self.triangle_area(t)
                )));
            }
        }
        let mut used = vec![false; n];
        self.triangles.iter().flatten().for_each(|&v| used[v] = true);
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {v} belongs to no triangle")));
        }

        let edges = self.edge_triangles();
        let mut topological_boundary: Vec<(usize, usize)> = Vec::new();
        for (&e, tris) in &edges {
            match tris.len() {
                1 => topological_boundary.push(e),
                2 => {}
                k => {
                    return Err(Error::InvalidMesh(format!(
                        "edge {e:?} belongs to {k} triangles"
                    )))
                }
            }
        }
        topological_boundary.sort_unstable();
        let mut tagged: Vec<(usize, usize)> =
            self.boundary.iter().map(|b| edge_key(b.edge[0], b.edge[1])).collect();
        tagged.sort_unstable();
        if tagged.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMesh("a boundary edge is listed twice".into()));
        }
        if tagged != topological_boundary {
            return Err(Error::InvalidMesh(format!(
                "boundary list ({} edges) does not match the edges owned by one triangle ({})",
                tagged.len(),
                topological_boundary.len()
            )));
        }
        self.check_loops()
    }

    fn check_duplicates(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| self.vertices[a][0].total_cmp(&self.vertices[b][0]));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                let (p, q) = (self.vertices[i], self.vertices[j]);
                if q[0] - p[0] > DUPLICATE_TOLERANCE {
                    break;
                }
                if (q[1] - p[1]).abs() <= DUPLICATE_TOLERANCE {
                    return Err(Error::InvalidMesh(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        Ok(())
    }

    /// Boundary edges must form closed simple loops, each carrying a single
    /// component id, with ids enumerating the loops.
    fn check_loops(&self) -> Result<()> {
        let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
        for (k, b) in self.boundary.iter().enumerate() {
            for v in b.edge {
                incident.entry(v).or_default().push(k);
            }
        }
        if let Some((v, inc)) = incident.iter().find(|(_, inc)| inc.len() != 2) {
            return Err(Error::InvalidMesh(format!(
                "boundary vertex {v} has {} incident boundary edges",
                inc.len()
            )));
        }
        let mut seen = vec![false; self.boundary.len()];
        let mut loop_ids = Vec::new();
        for start in 0..self.boundary.len() {
            if seen[start] {
                continue;
            }
            let component = self.boundary[start].component;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(k) = stack.pop() {
                if self.boundary[k].component != component {
                    return Err(Error::InvalidMesh(format!(
                        "boundary loop mixes component ids {component} and {}",
                        self.boundary[k].component
                    )));
                }
                for v in self.boundary[k].edge {
                    for &k2 in &incident[&v] {
                        if !seen[k2] {
                            seen[k2] = true;
                            stack.push(k2);
                        }
                    }
                }
            }
            loop_ids.push(component);
        }
        loop_ids.sort_unstable();
        if loop_ids != (0..loop_ids.len()).collect::<Vec<_>>() {
            return Err(Error::InvalidMesh(format!(
                "component ids {loop_ids:?} do not enumerate the boundary loops"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Mesh {
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let triangles = vec![[0, 1, 2], [0, 2, 3]];
        let boundary = (0..4)
            .map(|i| BoundaryEdge { edge: [i, (i + 1) % 4], marker: Marker::Steklov, component: 0 })
            .collect();
        Mesh::new(vertices, triangles, boundary).unwrap()
    }

    #[test]
    fn square_is_a_disk() {
        let m = square();
        assert_eq!(m.euler_characteristic(), 1);
        assert_eq!(m.num_components(), 1);
        assert_eq!(m.steklov_vertices(), vec![0, 1, 2, 3]);
        assert_eq!(m.steklov_segments(), 1);
    }

    #[test]
    fn clockwise_triangle_is_rejected() {
        let m = square();
        let err = Mesh::new(m.vertices.clone(), vec![[0, 2, 1], [0, 2, 3]], m.boundary.clone());
        assert!(matches!(err, Err(Error::InvalidMesh(_))));
    }

    #[test]
    fn missing_boundary_edge_is_rejected() {
        let m = square();
        let mut b = m.boundary.clone();
        b.pop();
        assert!(Mesh::new(m.vertices.clone(), m.triangles.clone(), b).is_err());
    }

    #[test]
    fn duplicate_vertex_is_rejected() {
        let vertices = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 5e-13]];
        let err = Mesh::new(vertices, vec![[0, 1, 2]], vec![]);
        assert!(matches!(err, Err(Error::InvalidMesh(msg)) if msg.contains("coincide")));
    }

    #[test]
    fn all_neumann_marking_is_rejected() {
        let m = square();
        let assignment = BTreeMap::from([(0, Marker::Neumann)]);
        assert!(matches!(m.mark_boundary(&assignment), Err(Error::NoSteklovBoundary(_))));
        let unknown = BTreeMap::from([(3, Marker::Neumann)]);
        assert!(m.mark_boundary(&unknown).is_err());
    }

    #[test]
    fn json_roundtrip_uses_letter_markers() {
        let m = square().mark_edges(|p, q| (p[1] > 0.5 && q[1] > 0.5).then_some(Marker::Neumann)).unwrap();
        let s = m.to_json().unwrap();
        assert!(s.contains("\"marker\":\"N\"") && s.contains("\"marker\":\"S\""));
        assert_eq!(Mesh::from_json(&s).unwrap(), m);
    }
}
