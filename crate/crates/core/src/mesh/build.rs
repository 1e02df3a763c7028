use std::collections::HashSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use spade::{ConstrainedDelaunayTriangulation, Point2, Triangulation};

use super::{edge_key, signed_area, BoundaryEdge, Marker, Mesh, Point, DUPLICATE_TOLERANCE};
use crate::error::{Error, Result};

/// A closed curve bounding part of a planar domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Circle { center: Point, radius: f64 },
    /// Vertices of a simple polygon, either orientation.
    Polygon { vertices: Vec<Point> },
}

/// Outer curve, holes and target mesh size of a multiply-connected domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub outer: Shape,
    #[serde(default)]
    pub holes: Vec<Shape>,
    pub target_h: f64,
}

impl DomainSpec {
    pub fn disk(radius: f64, target_h: f64) -> Self {
        Self { outer: Shape::Circle { center: [0.0, 0.0], radius }, holes: vec![], target_h }
    }

    pub fn annulus(inner: f64, outer: f64, target_h: f64) -> Self {
        Self {
            outer: Shape::Circle { center: [0.0, 0.0], radius: outer },
            holes: vec![Shape::Circle { center: [0.0, 0.0], radius: inner }],
            target_h,
        }
    }

    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64, target_h: f64) -> Self {
        Self {
            outer: Shape::Polygon { vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]] },
            holes: vec![],
            target_h,
        }
    }
}

/// A discretized boundary loop: segment `i` joins `points[i]` to
/// `points[(i + 1) % len]` and carries `markers[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLoop {
    pub points: Vec<Point>,
    pub markers: Vec<Marker>,
}

impl BoundaryLoop {
    pub fn steklov(points: Vec<Point>) -> Self {
        let markers = vec![Marker::Steklov; points.len()];
        Self { points, markers }
    }

    fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    fn signed_area(&self) -> f64 {
        self.segments().map(|(p, q)| 0.5 * (p[0] * q[1] - q[0] * p[1])).sum()
    }

    fn reversed(&self) -> Self {
        let n = self.points.len();
        let mut points = self.points.clone();
        points.reverse();
        // segment i of the reversed loop is segment n-2-i of the original
        let markers = (0..n).map(|i| self.markers[(2 * n - 2 - i) % n]).collect();
        Self { points, markers }
    }
}

/// Builds a mesh of `spec` with every boundary edge marked Steklov.
///
/// Loop 0 is the outer curve; hole `i` becomes loop `i + 1`. Disks and
/// concentric annuli use a polar point template, other domains a hexagonal
/// lattice; both are triangulated by constrained Delaunay.
pub fn build_domain(spec: &DomainSpec) -> Result<Mesh> {
    let h = spec.target_h;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidDomain(format!("target_h must be positive, got {h}")));
    }
    let mut loops = vec![discretize(&spec.outer, h)?];
    if loops[0].signed_area() < 0.0 {
        loops[0] = loops[0].reversed();
    }
    for hole in &spec.holes {
        let mut l = discretize(hole, h)?;
        if l.signed_area() > 0.0 {
            l = l.reversed();
        }
        loops.push(l);
    }
    check_layout(&loops, h)?;

    let interior = match polar_template(spec) {
        Some((center, r_in, r_out)) => polar_points(center, r_in, r_out, h),
        None => lattice_points(&loops, h),
    };
    triangulate_loops(&loops, interior, &[])
}

fn discretize(shape: &Shape, h: f64) -> Result<BoundaryLoop> {
    match shape {
        Shape::Circle { center, radius } => {
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(Error::InvalidDomain(format!("circle radius must be positive, got {radius}")));
            }
            let n = circle_segments(*radius, h);
            Ok(BoundaryLoop::steklov(circle_points(*center, *radius, n, 0.0)))
        }
        Shape::Polygon { vertices } => {
            if vertices.len() < 3 {
                return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
            }
            let n = vertices.len();
            let mut points = Vec::new();
            for i in 0..n {
                let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                let len = (q[0] - p[0]).hypot(q[1] - p[1]);
                if len <= DUPLICATE_TOLERANCE {
                    return Err(Error::InvalidDomain(format!("polygon side {i} has zero length")));
                }
                let pieces = (len / h).ceil().max(1.0) as usize;
                for k in 0..pieces {
                    let t = k as f64 / pieces as f64;
                    points.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
                }
            }
            let l = BoundaryLoop::steklov(points);
            if self_intersects(&l) {
                return Err(Error::InvalidDomain("polygon is not simple".into()));
            }
            Ok(l)
        }
    }
}

pub(crate) fn circle_segments(radius: f64, h: f64) -> usize {
    ((2.0 * PI * radius / h).ceil() as usize).max(8)
}

pub(crate) fn circle_points(center: Point, radius: f64, n: usize, phase: f64) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let t = phase + 2.0 * PI * k as f64 / n as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect()
}

fn polar_template(spec: &DomainSpec) -> Option<(Point, f64, f64)> {
    let Shape::Circle { center, radius } = spec.outer else { return None };
    match spec.holes.as_slice() {
        [] => Some((center, 0.0, radius)),
        [Shape::Circle { center: c, radius: r }] if *c == center => Some((center, *r, radius)),
        _ => None,
    }
}

/// Fewest points on an inner ring around a disk center, so that angular
/// sectors of low harmonics stay resolved near the center.
const MIN_RING_POINTS: usize = 16;

/// Concentric rings strictly between the boundary circles, plus the center
/// when there is no hole.
fn polar_points(center: Point, r_in: f64, r_out: f64, h: f64) -> Vec<Point> {
    let rings = ((r_out - r_in) / h).ceil().max(1.0) as usize;
    let dr = (r_out - r_in) / rings as f64;
    let mut points = Vec::new();
    let floor = if r_in == 0.0 {
        points.push(center);
        MIN_RING_POINTS.min(circle_segments(r_out, h))
    } else {
        6
    };
    for j in 1..rings {
        let r = r_in + j as f64 * dr;
        let n = ((2.0 * PI * r / h).ceil() as usize).max(floor);
        let phase = if j % 2 == 1 { PI / n as f64 } else { 0.0 };
        points.extend(circle_points(center, r, n, phase));
    }
    points
}

/// Hexagonal lattice points inside the domain and away from its boundary.
pub(crate) fn lattice_points(loops: &[BoundaryLoop], h: f64) -> Vec<Point> {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in loops.iter().flat_map(|l| &l.points) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let dy = h * 3f64.sqrt() / 2.0;
    let rows = ((hi[1] - lo[1]) / dy).ceil() as usize + 1;
    let cols = ((hi[0] - lo[0]) / h).ceil() as usize + 1;
    let mut points = Vec::new();
    for r in 0..rows {
        let y = lo[1] + r as f64 * dy;
        let shift = if r % 2 == 1 { 0.5 * h } else { 0.0 };
        for c in 0..cols {
            let p = [lo[0] + shift + c as f64 * h, y];
            if inside(loops, p) && distance_to_loops(loops, p) >= 0.55 * h {
                points.push(p);
            }
        }
    }
    points
}

/// Even-odd point-in-domain test.
pub(crate) fn inside(loops: &[BoundaryLoop], p: Point) -> bool {
    let mut crossings = 0usize;
    for l in loops {
        for (a, b) in l.segments() {
            if (a[1] > p[1]) != (b[1] > p[1]) {
                let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                if x > p[0] {
                    crossings += 1;
                }
            }
        }
    }
    crossings % 2 == 1
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn distance_to_loops(loops: &[BoundaryLoop], p: Point) -> f64 {
    loops
        .iter()
        .flat_map(|l| l.segments())
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = signed_area(a, b, c);
    let o2 = signed_area(a, b, d);
    let o3 = signed_area(c, d, a);
    let o4 = signed_area(c, d, b);
    (o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0) && o1 != 0.0 && o2 != 0.0
}

pub(crate) fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_intersect(a, b, c, d) {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn self_intersects(l: &BoundaryLoop) -> bool {
    let segs: Vec<(Point, Point)> = l.segments().collect();
    let n = segs.len();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_intersect(segs[i].0, segs[i].1, segs[j].0, segs[j].1) {
                return true;
            }
        }
    }
    false
}

fn loop_gap(a: &BoundaryLoop, b: &BoundaryLoop) -> f64 {
    let mut best = f64::INFINITY;
    for (p, q) in a.segments() {
        for (r, s) in b.segments() {
            best = best.min(segment_distance(p, q, r, s));
        }
    }
    best
}

fn check_layout(loops: &[BoundaryLoop], h: f64) -> Result<()> {
    let outer = std::slice::from_ref(&loops[0]);
    for (i, hole) in loops.iter().enumerate().skip(1) {
        if !hole.points.iter().all(|&p| inside(outer, p)) || loop_gap(&loops[0], hole) == 0.0 {
            return Err(Error::InvalidDomain(format!("hole {} is not strictly inside the outer boundary", i - 1)));
        }
    }
    for i in 1..loops.len() {
        for j in i + 1..loops.len() {
            let nested = inside(std::slice::from_ref(&loops[i]), loops[j].points[0])
                || inside(std::slice::from_ref(&loops[j]), loops[i].points[0]);
            if nested || loop_gap(&loops[i], &loops[j]) == 0.0 {
                return Err(Error::InvalidDomain(format!("holes {} and {} overlap", i - 1, j - 1)));
            }
        }
    }
    for i in 0..loops.len() {
        for j in i + 1..loops.len() {
            let gap = loop_gap(&loops[i], &loops[j]);
            if gap < h {
                return Err(Error::InvalidDomain(format!(
                    "target_h = {h} is too coarse: boundary loops {i} and {j} are only {gap:.3e} apart"
                )));
            }
        }
    }
    Ok(())
}

/// Constrained Delaunay triangulation of the region bounded by `loops`
/// (even-odd rule), with extra interior points and interior constraint
/// polylines whose vertices may coincide with loop points.
///
/// Loop `i` becomes boundary component `i`.
pub fn triangulate_loops(
    loops: &[BoundaryLoop],
    interior: Vec<Point>,
    constraints: &[Vec<Point>],
) -> Result<Mesh> {
    let mut vertices: Vec<Point> = Vec::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut boundary = Vec::new();
    for (component, l) in loops.iter().enumerate() {
        if l.points.len() != l.markers.len() || l.points.len() < 3 {
            return Err(Error::Triangulation(format!("loop {component} is malformed")));
        }
        let base = vertices.len();
        let n = l.points.len();
        vertices.extend_from_slice(&l.points);
        for i in 0..n {
            let e = [base + i, base + (i + 1) % n];
            edges.push(e);
            boundary.push(BoundaryEdge { edge: e, marker: l.markers[i], component });
        }
    }
    let loop_vertices = vertices.len();
    for poly in constraints {
        let mut prev: Option<usize> = None;
        for &p in poly {
            let existing = (0..loop_vertices).find(|&k| {
                (vertices[k][0] - p[0]).abs() <= 1e-9 && (vertices[k][1] - p[1]).abs() <= 1e-9
            });
            let idx = existing.unwrap_or_else(|| {
                vertices.push(p);
                vertices.len() - 1
            });
            if let Some(a) = prev {
                edges.push([a, idx]);
            }
            prev = Some(idx);
        }
    }
    vertices.extend(interior);

    let input: Vec<Point2<f64>> = vertices.iter().map(|p| Point2::new(p[0], p[1])).collect();
    let mut conflicts = 0usize;
    let cdt = ConstrainedDelaunayTriangulation::<Point2<f64>>::try_bulk_load_cdt(input, edges, |_| {
        conflicts += 1
    })
    .map_err(|e| Error::Triangulation(format!("{e:?}")))?;
    if conflicts > 0 {
        return Err(Error::Triangulation(format!("{conflicts} constraint edges intersect")));
    }
    if cdt.num_vertices() != vertices.len() {
        return Err(Error::Triangulation("input contains duplicate points".into()));
    }

    // Faces are inside when reached from the outer face across an odd number
    // of loop edges. Unlike a centroid test this is exact for slivers along
    // nearly straight boundary runs.
    let loop_edges: HashSet<(usize, usize)> = boundary.iter().map(|b| edge_key(b.edge[0], b.edge[1])).collect();
    let mut adjacent = vec![Vec::new(); cdt.num_all_faces()];
    for e in cdt.directed_edges() {
        let crossing = loop_edges.contains(&edge_key(e.from().fix().index(), e.to().fix().index()));
        adjacent[e.face().fix().index()].push((e.rev().face().fix().index(), crossing));
    }
    let mut state: Vec<Option<bool>> = vec![None; adjacent.len()];
    let outer = cdt.outer_face().fix().index();
    state[outer] = Some(false);
    let mut stack = vec![outer];
    while let Some(f) = stack.pop() {
        let here = state[f].unwrap();
        for &(g, crossing) in &adjacent[f] {
            let there = here != crossing;
            match state[g] {
                None => {
                    state[g] = Some(there);
                    stack.push(g);
                }
                Some(s) if s != there => {
                    return Err(Error::Triangulation("boundary loops do not bound a region".into()));
                }
                _ => {}
            }
        }
    }

    let mut triangles = Vec::new();
    for face in cdt.inner_faces() {
        if state[face.fix().index()] != Some(true) {
            continue;
        }
        let [a, b, c] = face.vertices().map(|v| v.fix().index());
        let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
        if signed_area(pa, pb, pc) > 0.0 {
            triangles.push([a, b, c]);
        } else {
            triangles.push([a, c, b]);
        }
    }

    // drop vertices that ended up outside every kept triangle
    let mut used = vec![false; vertices.len()];
    triangles.iter().flatten().for_each(|&v| used[v] = true);
    let mut remap = vec![usize::MAX; vertices.len()];
    let mut kept = Vec::new();
    for (i, p) in vertices.iter().enumerate() {
        if used[i] {
            remap[i] = kept.len();
            kept.push(*p);
        }
    }
    for t in &mut triangles {
        for v in t.iter_mut() {
            *v = remap[*v];
        }
    }
    for b in &mut boundary {
        for v in b.edge.iter_mut() {
            if remap[*v] == usize::MAX {
                return Err(Error::Triangulation("a boundary vertex lost its triangles".into()));
            }
            *v = remap[*v];
        }
    }
    Mesh::new(kept, triangles, boundary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_topology() {
        let m = build_domain(&DomainSpec::disk(1.0, 0.2)).unwrap();
        assert_eq!(m.num_components(), 1);
        assert_eq!(m.euler_characteristic(), 1);
        assert!(m.boundary().iter().all(|e| e.marker == Marker::Steklov));
        // inscribed polygon with chord length at most h
        for e in m.boundary() {
            assert!(m.edge_length(e.edge[0], e.edge[1]) <= 0.2);
        }
    }

    #[test]
    fn annulus_topology() {
        let spec = DomainSpec {
            outer: Shape::Circle { center: [0.0, 0.0], radius: 1.0 },
            holes: vec![Shape::Circle { center: [0.1, 0.0], radius: 0.3 }],
            target_h: 0.15,
        };
        let m = build_domain(&spec).unwrap();
        assert_eq!(m.num_components(), 2);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn three_holes() {
        let holes = [[0.5, 0.0], [-0.25, 0.43], [-0.25, -0.43]]
            .iter()
            .map(|&c| Shape::Circle { center: c, radius: 0.18 })
            .collect();
        let spec = DomainSpec { outer: Shape::Circle { center: [0.0, 0.0], radius: 1.0 }, holes, target_h: 0.1 };
        let m = build_domain(&spec).unwrap();
        assert_eq!(m.num_components(), 4);
        assert_eq!(m.euler_characteristic(), -2);
    }

    #[test]
    fn rectangle_and_polygon_hole() {
        let mut spec = DomainSpec::rectangle(0.0, 0.0, 3.0, 1.0, 0.2);
        spec.holes.push(Shape::Polygon { vertices: vec![[1.0, 0.3], [2.0, 0.3], [1.5, 0.7]] });
        let m = build_domain(&spec).unwrap();
        assert_eq!(m.euler_characteristic(), 0);
        let area: f64 = (0..m.num_triangles()).map(|t| m.triangle_area(t)).sum();
        assert!((area - (3.0 - 0.2)).abs() < 1e-12);
    }

    #[test]
    fn overlapping_holes_rejected() {
        let spec = DomainSpec {
            outer: Shape::Circle { center: [0.0, 0.0], radius: 1.0 },
            holes: vec![
                Shape::Circle { center: [0.2, 0.0], radius: 0.3 },
                Shape::Circle { center: [-0.2, 0.0], radius: 0.3 },
            ],
            target_h: 0.05,
        };
        let err = build_domain(&spec).unwrap_err();
        assert!(err.to_string().contains("overlap"), "{err}");
    }

    #[test]
    fn hole_outside_rejected() {
        let spec = DomainSpec {
            outer: Shape::Circle { center: [0.0, 0.0], radius: 1.0 },
            holes: vec![Shape::Circle { center: [0.9, 0.0], radius: 0.3 }],
            target_h: 0.05,
        };
        assert!(build_domain(&spec).unwrap_err().to_string().contains("strictly inside"));
    }

    #[test]
    fn coarse_h_rejected() {
        let spec = DomainSpec {
            outer: Shape::Circle { center: [0.0, 0.0], radius: 1.0 },
            holes: vec![
                Shape::Circle { center: [0.25, 0.0], radius: 0.2 },
                Shape::Circle { center: [-0.25, 0.0], radius: 0.2 },
            ],
            target_h: 0.3,
        };
        assert!(build_domain(&spec).unwrap_err().to_string().contains("too coarse"));
    }
}
