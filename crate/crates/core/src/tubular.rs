//! Thin tubular neighbourhoods of planar graphs.
//!
//! Each graph vertex becomes a half-disk whose diameter is Steklov boundary,
//! each edge a strip of half-width ε joining the arcs of its two half-disks.
//! Everything else is Neumann. As ε → 0 the first n Steklov–Neumann
//! eigenvalues approach the spectrum of the graph Laplacian.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{element_stiffness, solve_steklov_neumann, DensitySpec};
use crate::graph::{graph_spectrum, MetricGraph};
use crate::linalg::SparseCholesky;
use crate::mesh::{
    lattice_points, point_segment_distance, segment_distance, segments_intersect, triangulate_loops, BoundaryLoop,
    Marker, Mesh, Point,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TubularParams {
    /// Strip half-width.
    pub epsilon: f64,
    /// Half-disk radius, unless `radii` is given.
    pub disk_radius: f64,
    pub radii: Option<Vec<f64>>,
    /// Vertex positions; falls back to the graph's layout, then to a regular
    /// polygon of side 2.
    pub layout: Option<Vec<Point>>,
    /// Outward normal of each diameter. By default it bisects the widest
    /// angular gap between the strips leaving the vertex.
    pub normals: Option<Vec<Point>>,
    /// Target mesh size.
    pub h: f64,
    /// Triangles across a strip; the effective mesh size is at most
    /// `2ε / strip_cells`.
    pub strip_cells: usize,
    /// Conductivity on the half-disks, `1/ε²` by default.
    pub disk_gamma: Option<f64>,
}

impl Default for TubularParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            disk_radius: 0.5,
            radii: None,
            layout: None,
            normals: None,
            h: 0.1,
            strip_cells: 4,
            disk_gamma: None,
        }
    }
}

impl TubularParams {
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..self.clone() }
    }

    pub fn effective_h(&self) -> f64 {
        self.h.min(2.0 * self.epsilon / self.strip_cells.max(1) as f64)
    }
}

/// Which piece of Ω a triangle belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    Disk(usize),
    Strip(usize),
}

#[derive(Debug, Clone)]
pub struct TubularDomain {
    pub mesh: Mesh,
    pub densities: DensitySpec,
    pub regions: Vec<Region>,
    /// Conductivity of each strip, in graph edge order.
    pub strip_gamma: Vec<f64>,
    pub disk_gamma: f64,
}

#[derive(Debug, Clone)]
struct Geometry {
    centers: Vec<Point>,
    radii: Vec<f64>,
    /// Angle of each diameter's outward normal.
    normal_angle: Vec<f64>,
    /// `(v, w)` and the direction angle of the strip seen from each end.
    strips: Vec<([usize; 2], [f64; 2])>,
    epsilon: f64,
}

impl Geometry {
    fn beta(&self, v: usize) -> f64 {
        (self.epsilon / self.radii[v]).asin()
    }

    /// Arc parameter in [0, 2π); the arc is [0, π], the diameter runs from π
    /// back to 0.
    fn phi(&self, v: usize, angle: f64) -> f64 {
        (angle - self.normal_angle[v] - PI / 2.0).rem_euclid(2.0 * PI)
    }

    fn point(&self, v: usize, phi: f64) -> Point {
        let t = self.normal_angle[v] + PI / 2.0 + phi;
        let (c, r) = (self.centers[v], self.radii[v]);
        [c[0] + r * t.cos(), c[1] + r * t.sin()]
    }

    /// Arc parameter of strip `s` at its end `end`.
    fn strip_phi(&self, s: usize, end: usize) -> f64 {
        let (ends, angles) = self.strips[s];
        self.phi(ends[end], angles[end])
    }
}

fn regular_polygon(n: usize) -> Vec<Point> {
    match n {
        1 => vec![[0.0, 0.0]],
        2 => vec![[-1.0, 0.0], [1.0, 0.0]],
        _ => {
            let r = 1.0 / (PI / n as f64).sin();
            (0..n)
                .map(|k| {
                    let t = PI / 2.0 + 2.0 * PI * k as f64 / n as f64;
                    [r * t.cos(), r * t.sin()]
                })
                .collect()
        }
    }
}

fn resolve_geometry(g: &MetricGraph, params: &TubularParams) -> Result<Geometry> {
    g.validate()?;
    let n = g.n;
    let eps = params.epsilon;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Geometry(format!("epsilon must be positive, got {eps}")));
    }
    if !(params.h.is_finite() && params.h > 0.0) || params.strip_cells == 0 {
        return Err(Error::Geometry("h and strip_cells must be positive".into()));
    }
    let centers = params
        .layout
        .clone()
        .or_else(|| g.layout.clone())
        .unwrap_or_else(|| regular_polygon(n));
    let radii = params.radii.clone().unwrap_or_else(|| vec![params.disk_radius; n]);
    if centers.len() != n || radii.len() != n {
        return Err(Error::Geometry("layout and radii must have one entry per vertex".into()));
    }
    for (v, &r) in radii.iter().enumerate() {
        if !(r.is_finite() && r > eps) {
            return Err(Error::Geometry(format!("vertex {v}: epsilon {eps} must be below the disk radius {r}")));
        }
    }
    for v in 0..n {
        for w in v + 1..n {
            let d = dist(centers[v], centers[w]);
            if d <= radii[v] + radii[w] {
                return Err(Error::Geometry(format!("disks of vertices {v} and {w} overlap")));
            }
        }
    }

    let strips: Vec<([usize; 2], [f64; 2])> = g
        .edges
        .iter()
        .map(|&(v, w, _)| {
            let (a, b) = (centers[v], centers[w]);
            let t = (b[1] - a[1]).atan2(b[0] - a[0]);
            ([v, w], [t, t + PI])
        })
        .collect();

    for (s, &([v, w], _)) in strips.iter().enumerate() {
        for u in 0..n {
            if u != v && u != w && point_segment_distance(centers[u], centers[v], centers[w]) <= radii[u] + eps {
                return Err(Error::Geometry(format!("strip {s} ({v},{w}) runs into the disk of vertex {u}")));
            }
        }
        for &([x, y], _) in strips.iter().skip(s + 1) {
            if [x, y].iter().any(|z| *z == v || *z == w) {
                continue;
            }
            let (a, b, c, d) = (centers[v], centers[w], centers[x], centers[y]);
            if segments_intersect(a, b, c, d) {
                return Err(Error::Geometry(format!("non-planar layout: strips ({v},{w}) and ({x},{y}) cross")));
            }
            if segment_distance(a, b, c, d) <= 2.0 * eps {
                return Err(Error::Geometry(format!("strips ({v},{w}) and ({x},{y}) overlap")));
            }
        }
    }

    let mut incident: Vec<Vec<f64>> = vec![Vec::new(); n];
    for &(ends, angles) in &strips {
        incident[ends[0]].push(angles[0]);
        incident[ends[1]].push(angles[1]);
    }
    let normal_angle = match &params.normals {
        Some(normals) => {
            if normals.len() != n {
                return Err(Error::Geometry("normals must have one entry per vertex".into()));
            }
            normals
                .iter()
                .enumerate()
                .map(|(v, p)| {
                    if p[0].hypot(p[1]) > 0.0 && p.iter().all(|c| c.is_finite()) {
                        Ok(p[1].atan2(p[0]))
                    } else {
                        Err(Error::Geometry(format!("normal of vertex {v} is not a direction")))
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => incident.iter().map(|a| widest_gap_bisector(a)).collect(),
    };

    let geo = Geometry { centers, radii, normal_angle, strips, epsilon: eps };
    for v in 0..n {
        let beta = geo.beta(v);
        let mut phis: Vec<f64> = incident[v].iter().map(|&a| geo.phi(v, a)).collect();
        phis.sort_by(f64::total_cmp);
        for &p in &phis {
            if p - beta <= ANGLE_CLEARANCE || p + beta >= PI - ANGLE_CLEARANCE {
                return Err(Error::Geometry(format!(
                    "vertex {v}: a strip meets the half-disk outside its arc"
                )));
            }
        }
        if phis.windows(2).any(|w| w[1] - w[0] <= 2.0 * beta + ANGLE_CLEARANCE) {
            return Err(Error::Geometry(format!("vertex {v}: strips overlap where they meet the disk")));
        }
    }
    Ok(geo)
}

const ANGLE_CLEARANCE: f64 = 1e-6;

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn widest_gap_bisector(angles: &[f64]) -> f64 {
    match angles {
        [] => PI / 2.0,
        [a] => a + PI,
        _ => {
            let mut a: Vec<f64> = angles.iter().map(|t| t.rem_euclid(2.0 * PI)).collect();
            a.sort_by(f64::total_cmp);
            let mut best = (f64::NEG_INFINITY, 0.0);
            for i in 0..a.len() {
                let next = if i + 1 < a.len() { a[i + 1] } else { a[0] + 2.0 * PI };
                let gap = next - a[i];
                if gap > best.0 + 1e-12 {
                    best = (gap, a[i] + gap / 2.0);
                }
            }
            best.1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    /// End of the diameter of a vertex, where its arc starts.
    DiamEnd(usize),
    /// Arrival on a disk along strip `s` at its end `e`.
    Arrive(usize, usize),
}

fn trace_loops(geo: &Geometry, h: f64) -> Vec<BoundaryLoop> {
    let n = geo.centers.len();
    // (leave parameter, strip, end) per vertex
    let mut leaves: Vec<Vec<(f64, usize, usize)>> = vec![Vec::new(); n];
    for (s, &(ends, _)) in geo.strips.iter().enumerate() {
        for e in 0..2 {
            let v = ends[e];
            leaves[v].push((geo.strip_phi(s, e) - geo.beta(v), s, e));
        }
    }
    leaves.iter_mut().for_each(|l| l.sort_by(|a, b| a.0.total_cmp(&b.0)));

    let mut starts: Vec<Node> = (0..n).map(Node::DiamEnd).collect();
    for s in 0..geo.strips.len() {
        starts.push(Node::Arrive(s, 0));
        starts.push(Node::Arrive(s, 1));
    }
    let mut visited: Vec<Node> = Vec::new();
    let mut loops = Vec::new();
    for start in starts {
        if visited.contains(&start) {
            continue;
        }
        let (mut points, mut markers) = (Vec::new(), Vec::new());
        let mut node = start;
        loop {
            visited.push(node);
            let (v, phi0) = match node {
                Node::DiamEnd(v) => (v, 0.0),
                Node::Arrive(s, e) => {
                    let v = geo.strips[s].0[e];
                    (v, geo.strip_phi(s, e) + geo.beta(v))
                }
            };
            node = match leaves[v].iter().find(|l| l.0 > phi0) {
                Some(&(phi1, s, e)) => {
                    arc(geo, v, phi0, phi1, h, &mut points, &mut markers);
                    let w = geo.strips[s].0[1 - e];
                    let q = geo.point(w, geo.strip_phi(s, 1 - e) + geo.beta(w));
                    line(geo.point(v, phi1), q, h, Marker::Neumann, &mut points, &mut markers);
                    Node::Arrive(s, 1 - e)
                }
                None => {
                    arc(geo, v, phi0, PI, h, &mut points, &mut markers);
                    line(geo.point(v, PI), geo.point(v, 0.0), h, Marker::Steklov, &mut points, &mut markers);
                    Node::DiamEnd(v)
                }
            };
            if node == start {
                break;
            }
        }
        loops.push(BoundaryLoop { points, markers });
    }
    loops
}

fn arc(geo: &Geometry, v: usize, a: f64, b: f64, h: f64, points: &mut Vec<Point>, markers: &mut Vec<Marker>) {
    let pieces = ((geo.radii[v] * (b - a) / h).ceil() as usize).max(1);
    for i in 0..pieces {
        points.push(geo.point(v, a + (b - a) * i as f64 / pieces as f64));
        markers.push(Marker::Neumann);
    }
}

fn line(p: Point, q: Point, h: f64, marker: Marker, points: &mut Vec<Point>, markers: &mut Vec<Marker>) {
    let pieces = ((dist(p, q) / h).ceil() as usize).max(1);
    for i in 0..pieces {
        let t = i as f64 / pieces as f64;
        points.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        markers.push(marker);
    }
}

/// Polylines along the circles where each strip meets a disk.
fn interfaces(geo: &Geometry, h: f64) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    for s in 0..geo.strips.len() {
        for e in 0..2 {
            let v = geo.strips[s].0[e];
            let (phi, beta) = (geo.strip_phi(s, e), geo.beta(v));
            let pieces = ((geo.radii[v] * 2.0 * beta / h).ceil() as usize).max(1);
            let (a, b) = (phi - beta, phi + beta);
            let mut poly: Vec<Point> =
                (0..pieces).map(|i| geo.point(v, a + (b - a) * i as f64 / pieces as f64)).collect();
            poly.push(geo.point(v, b));
            out.push(poly);
        }
    }
    out
}

/// Meshes Ω for `g` and sets its densities: γ = `disk_gamma` on the
/// half-disks, a per-strip γ giving the strip an end-to-end conductance of
/// `1/l`, and ρ = μ_v / (diameter length) on the diameter of vertex v.
pub fn build_tubular_domain(g: &MetricGraph, params: &TubularParams) -> Result<TubularDomain> {
    let geo = resolve_geometry(g, params)?;
    let h = params.effective_h();
    let disk_gamma = params.disk_gamma.unwrap_or(1.0 / (params.epsilon * params.epsilon));
    if !(disk_gamma.is_finite() && disk_gamma > 0.0) {
        return Err(Error::Geometry(format!("disk_gamma must be positive, got {disk_gamma}")));
    }

    let loops = trace_loops(&geo, h);
    let constraints = interfaces(&geo, h);
    let interior: Vec<Point> = lattice_points(&loops, h)
        .into_iter()
        .filter(|&p| {
            constraints.iter().all(|poly| poly.windows(2).all(|w| point_segment_distance(p, w[0], w[1]) >= 0.5 * h))
        })
        .collect();
    let mesh = triangulate_loops(&loops, interior, &constraints)?;

    let regions: Vec<Region> = (0..mesh.num_triangles())
        .map(|t| {
            let c = centroid(&mesh, t);
            if let Some(v) = (0..g.n).find(|&v| dist(c, geo.centers[v]) < geo.radii[v]) {
                return Region::Disk(v);
            }
            let s = (0..geo.strips.len())
                .min_by(|&a, &b| {
                    let da = strip_axis_distance(&geo, a, c);
                    da.total_cmp(&strip_axis_distance(&geo, b, c))
                })
                .expect("a triangle outside every disk lies in a strip");
            Region::Strip(s)
        })
        .collect();

    let mut strip_gamma = Vec::with_capacity(geo.strips.len());
    for (s, &(_, _, length)) in g.edges.iter().enumerate() {
        let conductance = strip_conductance(&mesh, &regions, &geo, s)?;
        strip_gamma.push(1.0 / (length * conductance));
    }

    let gamma = regions
        .iter()
        .map(|r| match *r {
            Region::Disk(_) => disk_gamma,
            Region::Strip(s) => strip_gamma[s],
        })
        .collect();
    let mut rho = Vec::with_capacity(mesh.boundary().len());
    for e in mesh.boundary() {
        if e.marker == Marker::Neumann {
            rho.push(0.0);
            continue;
        }
        let [a, b] = e.edge.map(|i| mesh.vertices()[i]);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        let v = (0..g.n)
            .find(|&v| point_segment_distance(mid, geo.point(v, PI), geo.point(v, 0.0)) < 1e-9)
            .ok_or_else(|| Error::Geometry("Steklov edge off every diameter".into()))?;
        rho.push(g.mu[v] / (2.0 * geo.radii[v]));
    }
    let densities = DensitySpec { gamma, rho };
    densities.validate(&mesh, false)?;
    Ok(TubularDomain { mesh, densities, regions, strip_gamma, disk_gamma })
}

fn centroid(mesh: &Mesh, t: usize) -> Point {
    let [a, b, c] = mesh.triangles()[t].map(|v| mesh.vertices()[v]);
    [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
}

fn strip_axis_distance(geo: &Geometry, s: usize, p: Point) -> f64 {
    let [v, w] = geo.strips[s].0;
    point_segment_distance(p, geo.centers[v], geo.centers[w])
}

/// Discrete conductance (γ = 1) of strip `s` between its two disk interfaces:
/// the energy of the discrete harmonic function equal to 0 on one end and 1
/// on the other.
fn strip_conductance(mesh: &Mesh, regions: &[Region], geo: &Geometry, s: usize) -> Result<f64> {
    let tris: Vec<usize> = (0..regions.len()).filter(|&t| regions[t] == Region::Strip(s)).collect();
    let [v, w] = geo.strips[s].0;
    let mut local = std::collections::BTreeMap::new();
    for &t in &tris {
        for &p in &mesh.triangles()[t] {
            let len = local.len();
            local.entry(p).or_insert(len);
        }
    }
    let on = |p: usize, u: usize| (dist(mesh.vertices()[p], geo.centers[u]) - geo.radii[u]).abs() < 1e-9;
    let n = local.len();
    let mut value: Vec<Option<f64>> = vec![None; n];
    for (&p, &i) in &local {
        if on(p, v) {
            value[i] = Some(0.0);
        } else if on(p, w) {
            value[i] = Some(1.0);
        }
    }
    if !value.contains(&Some(0.0)) || !value.contains(&Some(1.0)) {
        return Err(Error::Geometry(format!("strip {s} does not reach both disks")));
    }
    let mut k = DMatrix::zeros(n, n);
    for &t in &tris {
        let tri = mesh.triangles()[t];
        let el = element_stiffness(tri.map(|p| mesh.vertices()[p]), 1.0)?;
        let idx = tri.map(|p| local[&p]);
        for a in 0..3 {
            for b in 0..3 {
                k[(idx[a], idx[b])] += el[a][b];
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| value[i].is_none()).collect();
    let mut u = DVector::from_iterator(n, value.iter().map(|x| x.unwrap_or(0.0)));
    if !free.is_empty() {
        let mut entries = Vec::new();
        let mut rhs = DVector::zeros(free.len());
        for (a, &i) in free.iter().enumerate() {
            for (b, &j) in free.iter().enumerate() {
                if k[(i, j)] != 0.0 {
                    entries.push((a, b, k[(i, j)]));
                }
            }
            rhs[a] = -(0..n).filter(|&j| value[j].is_some()).map(|j| k[(i, j)] * u[j]).sum::<f64>();
        }
        let sol = SparseCholesky::factor(free.len(), &entries)?.solve_vector(&rhs);
        for (a, &i) in free.iter().enumerate() {
            u[i] = sol[a];
        }
    }
    Ok(u.dot(&(&k * &u)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub epsilon: f64,
    pub k: usize,
    pub sigma: f64,
    pub lambda_graph: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub epsilons: Vec<f64>,
    /// Graph eigenvalues λ_0 … λ_{k−1}.
    pub graph_eigenvalues: Vec<f64>,
    /// σ_0 … σ_{k−1} of Ω_ε, one list per ε.
    pub sigmas: Vec<Vec<f64>>,
    pub rows: Vec<StudyRow>,
}

impl ConvergenceStudy {
    /// |σ_i − λ_i| for each ε, in the order of `epsilons`.
    pub fn errors(&self, i: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.k == i).map(|r| r.abs_error).collect()
    }

    /// `epsilon,k,sigma,lambda_graph,abs_error` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,k,sigma,lambda_graph,abs_error\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:.16e},{},{:.16e},{:.16e},{:.16e}",
                r.epsilon, r.k, r.sigma, r.lambda_graph, r.abs_error
            );
        }
        out
    }
}

/// First `k` Steklov–Neumann eigenvalues of Ω_ε for each ε, against the
/// first `k` eigenvalues of the graph. Cases run on separate threads.
pub fn convergence_study(
    g: &MetricGraph,
    epsilons: &[f64],
    k: usize,
    base: &TubularParams,
) -> Result<ConvergenceStudy> {
    if k == 0 || k > g.n {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={}, got {k}", g.n)));
    }
    if epsilons.is_empty() || epsilons.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidArgument("epsilons must be positive".into()));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("epsilons must be strictly decreasing".into()));
    }
    let lambda = graph_spectrum(g)?.values[..k].to_vec();
    let sigmas: Vec<Result<Vec<f64>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = epsilons
            .iter()
            .map(|&eps| {
                scope.spawn(move || {
                    let dom = build_tubular_domain(g, &base.with_epsilon(eps))?;
                    Ok(solve_steklov_neumann(&dom.mesh, &dom.densities, k - 1)?.eigenvalues)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("study worker panicked")).collect()
    });
    let sigmas = sigmas.into_iter().collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (&epsilon, s) in epsilons.iter().zip(&sigmas) {
        for i in 0..k {
            rows.push(StudyRow {
                epsilon,
                k: i,
                sigma: s[i],
                lambda_graph: lambda[i],
                abs_error: (s[i] - lambda[i]).abs(),
            });
        }
    }
    Ok(ConvergenceStudy { epsilons: epsilons.to_vec(), graph_eigenvalues: lambda, sigmas, rows })
}
