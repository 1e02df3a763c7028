//! Weighted graph Laplacians and Schrödinger pencils.
//!
//! `(Δf)(x) = Σ_{y∼x} (f(x) − f(y)) / l_xy`, and the eigenproblem
//! `(Δ + V) f = λ μ f` with vertex measures μ.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{generalized_symmetric_eigen, Eigenpairs};
use crate::mesh::Point;

/// Finite simple graph with edge lengths, vertex measures and a potential.
/// Vertices are `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct MetricGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    pub mu: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    /// Optional planar coordinates, used by the tubular construction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<Vec<Point>>,
}

#[derive(Deserialize)]
struct RawGraph {
    n: usize,
    #[serde(default)]
    edges: Vec<(usize, usize, f64)>,
    mu: Option<Vec<f64>>,
    #[serde(rename = "V")]
    v: Option<Vec<f64>>,
    layout: Option<Vec<Point>>,
}

impl TryFrom<RawGraph> for MetricGraph {
    type Error = Error;

    fn try_from(r: RawGraph) -> Result<Self> {
        let g = MetricGraph {
            n: r.n,
            edges: r.edges,
            mu: r.mu.unwrap_or_else(|| vec![1.0; r.n]),
            v: r.v.unwrap_or_else(|| vec![0.0; r.n]),
            layout: r.layout,
        };
        g.validate()?;
        Ok(g)
    }
}

impl MetricGraph {
    /// Unit measures, zero potential.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let g = Self { n, edges, mu: vec![1.0; n], v: vec![0.0; n], layout: None };
        g.validate()?;
        Ok(g)
    }

    /// K_n with unit lengths.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))).collect();
        Self::new(n, edges)
    }

    /// Path 0 – 1 – … – (n−1) with equal edge lengths.
    pub fn path(n: usize, length: f64) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i - 1, i, length)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect())
    }

    pub fn with_measures(mut self, mu: Vec<f64>) -> Result<Self> {
        self.mu = mu;
        self.validate()?;
        Ok(self)
    }

    pub fn with_potential(mut self, v: Vec<f64>) -> Result<Self> {
        self.v = v;
        self.validate()?;
        Ok(self)
    }

    pub fn with_layout(mut self, layout: Vec<Point>) -> Result<Self> {
        self.layout = Some(layout);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut seen = HashSet::new();
        for &(i, j, l) in &self.edges {
            if i >= self.n || j >= self.n {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) out of range for n={}", self.n)));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) has length {l}")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidGraph(format!("multiple edges between {i} and {j}")));
            }
        }
        if self.mu.len() != self.n || self.mu.iter().any(|m| !(m.is_finite() && *m > 0.0)) {
            return Err(Error::InvalidGraph("measures must be n positive values".into()));
        }
        if self.v.len() != self.n || self.v.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGraph("potential must be n finite values".into()));
        }
        if let Some(layout) = &self.layout {
            if layout.len() != self.n || layout.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::InvalidGraph("layout must give n finite points".into()));
            }
        }
        Ok(())
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j, _) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.neighbours();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `L_ij = −1/l_ij` on edges, diagonal makes rows sum to zero.
pub fn graph_laplacian(g: &MetricGraph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n, g.n);
    for &(i, j, len) in &g.edges {
        let w = 1.0 / len;
        l[(i, j)] -= w;
        l[(j, i)] -= w;
        l[(i, i)] += w;
        l[(j, j)] += w;
    }
    l
}

/// All eigenpairs of `(L + diag V) f = λ diag(μ) f`, ascending, with
/// `diag(μ)`-orthonormal eigenvectors in the columns.
pub fn graph_spectrum(g: &MetricGraph) -> Result<Eigenpairs> {
    g.validate()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut a = graph_laplacian(g);
    for (i, v) in g.v.iter().enumerate() {
        a[(i, i)] += v;
    }
    let b = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&g.mu));
    generalized_symmetric_eigen(&a, &b)
}

/// Colin de Verdière invariant of the complete graph, μ(K_n) = n − 1.
pub fn mu_reference(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("mu_reference needs n >= 2, got {n}")));
    }
    Ok(n - 1)
}
