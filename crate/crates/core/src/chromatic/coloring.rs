use serde::Serialize;

use super::surface::{chr0_bounds, SurfaceSignature};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Coloring {
    /// Color of each vertex, in `0..c`.
    Colored { colors: Vec<usize>, used: usize },
    /// Every color in `0..c` is taken by an already colored neighbour.
    Blocked { vertex: usize },
}

impl Coloring {
    pub fn is_colored(&self) -> bool {
        matches!(self, Coloring::Colored { .. })
    }
}

/// Min-degree elimination followed by greedy coloring in reverse order.
///
/// Vertices are removed one at a time, always a vertex of least remaining
/// degree (lowest index on ties); they are then colored in reverse removal
/// order with the smallest color unused by their neighbours.
pub fn greedy_color(adjacency: &[Vec<usize>], c: usize) -> Result<Coloring> {
    let n = adjacency.len();
    if c == 0 {
        return Err(Error::InvalidArgument("at least one color is needed".into()));
    }
    for (v, nb) in adjacency.iter().enumerate() {
        for &w in nb {
            if w >= n || w == v || !adjacency[w].contains(&v) {
                return Err(Error::InvalidGraph(format!("adjacency of vertex {v} is not simple and symmetric")));
            }
        }
        let mut s = nb.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != nb.len() {
            return Err(Error::InvalidGraph(format!("repeated neighbour at vertex {v}")));
        }
    }

    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !removed[v]).min_by_key(|&v| (degree[v], v)).unwrap();
        removed[v] = true;
        order.push(v);
        for &w in &adjacency[v] {
            if !removed[w] {
                degree[w] -= 1;
            }
        }
    }

    let mut colors = vec![usize::MAX; n];
    let mut taken = vec![false; c];
    for &v in order.iter().rev() {
        taken.iter_mut().for_each(|t| *t = false);
        for &w in &adjacency[v] {
            if colors[w] < c {
                taken[colors[w]] = true;
            }
        }
        match taken.iter().position(|t| !t) {
            Some(col) => colors[v] = col,
            None => return Ok(Coloring::Blocked { vertex: v }),
        }
    }
    let used = colors.iter().max().map_or(0, |m| m + 1);
    Ok(Coloring::Colored { colors, used })
}

/// Greedy coloring with the number of colors allowed by the upper bound for
/// graphs properly embedded in `closed` minus `p` disks.
pub fn color_on_surface(adjacency: &[Vec<usize>], closed: &SurfaceSignature, p: usize) -> Result<Coloring> {
    let (_, upper) = chr0_bounds(closed, p)?;
    greedy_color(adjacency, upper as usize)
}

pub fn is_proper_coloring(adjacency: &[Vec<usize>], colors: &[usize]) -> bool {
    colors.len() == adjacency.len()
        && adjacency.iter().enumerate().all(|(v, nb)| nb.iter().all(|&w| colors[v] != colors[w]))
}

/// Neighbour lists of the complete graph K_n.
pub fn complete_adjacency(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect()
}
