use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Signed rotation system of a simple graph on vertices `0..n`.
///
/// `rotations[v]` is the cyclic order of the neighbours of `v` (the dart
/// `v → w` is named by its head `w`). An edge of sign −1 reverses the local
/// orientation when crossed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<usize>>,
    /// Only edges of sign −1 are stored, keyed `(min, max)`.
    twisted: BTreeMap<(usize, usize), ()>,
    /// `position[v * n + w]` is the index of `w` in `rotations[v]`.
    position: Vec<usize>,
}

/// A face as the cyclic sequence of vertices met along its boundary walk,
/// canonicalized over rotations and reversal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Face(pub Vec<usize>);

impl Face {
    pub fn canonical(cycle: &[usize]) -> Face {
        let n = cycle.len();
        let mut best: Option<Vec<usize>> = None;
        let mut rev = cycle.to_vec();
        rev.reverse();
        for seq in [cycle, &rev[..]] {
            for s in 0..n {
                let cand: Vec<usize> = seq[s..].iter().chain(&seq[..s]).copied().collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        Face(best.unwrap_or_default())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }
}

impl RotationSystem {
    pub fn new(rotations: Vec<Vec<usize>>, twisted_edges: &[(usize, usize)]) -> Result<Self> {
        let n = rotations.len();
        if n == 0 {
            return Err(Error::InvalidRotation("no vertices".into()));
        }
        let mut position = vec![usize::MAX; n * n];
        for (v, rot) in rotations.iter().enumerate() {
            for (i, &w) in rot.iter().enumerate() {
                if w >= n {
                    return Err(Error::InvalidRotation(format!("vertex {v} lists neighbour {w} out of range")));
                }
                if w == v {
                    return Err(Error::InvalidRotation(format!("self-loop at vertex {v}")));
                }
                if position[v * n + w] != usize::MAX {
                    return Err(Error::InvalidRotation(format!("vertex {v} lists neighbour {w} twice")));
                }
                position[v * n + w] = i;
            }
        }
        for v in 0..n {
            for &w in &rotations[v] {
                if position[w * n + v] == usize::MAX {
                    return Err(Error::InvalidRotation(format!("edge {v}-{w} has only one dart")));
                }
            }
        }
        let mut twisted = BTreeMap::new();
        for &(a, b) in twisted_edges {
            if a >= n || b >= n || position[a * n + b] == usize::MAX {
                return Err(Error::InvalidRotation(format!("signed pair {a}-{b} is not an edge")));
            }
            twisted.insert((a.min(b), a.max(b)), ());
        }
        Ok(Self { rotations, twisted, position })
    }

    /// All signs +1.
    pub fn orientable(rotations: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(rotations, &[])
    }

    pub fn num_vertices(&self) -> usize {
        self.rotations.len()
    }

    pub fn num_edges(&self) -> usize {
        self.rotations.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn sign(&self, a: usize, b: usize) -> i8 {
        if self.twisted.contains_key(&(a.min(b), a.max(b))) {
            -1
        } else {
            1
        }
    }

    pub fn twisted_edges(&self) -> Vec<(usize, usize)> {
        self.twisted.keys().copied().collect()
    }

    /// Sorted neighbour lists.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        self.rotations
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.sort_unstable();
                r
            })
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .rotations
            .iter()
            .enumerate()
            .flat_map(|(v, r)| r.iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.rotations[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Relabel vertices by `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.num_vertices();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument("relabelling is not a permutation".into()));
        }
        let mut rot = vec![Vec::new(); n];
        for (v, r) in self.rotations.iter().enumerate() {
            rot[perm[v]] = r.iter().map(|&w| perm[w]).collect();
        }
        let tw: Vec<_> = self.twisted.keys().map(|&(a, b)| (perm[a], perm[b])).collect();
        Self::new(rot, &tw)
    }

    fn pos(&self, v: usize, w: usize) -> usize {
        self.position[v * self.rotations.len() + w]
    }
}

/// Boundary walks of the embedding.
///
/// Walks run on the orientation double cover: a state is a dart with a local
/// orientation, crossing a twisted edge flips the orientation, and the next
/// dart is the successor (or, for reversed orientation, the predecessor) in
/// the rotation at the head. Each face lifts to two mirror walks; only the
/// first one met is kept.
pub fn trace_faces(rs: &RotationSystem) -> Result<Vec<Face>> {
    let n = rs.num_vertices();
    let mut offset = Vec::with_capacity(n + 1);
    offset.push(0);
    for r in &rs.rotations {
        offset.push(offset.last().unwrap() + r.len());
    }
    let darts = offset[n];
    // visited[2 * dart + (orientation == −1)]
    let mut visited = vec![false; 2 * darts];
    let state = |v: usize, i: usize, s: i8| 2 * (offset[v] + i) + usize::from(s < 0);
    let mut faces = Vec::new();
    for v0 in 0..n {
        for i0 in 0..rs.rotations[v0].len() {
            for s0 in [1i8, -1] {
                if visited[state(v0, i0, s0)] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut v, mut i, mut s) = (v0, i0, s0);
                loop {
                    let w = rs.rotations[v][i];
                    let id = state(v, i, s);
                    if visited[id] {
                        return Err(Error::InvalidRotation("face walk revisits a dart".into()));
                    }
                    visited[id] = true;
                    let s_next = s * rs.sign(v, w);
                    // mirror walk traverses w → v with the opposite orientation
                    let mirror = state(w, rs.pos(w, v), -s_next);
                    if visited[mirror] {
                        return Err(Error::InvalidRotation("face walk meets its own mirror".into()));
                    }
                    visited[mirror] = true;
                    cycle.push(v);
                    let d = rs.rotations[w].len();
                    let j = rs.pos(w, v);
                    let next = if s_next > 0 { (j + 1) % d } else { (j + d - 1) % d };
                    (v, i, s) = (w, next, s_next);
                    if (v, i, s) == (v0, i0, s0) {
                        break;
                    }
                }
                faces.push(Face::canonical(&cycle));
            }
        }
    }
    faces.sort();
    Ok(faces)
}

/// Whether vertex sign switches can make every edge sign +1.
pub fn is_orientable(rs: &RotationSystem) -> bool {
    let n = rs.num_vertices();
    let mut tau = vec![0i8; n];
    for root in 0..n {
        if tau[root] != 0 {
            continue;
        }
        tau[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &rs.rotations[v] {
                let want = tau[v] * rs.sign(v, w);
                if tau[w] == 0 {
                    tau[w] = want;
                    queue.push_back(w);
                } else if tau[w] != want {
                    return false;
                }
            }
        }
    }
    true
}
