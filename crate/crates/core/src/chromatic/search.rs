//! Simulated annealing over rotation systems of complete graphs.
//!
//! Used once to produce the frozen certificate fixtures; the energy is the
//! distance of the face count to the one forced by the target Euler
//! characteristic, plus one when the orientability is wrong.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rotation::{trace_faces, Face, RotationSystem};
use super::surface::classify_surface;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchTarget {
    /// Embed K_n.
    pub n: usize,
    /// Euler characteristic of the closed surface.
    pub chi: i32,
    pub orientable: bool,
}

impl SearchTarget {
    pub fn faces(&self) -> i64 {
        let n = self.n as i64;
        self.chi as i64 - n + n * (n - 1) / 2
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub iterations: usize,
    pub start_temperature: f64,
    pub end_temperature: f64,
    /// Weight of Σ (|f| − 3)² over faces, which rewards splitting long faces
    /// even when the face count does not change.
    pub shape_weight: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { iterations: 400_000, start_temperature: 1.5, end_temperature: 0.05, shape_weight: 0.0 }
    }
}

struct State {
    n: usize,
    rot: Vec<Vec<usize>>,
    pos: Vec<usize>,
    sign: Vec<i8>,
    visited: Vec<bool>,
}

impl State {
    fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut rot: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect();
        rot.iter_mut().for_each(|r| r.shuffle(rng));
        let mut s = Self { n, rot, pos: vec![0; n * n], sign: vec![1; n * n], visited: vec![false; 2 * n * n] };
        for v in 0..n {
            s.reindex(v);
        }
        s
    }

    fn reindex(&mut self, v: usize) {
        for (i, &w) in self.rot[v].iter().enumerate() {
            self.pos[v * self.n + w] = i;
        }
    }

    fn flip(&mut self, a: usize, b: usize) {
        self.sign[a * self.n + b] *= -1;
        self.sign[b * self.n + a] *= -1;
    }

    /// Same walk as `trace_faces`, counting only. Also returns Σ (|f| − 3)².
    fn count_faces(&mut self) -> (i64, i64) {
        let n = self.n;
        let d = n - 1;
        self.visited.iter_mut().for_each(|x| *x = false);
        let state = |v: usize, w: usize, s: i8| 2 * (v * n + w) + usize::from(s < 0);
        let mut faces = 0;
        let mut excess = 0;
        for v0 in 0..n {
            for i0 in 0..d {
                for s0 in [1i8, -1] {
                    let w0 = self.rot[v0][i0];
                    if self.visited[state(v0, w0, s0)] {
                        continue;
                    }
                    faces += 1;
                    let mut len = 0i64;
                    let (mut v, mut i, mut s) = (v0, i0, s0);
                    loop {
                        len += 1;
                        let w = self.rot[v][i];
                        self.visited[state(v, w, s)] = true;
                        let s2 = s * self.sign[v * n + w];
                        self.visited[state(w, v, -s2)] = true;
                        let j = self.pos[w * n + v];
                        let next = if s2 > 0 { (j + 1) % d } else { (j + d - 1) % d };
                        (v, i, s) = (w, next, s2);
                        if (v, i, s) == (v0, i0, s0) {
                            break;
                        }
                    }
                    excess += (len - 3) * (len - 3);
                }
            }
        }
        (faces, excess)
    }

    fn orientable(&self) -> bool {
        // on K_n, switching classes are decided by triangles through vertex 0
        let n = self.n;
        (1..n).all(|a| {
            (a + 1..n).all(|b| self.sign[a * n + b] * self.sign[a] * self.sign[b] == 1)
        })
    }

    fn to_rotation_system(&self) -> RotationSystem {
        let n = self.n;
        let tw: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| self.sign[a * n + b] < 0).collect();
        RotationSystem::new(self.rot.clone(), &tw).expect("search state is a valid rotation system")
    }
}

/// (energy, on target surface)
fn energy(st: &mut State, target: &SearchTarget, shape_weight: f64) -> (f64, bool) {
    let (f, excess) = st.count_faces();
    let miss = (f - target.faces()).abs() + i64::from(st.orientable() != target.orientable);
    (miss as f64 + shape_weight * excess as f64, miss == 0)
}

/// One annealing run from a seeded random start. Returns the first embedding
/// on the target surface that `accept` approves.
pub fn anneal_complete<F>(target: &SearchTarget, options: &SearchOptions, seed: u64, accept: F) -> Option<RotationSystem>
where
    F: Fn(&RotationSystem, &[Face]) -> bool,
{
    let n = target.n;
    if n < 3 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = State::random(n, &mut rng);
    if !target.orientable {
        // start away from the orientable class
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.5) {
                    st.flip(a, b);
                }
            }
        }
    }
    let (mut e, mut hit) = energy(&mut st, target, options.shape_weight);
    let ratio = (options.end_temperature / options.start_temperature).powf(1.0 / options.iterations.max(1) as f64);
    let mut t = options.start_temperature;
    for _ in 0..options.iterations {
        if hit {
            let rs = st.to_rotation_system();
            let faces = trace_faces(&rs).ok()?;
            let sig = classify_surface(&rs).ok()?;
            if sig.chi == target.chi && sig.orientable == target.orientable && accept(&rs, &faces) {
                return Some(rs);
            }
        }
        let v = rng.gen_range(0..n);
        let flip = !target.orientable && rng.gen_bool(0.25);
        let (i, j, w) = if flip {
            let w = (v + rng.gen_range(1..n)) % n;
            st.flip(v, w);
            (0, 0, w)
        } else {
            let i = rng.gen_range(0..n - 1);
            let j = (i + rng.gen_range(1..n - 1)) % (n - 1);
            st.rot[v].swap(i, j);
            st.reindex(v);
            (i, j, 0)
        };
        let (e2, hit2) = energy(&mut st, target, options.shape_weight);
        let accept_move = e2 <= e || rng.gen::<f64>() < (-(e2 - e) / t).exp();
        if accept_move {
            (e, hit) = (e2, hit2);
        } else if flip {
            st.flip(v, w);
        } else {
            st.rot[v].swap(i, j);
            st.reindex(v);
        }
        t *= ratio;
    }
    None
}

/// Runs every seed on its own thread; the lexicographically least successful
/// rotation system (by rotations, then twisted edges) wins, so the result does
/// not depend on scheduling.
pub fn search_complete<F>(target: &SearchTarget, options: &SearchOptions, seeds: &[u64], accept: F) -> Option<RotationSystem>
where
    F: Fn(&RotationSystem, &[Face]) -> bool + Sync,
{
    let accept = &accept;
    let found: Vec<RotationSystem> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            seeds.iter().map(|&seed| scope.spawn(move || anneal_complete(target, options, seed, accept))).collect();
        handles.into_iter().filter_map(|h| h.join().ok().flatten()).collect()
    });
    found.into_iter().min_by(|a, b| {
        (a.rotations(), a.twisted_edges()).cmp(&(b.rotations(), b.twisted_edges()))
    })
}

/// Triangular embedding of K_n found by backtracking over triangle sets:
/// every edge lies in exactly two triangles and every vertex link closes
/// into one cycle through all neighbours. Candidate order is shuffled by
/// `seed`; gives up after `node_limit` search nodes.
pub fn search_triangulation(n: usize, seed: u64, node_limit: usize) -> Option<RotationSystem> {
    if n < 4 {
        return None;
    }
    let adj = (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect();
    let tris = Triangulator::new(adj, false, seed).run(&[], node_limit)?;
    triangles_to_rotation(n, &tris)
}

/// Embedding of K_n whose faces are triangles plus one face of length `k`
/// through vertices `0..k`. An apex joined to `0..k` turns the long face into
/// `k` triangles; the apex is dropped from the triangulation found. With
/// `orientable` the triangles are kept coherently oriented.
pub fn search_one_long_face(n: usize, k: usize, orientable: bool, seed: u64, node_limit: usize) -> Option<RotationSystem> {
    if n < 4 || k < 4 || k > n {
        return None;
    }
    let apex = n;
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| (0..n).filter(|&w| w != v).collect()).collect();
    for v in adj.iter_mut().take(k) {
        v.push(apex);
    }
    adj.push((0..k).collect());
    let fan: Vec<[usize; 3]> = (0..k).map(|i| [apex, i, (i + 1) % k]).collect();
    let tris = Triangulator::new(adj, orientable, seed).run(&fan, node_limit)?;
    let full = triangles_to_rotation(n + 1, &tris)?;
    let rot: Vec<Vec<usize>> =
        full.rotations()[..n].iter().map(|r| r.iter().copied().filter(|&w| w != apex).collect()).collect();
    let tw: Vec<_> = full.twisted_edges().into_iter().filter(|&(a, b)| a != apex && b != apex).collect();
    RotationSystem::new(rot, &tw).ok()
}

struct Triangulator {
    n: usize,
    adj: Vec<bool>,
    deg: Vec<usize>,
    /// Triangles on each edge, `count[a * n + b]`.
    count: Vec<u8>,
    /// Directed edges already used by a chosen triangle (oriented mode).
    used: Vec<bool>,
    oriented: bool,
    /// Link of each vertex as a set of paths: `end[v * n + u]` is the other
    /// end of the path through `u` in link(v), or `u` itself if isolated.
    end: Vec<usize>,
    link_deg: Vec<u8>,
    link_edges: Vec<usize>,
    chosen: Vec<[usize; 3]>,
    order: Vec<usize>,
}

impl Triangulator {
    fn new(adjacency: Vec<Vec<usize>>, oriented: bool, seed: u64) -> Self {
        let n = adjacency.len();
        let mut adj = vec![false; n * n];
        for (v, nb) in adjacency.iter().enumerate() {
            for &w in nb {
                adj[v * n + w] = true;
            }
        }
        let end = (0..n * n).map(|i| i % n).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self {
            n,
            adj,
            deg: adjacency.iter().map(Vec::len).collect(),
            count: vec![0; n * n],
            used: vec![false; n * n],
            oriented,
            end,
            link_deg: vec![0; n * n],
            link_edges: vec![0; n],
            chosen: vec![],
            order,
        }
    }

    fn run(mut self, fixed: &[[usize; 3]], node_limit: usize) -> Option<Vec<[usize; 3]>> {
        for &t in fixed {
            if !self.fits(t) {
                return None;
            }
            self.push(t);
        }
        let mut nodes = 0;
        self.solve(&mut nodes, node_limit).then_some(self.chosen)
    }

    /// Adding link edge (a, b) to link(v) keeps it a union of paths, or
    /// closes the one cycle through every neighbour.
    fn link_ok(&self, v: usize, a: usize, b: usize) -> bool {
        let n = self.n;
        if self.link_deg[v * n + a] >= 2 || self.link_deg[v * n + b] >= 2 {
            return false;
        }
        if self.end[v * n + a] == b {
            return self.link_edges[v] + 1 == self.deg[v];
        }
        true
    }

    fn fits(&self, tri: [usize; 3]) -> bool {
        let n = self.n;
        let [a, b, c] = tri;
        let edges = [(a, b), (b, c), (c, a)];
        edges.iter().all(|&(x, y)| self.adj[x * n + y] && self.count[x * n + y] < 2)
            && (!self.oriented || edges.iter().all(|&(x, y)| !self.used[x * n + y]))
            && self.link_ok(a, b, c)
            && self.link_ok(b, a, c)
            && self.link_ok(c, a, b)
            && !self.chosen.iter().any(|t| {
                let mut s = *t;
                s.sort_unstable();
                let mut u = tri;
                u.sort_unstable();
                s == u
            })
    }

    /// Returns the path ends before the update, for undo.
    fn link_add(&mut self, v: usize, a: usize, b: usize) -> (usize, usize) {
        let n = self.n;
        let (ea, eb) = (self.end[v * n + a], self.end[v * n + b]);
        self.link_deg[v * n + a] += 1;
        self.link_deg[v * n + b] += 1;
        self.link_edges[v] += 1;
        if ea != b {
            self.end[v * n + ea] = eb;
            self.end[v * n + eb] = ea;
        }
        (ea, eb)
    }

    fn link_remove(&mut self, v: usize, a: usize, b: usize, (ea, eb): (usize, usize)) {
        let n = self.n;
        self.link_deg[v * n + a] -= 1;
        self.link_deg[v * n + b] -= 1;
        self.link_edges[v] -= 1;
        if ea != b {
            self.end[v * n + ea] = a;
            self.end[v * n + eb] = b;
            self.end[v * n + a] = ea;
            self.end[v * n + b] = eb;
        }
    }

    fn mark(&mut self, tri: [usize; 3], on: bool) {
        let n = self.n;
        let [a, b, c] = tri;
        for (x, y) in [(a, b), (b, c), (c, a)] {
            if on {
                self.count[x * n + y] += 1;
            } else {
                self.count[x * n + y] -= 1;
            }
            self.count[y * n + x] = self.count[x * n + y];
            self.used[x * n + y] = on;
        }
    }

    fn push(&mut self, tri: [usize; 3]) -> [(usize, usize); 3] {
        let [a, b, c] = tri;
        let undo = [self.link_add(a, b, c), self.link_add(b, a, c), self.link_add(c, a, b)];
        self.mark(tri, true);
        self.chosen.push(tri);
        undo
    }

    fn pop(&mut self, undo: [(usize, usize); 3]) {
        let [a, b, c] = self.chosen.pop().unwrap();
        self.mark([a, b, c], false);
        self.link_remove(c, a, b, undo[2]);
        self.link_remove(b, a, c, undo[1]);
        self.link_remove(a, b, c, undo[0]);
    }

    fn candidates(&self, a: usize, b: usize) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::new();
        for &c in &self.order {
            if c == a || c == b || !self.adj[a * n + c] || !self.adj[b * n + c] {
                continue;
            }
            if !self.oriented || self.count[a * n + b] == 0 {
                out.push([a, b, c]);
                if self.oriented {
                    out.push([b, a, c]);
                }
            } else if self.used[a * n + b] {
                out.push([b, a, c]);
            } else {
                out.push([a, b, c]);
            }
        }
        out.retain(|&t| self.fits(t));
        out
    }

    fn solve(&mut self, nodes: &mut usize, limit: usize) -> bool {
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        let n = self.n;
        // most constrained unfinished edge
        let mut best: Option<Vec<[usize; 3]>> = None;
        for (ia, &a) in self.order.iter().enumerate() {
            for &b in &self.order[ia + 1..] {
                if !self.adj[a * n + b] || self.count[a * n + b] == 2 {
                    continue;
                }
                let cands = self.candidates(a, b);
                if cands.is_empty() {
                    return false;
                }
                if best.as_ref().is_none_or(|bc| cands.len() < bc.len()) {
                    best = Some(cands);
                }
            }
        }
        let Some(cands) = best else {
            return true;
        };
        for tri in cands {
            let undo = self.push(tri);
            if self.solve(nodes, limit) {
                return true;
            }
            self.pop(undo);
        }
        false
    }
}

/// Signed rotation system whose faces are the given triangles. The rotation
/// at `v` follows its link cycle; an edge is twisted when the rotations at
/// its ends run the same way around it.
fn triangles_to_rotation(n: usize, tris: &[[usize; 3]]) -> Option<RotationSystem> {
    let mut link = vec![vec![Vec::new(); n]; n];
    for &[a, b, c] in tris {
        for (v, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
            link[v][x].push(y);
            link[v][y].push(x);
        }
    }
    let mut rot = Vec::with_capacity(n);
    for lk in &link {
        let deg = lk.iter().filter(|l| !l.is_empty()).count();
        let start = lk.iter().position(|l| !l.is_empty())?;
        let mut cyc = vec![start];
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let next = *lk[cur].iter().find(|&&w| w != prev)?;
            if next == start {
                break;
            }
            cyc.push(next);
            (prev, cur) = (cur, next);
            if cyc.len() > deg {
                return None;
            }
        }
        if cyc.len() != deg {
            return None;
        }
        rot.push(cyc);
    }
    let at = |v: usize, w: usize| rot[v].iter().position(|&x| x == w).unwrap();
    let mut twisted = Vec::new();
    for u in 0..n {
        for &v in rot[u].iter().filter(|&&v| v > u) {
            // coherent: x, v, y around u and y, u, x around v
            let du = rot[u].len();
            let x = rot[u][(at(u, v) + du - 1) % du];
            let dv = rot[v].len();
            if rot[v][(at(v, u) + 1) % dv] != x {
                twisted.push((u, v));
            }
        }
    }
    RotationSystem::new(rot, &twisted).ok()
}
