//! Regenerates the certificate fixtures in `fixtures/`.
//!
//! cargo run --release -p steklov-core --example gen_certificates [name…]
//! cargo run --release -p steklov-core --example gen_certificates reformat
//!
//! Each certificate comes from a search over rotation systems of K_n
//! (annealing, or backtracking over triangle sets for near-triangular maps),
//! then is relabelled so that the quoted faces carry their usual names.
//! Searches that fail are reported and leave no file behind.

use std::path::PathBuf;
use std::time::Instant;

use steklov_core::chromatic::search::{
    search_complete, search_one_long_face, search_triangulation, SearchOptions, SearchTarget,
};
use steklov_core::chromatic::{trace_faces, Claims, EmbeddingCertificate, Face, RotationSystem};

/// Chooses removed faces on a traced map and returns (perm old → new, faces).
type Picker = fn(usize, usize, &[Face]) -> Option<(Vec<usize>, Vec<usize>)>;

#[derive(Clone, Copy)]
enum Source {
    /// Annealing steps per seed.
    Anneal(usize),
    Triangulation,
    /// Triangles plus one face of the given length.
    LongFace(usize),
}

struct Job {
    name: &'static str,
    target: SearchTarget,
    p: usize,
    source: Source,
    seeds: u64,
    pick: Picker,
}

fn main() {
    let only: Vec<String> = std::env::args().skip(1).collect();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    if only.iter().any(|o| o == "reformat") {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            let cert = EmbeddingCertificate::load(&path).unwrap();
            std::fs::write(&path, cert.to_json().unwrap() + "\n").unwrap();
        }
        return;
    }

    // K_3 in the disk needs no search
    let k3 = RotationSystem::orientable(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
    let cert = EmbeddingCertificate::new(k3, vec![vec![0, 1, 2]]).with_claims(Claims { chi: 2, orientable: true, p: 1 });
    if only.is_empty() || only.iter().any(|o| o == "k3_disk") {
        write(&dir, "k3_disk", &cert);
    }

    let jobs = [
        job("k4_sphere_2", 4, 2, true, 2, Source::Anneal(20_000), 4, pick_cover),
        job("k5_mobius", 5, 1, false, 1, Source::Anneal(50_000), 8, pick_k5),
        job("k6_projective_3", 6, 1, false, 3, Source::Anneal(50_000), 8, pick_cover),
        job("k6_klein_2", 6, 0, false, 2, Source::Anneal(100_000), 8, pick_k6),
        job("k7_torus_3", 7, 0, true, 3, Source::Anneal(200_000), 8, pick_cover),
        job("k7_three_crosscaps_2", 7, -1, false, 2, Source::Anneal(200_000), 8, pick_cover),
        job("k8_two_handles_3", 8, -2, true, 3, Source::Anneal(1_000_000), 8, pick_k8_quad),
        job("k8_four_crosscaps_3", 8, -2, false, 3, Source::Anneal(1_000_000), 8, pick_k8_quad),
        job("k8_two_handles_2", 8, -2, true, 2, Source::Anneal(1_000_000), 64, pick_k8_two_quads),
        job("k9_five_crosscaps_3", 9, -3, false, 3, Source::Triangulation, 16, pick_k9),
        job("k9_three_handles_3", 9, -4, true, 3, Source::LongFace(6), 16, pick_cover),
        job("k10_seven_crosscaps_4", 10, -5, false, 4, Source::Triangulation, 16, pick_cover),
        job("k10_four_handles_3", 10, -6, true, 3, Source::LongFace(6), 16, pick_cover),
    ];
    for j in jobs.iter().filter(|j| only.is_empty() || only.iter().any(|o| o == j.name)) {
        let t = Instant::now();
        let seeds: Vec<u64> = (0..j.seeds).collect();
        let n = j.target.n;
        let fits = |rs: &RotationSystem| {
            let sig = steklov_core::chromatic::classify_surface(rs).unwrap();
            sig.chi == j.target.chi
                && sig.orientable == j.target.orientable
                && (j.pick)(n, j.p, &trace_faces(rs).unwrap()).is_some()
        };
        // backtracking sources: first seed that fits
        let found = match j.source {
            Source::Anneal(iterations) => {
                let opts = SearchOptions { iterations, start_temperature: 0.3, ..Default::default() };
                search_complete(&j.target, &opts, &seeds, |_, faces| (j.pick)(n, j.p, faces).is_some())
            }
            Source::Triangulation => {
                seeds.iter().find_map(|&seed| search_triangulation(n, seed, 2_000_000).filter(|rs| fits(rs)))
            }
            Source::LongFace(k) => seeds
                .iter()
                .find_map(|&seed| search_one_long_face(n, k, j.target.orientable, seed, 2_000_000).filter(|rs| fits(rs))),
        };
        let Some(rs) = found else {
            println!("{:<24} UNBUILT after {:.1?}", j.name, t.elapsed());
            continue;
        };
        let faces = trace_faces(&rs).unwrap();
        let (perm, chosen) = (j.pick)(n, j.p, &faces).unwrap();
        let rs = rs.relabel(&perm).unwrap();
        let removed = chosen.iter().map(|&f| faces[f].0.iter().map(|&v| perm[v]).collect()).collect();
        let claims = Claims { chi: j.target.chi, orientable: j.target.orientable, p: j.p };
        let cert = EmbeddingCertificate::new(rs, removed).with_claims(claims);
        let report = cert.report().unwrap();
        assert!(report.proper && report.claims_hold == Some(true), "{}: {report:?}", j.name);
        println!("{:<24} ok in {:.1?}", j.name, t.elapsed());
        write(&dir, j.name, &cert);
    }
}

#[allow(clippy::too_many_arguments)]
fn job(
    name: &'static str,
    n: usize,
    chi: i32,
    orientable: bool,
    p: usize,
    source: Source,
    seeds: u64,
    pick: Picker,
) -> Job {
    Job { name, target: SearchTarget { n, chi, orientable }, p, source, seeds, pick }
}

fn write(dir: &std::path::Path, name: &str, cert: &EmbeddingCertificate) {
    std::fs::write(dir.join(format!("{name}.json")), cert.to_json().unwrap() + "\n").unwrap();
}

/// Completes a partial relabelling `(old, new)` with the unused labels in
/// increasing order.
fn permutation(n: usize, fixed: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for &(old, new) in fixed {
        if perm[old] != usize::MAX || taken[new] {
            return None;
        }
        perm[old] = new;
        taken[new] = true;
    }
    let mut free = (0..n).filter(|&v| !taken[v]);
    for p in perm.iter_mut().filter(|p| **p == usize::MAX) {
        *p = free.next()?;
    }
    Some(perm)
}

fn covers(n: usize, faces: &[Face], ids: &[usize]) -> bool {
    (0..n).all(|v| ids.iter().any(|&f| faces[f].contains(v)))
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..m)
        .flat_map(|first| {
            combinations(m - first - 1, k - 1)
                .into_iter()
                .map(move |rest| std::iter::once(first).chain(rest.into_iter().map(|r| r + first + 1)).collect())
        })
        .collect()
}

/// First (lexicographic) set of `p` faces covering every vertex, no
/// relabelling.
fn pick_cover(n: usize, p: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    combinations(faces.len(), p).into_iter().find(|ids| covers(n, faces, ids)).map(|ids| ((0..n).collect(), ids))
}

/// Pentagon through all five vertices, and two triangles meeting in one
/// vertex labelled (1 2 3) and (1 4 5).
fn pick_k5(_: usize, _: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    let pent = faces.iter().position(|f| f.len() == 5 && (0..5).all(|v| f.contains(v)))?;
    let tris: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].len() == 3).collect();
    for &a in &tris {
        for &b in &tris {
            let (fa, fb) = (&faces[a].0, &faces[b].0);
            let common: Vec<usize> = fa.iter().copied().filter(|v| fb.contains(v)).collect();
            if a < b && common.len() == 1 {
                let x = common[0];
                let ra: Vec<usize> = fa.iter().copied().filter(|&v| v != x).collect();
                let rb: Vec<usize> = fb.iter().copied().filter(|&v| v != x).collect();
                let perm = permutation(5, &[(x, 0), (ra[0], 1), (ra[1], 2), (rb[0], 3), (rb[1], 4)])?;
                return Some((perm, vec![pent]));
            }
        }
    }
    None
}

/// Two vertex-disjoint triangles, labelled (1 2 5) and (3 4 6).
fn pick_k6(_: usize, _: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    let tris: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].len() == 3).collect();
    for &a in &tris {
        for &b in &tris {
            let (fa, fb) = (&faces[a].0, &faces[b].0);
            if a < b && fa.iter().all(|v| !fb.contains(v)) {
                let perm = permutation(6, &[(fa[0], 0), (fa[1], 1), (fa[2], 4), (fb[0], 2), (fb[1], 3), (fb[2], 5)])?;
                return Some((perm, vec![a, b]));
            }
        }
    }
    None
}

/// A quadrilateral labelled (5 6 2 8), a face through 1 and 3 and another
/// through 4 and 7.
fn pick_k8_quad(_: usize, _: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    for (q, fq) in faces.iter().enumerate() {
        let mut quad = fq.0.clone();
        quad.dedup();
        if fq.len() != 4 || {
            let mut s = quad.clone();
            s.sort_unstable();
            s.dedup();
            s.len() != 4
        } {
            continue;
        }
        let rest: Vec<usize> = (0..8).filter(|v| !quad.contains(v)).collect();
        let on = |f: usize, a: usize, b: usize| f != q && faces[f].contains(a) && faces[f].contains(b);
        for (x, y, z, w) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            let (a, b, c, d) = (rest[x], rest[y], rest[z], rest[w]);
            for fa in (0..faces.len()).filter(|&f| on(f, a, b)) {
                if let Some(fb) = (0..faces.len()).find(|&f| f != fa && on(f, c, d)) {
                    let fixed = [(quad[0], 4), (quad[1], 5), (quad[2], 1), (quad[3], 7), (a, 0), (b, 2), (c, 3), (d, 6)];
                    return Some((permutation(8, &fixed)?, vec![q, fa, fb]));
                }
            }
        }
    }
    None
}

/// Two vertex-disjoint quadrilaterals, labelled (1 3 5 7) and (2 4 6 8).
fn pick_k8_two_quads(_: usize, _: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    let quads: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].len() == 4).collect();
    for &a in &quads {
        for &b in &quads {
            let (fa, fb) = (&faces[a].0, &faces[b].0);
            if a < b && covers(8, faces, &[a, b]) {
                let mut fixed: Vec<(usize, usize)> = fa.iter().enumerate().map(|(i, &v)| (v, 2 * i)).collect();
                fixed.extend(fb.iter().enumerate().map(|(i, &v)| (v, 2 * i + 1)));
                return Some((permutation(8, &fixed)?, vec![a, b]));
            }
        }
    }
    None
}

/// Three vertex-disjoint triangles, labelled (1 2 9), (6 7 8) and (3 4 5).
fn pick_k9(_: usize, _: usize, faces: &[Face]) -> Option<(Vec<usize>, Vec<usize>)> {
    let tris: Vec<usize> = (0..faces.len()).filter(|&i| faces[i].len() == 3).collect();
    for ids in combinations(tris.len(), 3) {
        let ids: Vec<usize> = ids.iter().map(|&i| tris[i]).collect();
        if covers(9, faces, &ids) {
            let names = [[0, 1, 8], [5, 6, 7], [2, 3, 4]];
            let fixed: Vec<(usize, usize)> =
                ids.iter().zip(names).flat_map(|(&f, nm)| faces[f].0.iter().copied().zip(nm)).collect();
            return Some((permutation(9, &fixed)?, ids));
        }
    }
    None
}
