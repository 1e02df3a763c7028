#![allow(dead_code)]

use steklov_core::chromatic::SurfaceSignature;
use steklov_core::mesh::{build_domain, DomainSpec, Marker, Mesh};

/// Steklov eigenvalues of the annulus a < r < 1 with γ = ρ = 1, from the
/// separated solutions `(A r^m + B r^-m) cos mθ` (and `A + B ln r` for m = 0).
/// Each m ≥ 1 value is listed twice (cos and sin). Sorted, at least `count`.
pub fn annulus_oracle(a: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = 0;
    while out.len() < count + 4 {
        // rows: (u(a), u(1)) and (∂_ν u at a, ∂_ν u at 1) in terms of (A, B)
        let (vals, flux) = if m == 0 {
            ([[1.0, a.ln()], [1.0, 0.0]], [[0.0, -1.0 / a], [0.0, 1.0]])
        } else {
            let mf = m as f64;
            (
                [[a.powf(mf), a.powf(-mf)], [1.0, 1.0]],
                [[-mf * a.powf(mf - 1.0), mf * a.powf(-mf - 1.0)], [mf, -mf]],
            )
        };
        let d = mat_mul(flux, inverse(vals));
        let tr = d[0][0] + d[1][1];
        let det = d[0][0] * d[1][1] - d[0][1] * d[1][0];
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        for s in [(tr - disc) / 2.0, (tr + disc) / 2.0] {
            let copies = if m == 0 { 1 } else { 2 };
            out.extend(std::iter::repeat_n(s.max(0.0), copies));
        }
        m += 1;
    }
    out.sort_by(f64::total_cmp);
    out
}

fn inverse(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]]
}

fn mat_mul(x: [[f64; 2]; 2], y: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut z = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    z
}

/// Steklov on y = 0, Neumann elsewhere, for [0, π] × [0, 1]: σ_m = m tanh m.
pub fn strip_oracle(m: usize) -> f64 {
    let m = m as f64;
    m * m.tanh()
}

pub fn strip_mesh(h: f64) -> Mesh {
    let mesh = build_domain(&DomainSpec::rectangle(0.0, 0.0, std::f64::consts::PI, 1.0, h)).unwrap();
    mesh.mark_edges(|p, q| {
        Some(if p[1].abs() < 1e-12 && q[1].abs() < 1e-12 { Marker::Steklov } else { Marker::Neumann })
    })
    .unwrap()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

/// Relative chromatic numbers of small surfaces for p = 1..5; `None` marks
/// the open cases.
pub fn small_genus_table() -> Vec<(&'static str, SurfaceSignature, [Option<u32>; 5])> {
    let s = SurfaceSignature::sphere;
    vec![
        ("sphere", s(), [Some(3), Some(4), Some(4), Some(4), Some(4)]),
        ("projective", SurfaceSignature::projective_plane(), [Some(5), Some(5), Some(6), Some(6), Some(6)]),
        ("klein", SurfaceSignature::klein_bottle(), [Some(5), Some(6), Some(6), Some(6), Some(6)]),
        ("torus", SurfaceSignature::torus(), [Some(6), Some(6), Some(7), Some(7), Some(7)]),
        ("sum3P", SurfaceSignature::crosscaps(3), [Some(6), Some(7), Some(7), Some(7), Some(7)]),
        ("sum2T", SurfaceSignature::handles(2), [Some(7), Some(8), Some(8), Some(8), Some(8)]),
        ("sum4P", SurfaceSignature::crosscaps(4), [Some(7), None, Some(8), Some(8), Some(8)]),
        ("sum5P", SurfaceSignature::crosscaps(5), [Some(8), Some(8), Some(9), Some(9), Some(9)]),
        ("sum3T", SurfaceSignature::handles(3), [Some(8), None, Some(9), Some(9), Some(9)]),
        ("sum6P", SurfaceSignature::crosscaps(6), [Some(8), None, Some(9), Some(9), Some(9)]),
        ("sum7P", SurfaceSignature::crosscaps(7), [Some(9), Some(9), Some(9), Some(10), Some(10)]),
        ("sum4T", SurfaceSignature::handles(4), [Some(9), Some(9), Some(10), Some(10), Some(10)]),
        ("sum9P", SurfaceSignature::crosscaps(9), [Some(9), None, Some(10), Some(10), Some(10)]),
    ]
}
