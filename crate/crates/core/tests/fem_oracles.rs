mod common;

use common::{annulus_oracle, rel_err, strip_mesh, strip_oracle};
use nalgebra::DMatrix;
use steklov_core::fem::{
    assemble_boundary_mass, full_pencil_spectrum, solve_steklov, solve_steklov_neumann, to_dense, DensitySpec,
};
use steklov_core::mesh::{build_domain, refine_uniform, DomainSpec};

#[test]
fn annulus_oracle_sanity() {
    let s = annulus_oracle(0.5, 6);
    assert_eq!(s[0], 0.0);
    assert!((s[1] - s[2]).abs() < 1e-14);
    assert!(s.windows(2).all(|w| w[0] <= w[1]));
    // large m: the circles decouple, σ ≈ m on the outer one and m/a on the inner
    let far = annulus_oracle(0.5, 60);
    assert!(far.iter().filter(|v| (*v - 10.0).abs() < 1e-3).count() == 2);
    assert!(far.iter().filter(|v| (*v - 20.0).abs() < 1e-3).count() == 2);
}

#[test]
fn strip_mixed_problem() {
    let mesh = refine_uniform(&strip_mesh(0.1)).unwrap();
    let s = solve_steklov_neumann(&mesh, &DensitySpec::uniform(&mesh), 3).unwrap();
    assert!(s.eigenvalues[0].abs() < 1e-10);
    for m in 1..=3 {
        let e = rel_err(s.eigenvalues[m], strip_oracle(m));
        assert!(e < 0.01, "m={m}: {} vs {}", s.eigenvalues[m], strip_oracle(m));
    }
}

#[test]
fn annulus_matches_fourier_modes() {
    let mesh = refine_uniform(&build_domain(&DomainSpec::annulus(0.5, 1.0, 0.08)).unwrap()).unwrap();
    let s = solve_steklov(&mesh, &DensitySpec::uniform(&mesh), 6).unwrap();
    let exact = annulus_oracle(0.5, 7);
    for k in 1..=6 {
        assert!(rel_err(s.eigenvalues[k], exact[k]) < 0.01, "k={k}: {} vs {}", s.eigenvalues[k], exact[k]);
    }
}

#[test]
fn reduced_and_full_pencils_agree() {
    for spec in [DomainSpec::disk(1.0, 0.3), DomainSpec::annulus(0.4, 1.0, 0.25)] {
        let mesh = build_domain(&spec).unwrap();
        let d = DensitySpec {
            gamma: (0..mesh.num_triangles()).map(|t| 1.0 + 0.5 * ((t * 7) % 3) as f64).collect(),
            rho: (0..mesh.boundary().len()).map(|e| 0.5 + ((e * 5) % 4) as f64).collect(),
        };
        let full = full_pencil_spectrum(&mesh, &d, true).unwrap();
        let k = full.len() - 1;
        let reduced = solve_steklov(&mesh, &d, k).unwrap();
        for (a, b) in reduced.eigenvalues.iter().zip(&full) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
        }
    }
}

#[test]
fn eigenvectors_are_boundary_orthonormal() {
    let mesh = build_domain(&DomainSpec::annulus(0.5, 1.0, 0.15)).unwrap();
    let d = DensitySpec::uniform(&mesh);
    let s = solve_steklov(&mesh, &d, 10).unwrap();
    let m = to_dense(&assemble_boundary_mass(&mesh, &d).unwrap());
    let u = DMatrix::from_fn(mesh.num_vertices(), s.eigenvectors.len(), |i, j| s.eigenvectors[j][i]);
    let gram = u.transpose() * m * &u;
    let residual = (gram - DMatrix::identity(11, 11)).amax();
    assert!(residual <= 1e-8, "residual {residual}");
}

#[test]
fn refinement_reduces_disk_error() {
    let coarse = build_domain(&DomainSpec::disk(1.0, 0.2)).unwrap();
    let fine = refine_uniform(&coarse).unwrap();
    let exact = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
    let a = solve_steklov(&coarse, &DensitySpec::uniform(&coarse), 6).unwrap();
    let b = solve_steklov(&fine, &DensitySpec::uniform(&fine), 6).unwrap();
    for k in 1..=6 {
        let (ea, eb) = ((a.eigenvalues[k] - exact[k - 1]).abs(), (b.eigenvalues[k] - exact[k - 1]).abs());
        assert!(eb < ea, "k={k}: {ea} -> {eb}");
    }
}

#[test]
fn strip_eigenfunction_is_separable() {
    // u_1 ∝ cos x cosh(1 − y): compare shapes after normalization
    let mesh = strip_mesh(0.1);
    let s = solve_steklov_neumann(&mesh, &DensitySpec::uniform(&mesh), 1).unwrap();
    let u = &s.eigenvectors[1];
    let exact: Vec<f64> = mesh.vertices().iter().map(|p| p[0].cos() * (1.0 - p[1]).cosh()).collect();
    let dot: f64 = u.iter().zip(&exact).map(|(a, b)| a * b).sum();
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let ne: f64 = exact.iter().map(|a| a * a).sum::<f64>().sqrt();
    assert!((dot.abs() / (nu * ne)) > 0.999);
}

