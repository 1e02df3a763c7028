use steklov_core::fem::{solve_steklov, DensitySpec};
use steklov_core::mesh::{build_domain, refine_uniform, DomainSpec};
use steklov_core::nodal::{boundary_contact_check, courant_check, nodal_domains, DEFAULT_ZERO_TOL};

fn check(spec: DomainSpec, refine: bool) -> Vec<usize> {
    let mut mesh = build_domain(&spec).unwrap();
    if refine {
        mesh = refine_uniform(&mesh).unwrap();
    }
    let s = solve_steklov(&mesh, &DensitySpec::uniform(&mesh), 8).unwrap();
    let mut counts = Vec::new();
    for (k, u) in s.eigenvectors.iter().enumerate() {
        let d = nodal_domains(&mesh, u, DEFAULT_ZERO_TOL).unwrap();
        assert!(courant_check(&d, k), "k={k}: {} domains", d.num_domains());
        assert!(boundary_contact_check(&d, &mesh), "k={k}: interior domain");
        counts.push(d.num_domains());
    }
    counts
}

#[test]
fn disk_eigenfunctions() {
    let counts = check(DomainSpec::disk(1.0, 0.1), false);
    // r^m cos mθ has 2m sectors
    assert_eq!(counts, vec![1, 2, 2, 4, 4, 6, 6, 8, 8]);
}

#[test]
fn disk_eigenfunctions_refined() {
    check(DomainSpec::disk(1.0, 0.2), true);
}

#[test]
fn annulus_eigenfunctions() {
    let counts = check(DomainSpec::annulus(0.5, 1.0, 0.1), false);
    assert_eq!(counts[0], 1);
    assert_eq!(counts[1], 2);
}

#[test]
fn off_centre_annulus_eigenfunctions() {
    let spec = DomainSpec {
        outer: steklov_core::mesh::Shape::Circle { center: [0.0, 0.0], radius: 1.0 },
        holes: vec![steklov_core::mesh::Shape::Circle { center: [0.3, 0.1], radius: 0.3 }],
        target_h: 0.1,
    };
    check(spec, false);
}
