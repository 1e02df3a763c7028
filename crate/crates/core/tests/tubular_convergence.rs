use steklov_core::fem::{cluster_multiplicities, solve_steklov_neumann};
use steklov_core::graph::MetricGraph;
use steklov_core::tubular::{build_tubular_domain, convergence_study, TubularParams};

#[test]
fn triangle_graph_converges() {
    let g = MetricGraph::complete(3).unwrap();
    let s = convergence_study(&g, &[0.2, 0.1, 0.05], 3, &TubularParams::default()).unwrap();
    assert_eq!(s.graph_eigenvalues.len(), 3);
    for i in 1..3 {
        let e = s.errors(i);
        assert!(e.windows(2).all(|w| w[1] < w[0]), "σ_{i}: {e:?}");
        assert!(e[2] < 0.05);
    }
    assert!(s.errors(0).iter().all(|e| *e < 1e-8));
    let last = s.sigmas.last().unwrap();
    let clusters = cluster_multiplicities(last, 0.15).unwrap();
    assert_eq!(clusters.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn two_vertex_path_approaches_two() {
    let g = MetricGraph::path(2, 1.0).unwrap();
    let s = convergence_study(&g, &[0.2, 0.1, 0.05], 2, &TubularParams::default()).unwrap();
    let e = s.errors(1);
    assert!(e.windows(2).all(|w| w[1] < w[0]), "{e:?}");
    assert!((s.sigmas[2][1] - 2.0).abs() < 0.05);
}

#[test]
fn edge_lengths_and_measures_reach_the_limit() {
    // path with lengths (1, 2) and measures (1, 2, 1)
    let g = MetricGraph::new(3, vec![(0, 1, 1.0), (1, 2, 2.0)]).unwrap().with_measures(vec![1.0, 2.0, 1.0]).unwrap();
    let s = convergence_study(&g, &[0.1, 0.05], 3, &TubularParams::default()).unwrap();
    for i in 1..3 {
        let e = s.errors(i);
        assert!(e[1] < e[0] && e[1] / s.graph_eigenvalues[i] < 0.02, "σ_{i}: {e:?}");
    }
}

#[test]
fn mesh_refinement_is_subordinate_to_epsilon() {
    let g = MetricGraph::complete(3).unwrap();
    let base = TubularParams { epsilon: 0.1, ..TubularParams::default() };
    let fine = TubularParams { strip_cells: 8, h: 0.05, ..base.clone() };
    let half = base.with_epsilon(0.05);
    let sigma = |p: &TubularParams| {
        let d = build_tubular_domain(&g, p).unwrap();
        solve_steklov_neumann(&d.mesh, &d.densities, 2).unwrap().eigenvalues
    };
    let (a, b, c) = (sigma(&base), sigma(&fine), sigma(&half));
    for k in 1..3 {
        assert!((a[k] - b[k]).abs() < (a[k] - c[k]).abs(), "k={k}: {a:?} {b:?} {c:?}");
    }
}

#[test]
fn unit_disk_conductivity_drifts_away() {
    // with γ = 1 on the half-disks the spreading resistance around each strip
    // end grows like ln(r/ε), so σ_1 moves away from the graph value
    let g = MetricGraph::complete(3).unwrap();
    let p = TubularParams { disk_gamma: Some(1.0), ..TubularParams::default() };
    let s = convergence_study(&g, &[0.2, 0.1, 0.05], 2, &p).unwrap();
    let e = s.errors(1);
    assert!(e.windows(2).all(|w| w[1] > w[0]), "{e:?}");
}

#[test]
fn study_is_deterministic() {
    let g = MetricGraph::complete(3).unwrap();
    let p = TubularParams::default();
    let a = convergence_study(&g, &[0.2, 0.1], 3, &p).unwrap().to_csv();
    let b = convergence_study(&g, &[0.2, 0.1], 3, &p).unwrap().to_csv();
    assert_eq!(a, b);
    assert!(a.starts_with("epsilon,k,sigma,lambda_graph,abs_error\n"));
}
