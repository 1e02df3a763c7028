//! Browser front end. Each exported function returns a JSON string that
//! `www/index.js` draws; the `*_json` functions behind them are plain Rust so
//! they can be tested natively.

use serde_json::{json, Value};
use steklov_core::chromatic::{chr0_bounds, chr0_exact, chr_closed, SurfaceSignature};
use steklov_core::fem::{cluster_multiplicities, solve_steklov, solve_steklov_neumann};
use steklov_core::graph::{graph_spectrum, MetricGraph};
use steklov_core::mesh::{build_domain, DomainSpec, Mesh};
use steklov_core::nodal::{boundary_contact_check, courant_check, nodal_domains, DEFAULT_ZERO_TOL};
use steklov_core::tubular::{build_tubular_domain, TubularParams};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn mesh_value(mesh: &Mesh) -> Value {
    json!({ "vertices": mesh.vertices(), "triangles": mesh.triangles() })
}

/// Steklov modes of the unit disk or of the annulus `inner < r < 1`, with
/// the nodal domains of each eigenfunction.
pub fn modes_json(shape: &str, inner: f64, h: f64, k: usize) -> Result<String, String> {
    if !(0.04..=0.5).contains(&h) {
        return Err(format!("h = {h} is outside [0.04, 0.5]"));
    }
    let spec = match shape {
        "disk" => DomainSpec::disk(1.0, h),
        "annulus" if inner > 0.05 && inner < 0.95 => DomainSpec::annulus(inner, 1.0, h),
        "annulus" => return Err(format!("inner radius {inner} is outside (0.05, 0.95)")),
        _ => return Err(format!("unknown shape '{shape}'")),
    };
    let mesh = build_domain(&spec).map_err(err)?;
    let s = solve_steklov(&mesh, &steklov_core::fem::DensitySpec::uniform(&mesh), k).map_err(err)?;
    let clusters = cluster_multiplicities(&s.eigenvalues, 1e-2).map_err(err)?;
    let mut modes = Vec::new();
    for (i, (sigma, u)) in s.eigenvalues.iter().zip(&s.eigenvectors).enumerate() {
        let d = nodal_domains(&mesh, u, DEFAULT_ZERO_TOL).map_err(err)?;
        modes.push(json!({
            "k": i,
            "sigma": sigma,
            "values": u,
            "labels": d.domain_labels,
            "domains": d.num_domains(),
            "courant": courant_check(&d, i),
            "boundary_contact": boundary_contact_check(&d, &mesh),
        }));
    }
    let clusters: Vec<Value> = clusters.iter().map(|c| json!([c.value, c.multiplicity])).collect();
    Ok(json!({ "mesh": mesh_value(&mesh), "clusters": clusters, "modes": modes }).to_string())
}

/// Tubular domains around K_3 for decreasing ε, one case after another
/// (no threads in the browser). The mesh and σ_1 eigenfunction of the last
/// case come along for drawing.
pub fn tubular_json(epsilons: &[f64], h: f64) -> Result<String, String> {
    if epsilons.is_empty() || epsilons.iter().any(|e| !(*e >= 0.02 && *e <= 0.3)) {
        return Err("each ε must lie in [0.02, 0.3]".into());
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err("ε must be strictly decreasing".into());
    }
    if !(0.02..=0.3).contains(&h) {
        return Err(format!("h = {h} is outside [0.02, 0.3]"));
    }
    let g = MetricGraph::complete(3).map_err(err)?;
    let lambda = graph_spectrum(&g).map_err(err)?.values;
    let base = TubularParams { h, ..TubularParams::default() };
    let mut rows = Vec::new();
    let mut last = None;
    for &eps in epsilons {
        let dom = build_tubular_domain(&g, &base.with_epsilon(eps)).map_err(err)?;
        let s = solve_steklov_neumann(&dom.mesh, &dom.densities, 2).map_err(err)?;
        let errors: Vec<f64> = (0..3).map(|i| (s.eigenvalues[i] - lambda[i]).abs()).collect();
        rows.push(json!({ "epsilon": eps, "sigma": &s.eigenvalues, "error": errors }));
        last = Some(json!({ "mesh": mesh_value(&dom.mesh), "values": &s.eigenvectors[1] }));
    }
    Ok(json!({ "lambda": lambda, "rows": rows, "last": last }).to_string())
}

fn table_surfaces() -> Vec<SurfaceSignature> {
    let mut out = vec![
        SurfaceSignature::sphere(),
        SurfaceSignature::projective_plane(),
        SurfaceSignature::klein_bottle(),
        SurfaceSignature::torus(),
    ];
    for (k, g) in [(3, 0), (0, 2), (4, 0), (5, 0), (0, 3), (6, 0), (7, 0), (0, 4), (9, 0)] {
        out.push(if g > 0 { SurfaceSignature::handles(g) } else { SurfaceSignature::crosscaps(k) });
    }
    out
}

/// Relative chromatic numbers for `p = 1..=max_p`; open cells carry their
/// two candidate values.
pub fn chromatic_json(max_p: usize) -> Result<String, String> {
    if !(1..=12).contains(&max_p) {
        return Err(format!("p must lie in 1..=12, got {max_p}"));
    }
    let mut rows = Vec::new();
    for sig in table_surfaces() {
        let mut cells = Vec::new();
        for p in 1..=max_p {
            let (lower, upper) = chr0_bounds(&sig, p).map_err(err)?;
            cells.push(json!({ "p": p, "lower": lower, "upper": upper, "exact": chr0_exact(&sig, p).map_err(err)? }));
        }
        rows.push(json!({
            "surface": sig.to_string(),
            "chi": sig.chi,
            "orientable": sig.orientable,
            "chr": chr_closed(&sig).map_err(err)?,
            "cells": cells,
        }));
    }
    Ok(Value::Array(rows).to_string())
}

#[wasm_bindgen]
pub fn steklov_modes(shape: &str, inner: f64, h: f64, k: usize) -> Result<String, JsError> {
    modes_json(shape, inner, h, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tubular_study(epsilons: Vec<f64>, h: f64) -> Result<String, JsError> {
    tubular_json(&epsilons, h).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn chromatic_table(max_p: usize) -> Result<String, JsError> {
    chromatic_json(max_p).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_modes_and_nodal_domains() {
        let v: Value = serde_json::from_str(&modes_json("disk", 0.0, 0.2, 4).unwrap()).unwrap();
        let modes = v["modes"].as_array().unwrap();
        assert_eq!(modes.len(), 5);
        assert_eq!(v["clusters"][1][1], 2);
        assert_eq!(modes[1]["domains"], 2);
        assert!(modes.iter().all(|m| m["courant"] == true && m["boundary_contact"] == true));
        let nt = v["mesh"]["triangles"].as_array().unwrap().len();
        assert_eq!(modes[3]["labels"].as_array().unwrap().len(), nt);
    }

    #[test]
    fn annulus_and_bad_input() {
        let v: Value = serde_json::from_str(&modes_json("annulus", 0.5, 0.25, 3).unwrap()).unwrap();
        assert_eq!(v["modes"].as_array().unwrap().len(), 4);
        assert!(modes_json("annulus", 1.2, 0.25, 3).is_err());
        assert!(modes_json("square", 0.0, 0.25, 3).is_err());
        assert!(modes_json("disk", 0.0, 0.001, 3).is_err());
    }

    #[test]
    fn tubular_errors_shrink() {
        let v: Value = serde_json::from_str(&tubular_json(&[0.2, 0.1], 0.1).unwrap()).unwrap();
        let e = |r: usize, i: usize| v["rows"][r]["error"][i].as_f64().unwrap();
        assert!(e(1, 1) < e(0, 1) && e(1, 2) < e(0, 2));
        assert!(v["last"]["values"].as_array().unwrap().len() > 10);
        assert!(tubular_json(&[0.1, 0.2], 0.1).is_err());
        assert!(tubular_json(&[0.1], 0.0).is_err());
    }

    #[test]
    fn table_open_cells() {
        let v: Value = serde_json::from_str(&chromatic_json(5).unwrap()).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 13);
        let torus = rows.iter().find(|r| r["surface"] == "torus").unwrap();
        assert_eq!(torus["cells"][2]["exact"], 7);
        let open: usize = rows
            .iter()
            .map(|r| r["cells"].as_array().unwrap().iter().filter(|c| c["exact"].is_null()).count())
            .sum();
        assert_eq!(open, 4);
    }
}
