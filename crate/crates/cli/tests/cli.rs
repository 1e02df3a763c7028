use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn steklov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = steklov(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// (k, sigma, cluster id) rows.
fn rows(csv: &str) -> Vec<(usize, f64, usize)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn disk_spectrum_has_double_first_cluster() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write(dir.path(), "disk.json", &ok(&["mesh", "--shape", "disk", "--h", "0.1"]));
    let csv = ok(&["spectrum", "--mesh", &mesh, "--k", "6", "--rel-tol", "1e-2"]);
    assert!(csv.starts_with("k,sigma,multiplicity_cluster_id\n"));
    let r = rows(&csv);
    assert_eq!(r.len(), 7);
    assert!((r[1].1 - 1.0).abs() < 0.02);
    assert_eq!(r[1].2, r[2].2);
    assert_ne!(r[2].2, r[3].2);
    // byte-identical reruns
    assert_eq!(csv, ok(&["spectrum", "--mesh", &mesh, "--k", "6", "--rel-tol", "1e-2"]));
}

#[test]
fn strip_first_value() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write(dir.path(), "strip.json", &ok(&["mesh", "--shape", "strip", "--h", "0.1"]));
    let r = rows(&ok(&["spectrum", "--mesh", &mesh, "--k", "3", "--refine", "1"]));
    for m in 1..=3 {
        let want = m as f64 * (m as f64).tanh();
        assert!((r[m].1 - want).abs() < 0.01 * want, "m = {m}: {}", r[m].1);
    }
}

#[test]
fn refinement_carries_densities() {
    let dir = tempfile::tempdir().unwrap();
    let text = ok(&["mesh", "--shape", "annulus", "--h", "0.25"]);
    let mesh = write(dir.path(), "annulus.json", &text);
    let m: Value = serde_json::from_str(&text).unwrap();
    let nt = m["triangles"].as_array().unwrap().len();
    let nb = m["boundary"].as_array().unwrap().len();
    let density = serde_json::json!({ "gamma": vec![2.0; nt], "rho": vec![1.0; nb] });
    let density = write(dir.path(), "density.json", &density.to_string());
    let base = rows(&ok(&["spectrum", "--mesh", &mesh, "--k", "4", "--refine", "1"]));
    let stiff = rows(&ok(&["spectrum", "--mesh", &mesh, "--density", &density, "--k", "4", "--refine", "1"]));
    for i in 1..5 {
        assert!((stiff[i].1 - 2.0 * base[i].1).abs() < 1e-9 * base[i].1);
    }
}

#[test]
fn nodal_checks_pass_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write(dir.path(), "disk.json", &ok(&["mesh", "--h", "0.1"]));
    let csv = ok(&["nodal", "--mesh", &mesh, "--k", "8"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,sigma,domains,courant,boundary_contact");
    assert_eq!(lines.len(), 10);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true,true")), "{csv}");
}

#[test]
fn missing_file_fails() {
    let out = steklov(&["spectrum", "--mesh", "/nonexistent/mesh.json"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no such file"));
    assert!(!steklov(&["embed-verify", "--cert", "/nonexistent/c.json"]).status.success());
    assert!(!steklov(&["converge", "--graph", "/nonexistent/g.json", "--epsilons", "0.2,0.1"]).status.success());
}

#[test]
fn graph_spectrum_of_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "k4.json",
        r#"{"n": 4, "edges": [[0,1,1],[0,2,1],[0,3,1],[1,2,1],[1,3,1],[2,3,1]]}"#,
    );
    let r = rows(&ok(&["graph", "--graph", &g]));
    assert!(r[0].1.abs() < 1e-12);
    for row in &r[1..] {
        assert!((row.1 - 4.0).abs() < 1e-10);
        assert_eq!(row.2, 1);
    }
}

#[test]
fn converge_on_triangle_and_single_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = write(dir.path(), "k3.json", r#"{"n": 3, "edges": [[0,1,1],[1,2,1],[0,2,1]]}"#);
    let csv = ok(&["converge", "--graph", &k3, "--epsilons", "0.2,0.1", "--k", "3"]);
    assert!(csv.starts_with("epsilon,k,sigma,lambda_graph,abs_error\n"));
    let err = |eps: &str, k: &str| -> f64 {
        csv.lines()
            .find(|l| {
                let f: Vec<&str> = l.split(',').collect();
                f[0].parse::<f64>().ok() == eps.parse().ok() && f[1] == k
            })
            .unwrap()
            .rsplit(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    for k in ["1", "2"] {
        assert!(err("0.1", k) < err("0.2", k));
    }

    let one = write(dir.path(), "one.json", r#"{"n": 1, "edges": []}"#);
    let csv = ok(&["converge", "--graph", &one, "--epsilons", "0.2"]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[1], "0");
    assert!(row[4].parse::<f64>().unwrap() < 1e-9);

    let out = steklov(&["converge", "--graph", &k3, "--epsilons", "0.05,0.1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("decreasing"));
}

#[test]
fn chrom_torus() {
    let v: Value = serde_json::from_str(&ok(&["chrom", "--surface", "torus", "--p", "3"])).unwrap();
    assert_eq!(v["exact"], 7);
    assert_eq!(v["chr"], 7);
    let open: Value = serde_json::from_str(&ok(&["chrom", "--surface", "sum4P"])).unwrap();
    let exact: Vec<Value> = open.as_array().unwrap().iter().map(|r| r["exact"].clone()).collect();
    assert_eq!(exact, [7.into(), Value::Null, 8.into(), 8.into(), 8.into()]);
    assert!(!steklov(&["chrom", "--surface", "donut", "--p", "1"]).status.success());
    assert!(!steklov(&["chrom", "--surface", "torus", "--p", "0"]).status.success());
}

#[test]
fn embed_verify_klein_certificate() {
    let cert = fixture("k6_klein_2.json");
    let v: Value = serde_json::from_str(&ok(&["embed-verify", "--cert", cert.to_str().unwrap()])).unwrap();
    assert_eq!(v["proper"], true);
    assert_eq!(v["chi"], 0);
    assert_eq!(v["orientable"], false);
    assert_eq!(v["p"], 2);

    // drop the face through 3, 4, 6 so those vertices leave the boundary
    let mut raw: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    raw["removed_faces"].as_array_mut().unwrap().retain(|f| f.as_array().unwrap().contains(&1.into()));
    raw.as_object_mut().unwrap().remove("claims");
    let dir = tempfile::tempdir().unwrap();
    let tampered = write(dir.path(), "tampered.json", &raw.to_string());
    let v: Value = serde_json::from_str(&ok(&["embed-verify", "--cert", &tampered])).unwrap();
    assert_eq!(v["proper"], false);
    assert_eq!(v["uncovered"], serde_json::json!([3, 4, 6]));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chrom.json");
    let stdout = ok(&["chrom", "--surface", "klein", "--p", "2", "--out", path.to_str().unwrap()]);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["exact"], 6);
}
