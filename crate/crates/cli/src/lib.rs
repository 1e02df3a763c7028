//! Argument parsing and the commands behind the `steklov` binary. Every
//! command renders its whole output as a string first, so repeated runs are
//! byte-identical and tests can call [`run`] directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use steklov_core::chromatic::{chr0_bounds, chr0_exact, chr_closed, coloring_constant, EmbeddingCertificate, SurfaceSignature};
use steklov_core::fem::{cluster_multiplicities, solve_steklov, solve_steklov_neumann, DensitySpec, SpectrumResult};
use steklov_core::graph::{graph_spectrum, MetricGraph};
use steklov_core::mesh::{build_domain, refine_uniform, DomainSpec, Marker, Mesh};
use steklov_core::nodal::{boundary_contact_check, courant_check, nodal_domains, DEFAULT_ZERO_TOL};
use steklov_core::tubular::{convergence_study, TubularParams};

#[derive(Debug, Parser)]
#[command(name = "steklov", version, about = "Steklov eigenvalue laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShapeArg {
    Disk,
    Annulus,
    /// [0, π] × [0, 1], Steklov on y = 0 and Neumann elsewhere.
    Strip,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a mesh and print it as JSON.
    Mesh {
        #[arg(long, value_enum, default_value = "disk")]
        shape: ShapeArg,
        /// Target edge length.
        #[arg(long, default_value_t = 0.1)]
        h: f64,
        /// Inner radius of the annulus (outer radius is 1).
        #[arg(long, default_value_t = 0.5)]
        inner: f64,
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Lowest Steklov eigenvalues as CSV. Neumann-marked edges switch to the
    /// mixed problem.
    Spectrum {
        #[arg(long)]
        mesh: PathBuf,
        /// γ per triangle and ρ per boundary edge; uniform when omitted.
        #[arg(long)]
        density: Option<PathBuf>,
        /// Highest index: σ_0 … σ_k are reported.
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 1e-2)]
        rel_tol: f64,
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Nodal domain counts of the first eigenfunctions as CSV.
    Nodal {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        density: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        refine: usize,
    },
    /// Spectrum of the graph pencil (Δ + V) f = λ μ f as CSV.
    Graph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        rel_tol: f64,
    },
    /// Tubular domains around a graph against the graph spectrum, as CSV.
    Converge {
        #[arg(long)]
        graph: PathBuf,
        /// Strictly decreasing strip half-widths.
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        /// Number of eigenvalues compared; all of them by default.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        h: f64,
    },
    /// Chromatic bounds of a surface with p boundary components, as JSON.
    Chrom {
        /// sphere, projective, klein, torus, genus2o, sum<k>P or sum<k>T.
        #[arg(long)]
        surface: String,
        /// Boundary components; p = 1..5 when omitted.
        #[arg(long)]
        p: Option<usize>,
    },
    /// Check an embedding certificate and print the report as JSON.
    EmbedVerify {
        #[arg(long)]
        cert: PathBuf,
    },
}

/// Executes a parsed command line; the output goes to `--out` or is returned.
pub fn run(cli: &Cli) -> Result<String, String> {
    let text = match &cli.command {
        Command::Mesh { shape, h, inner, refine } => cmd_mesh(*shape, *h, *inner, *refine)?,
        Command::Spectrum { mesh, density, k, rel_tol, refine } => {
            cmd_spectrum(mesh, density.as_deref(), *k, *rel_tol, *refine)?
        }
        Command::Nodal { mesh, density, k, refine } => cmd_nodal(mesh, density.as_deref(), *k, *refine)?,
        Command::Graph { graph, rel_tol } => cmd_graph(graph, *rel_tol)?,
        Command::Converge { graph, epsilons, k, h } => cmd_converge(graph, epsilons, *k, *h)?,
        Command::Chrom { surface, p } => cmd_chrom(surface, *p)?,
        Command::EmbedVerify { cert } => cmd_embed_verify(cert)?,
    };
    if let Some(path) = &cli.out {
        std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(String::new());
    }
    Ok(text)
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn positive(name: &str, x: f64) -> Result<f64, String> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("--{name} must be positive, got {x}"))
    }
}

fn need_file(path: &Path) -> Result<(), String> {
    if path.is_file() {
        Ok(())
    } else {
        Err(format!("{}: no such file", path.display()))
    }
}

fn load_mesh(path: &Path, density: Option<&Path>, refine: usize) -> Result<(Mesh, DensitySpec), String> {
    need_file(path)?;
    let mut mesh = Mesh::load(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut d = match density {
        Some(p) => {
            need_file(p)?;
            DensitySpec::load(p).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => DensitySpec::uniform(&mesh),
    };
    for _ in 0..refine {
        mesh = refine_uniform(&mesh).map_err(err)?;
        d = d.refined();
    }
    Ok((mesh, d))
}

fn solve(mesh: &Mesh, d: &DensitySpec, k: usize) -> Result<SpectrumResult, String> {
    let mixed = mesh.boundary().iter().any(|e| e.marker == Marker::Neumann);
    if mixed { solve_steklov_neumann(mesh, d, k) } else { solve_steklov(mesh, d, k) }.map_err(err)
}

pub fn cmd_mesh(shape: ShapeArg, h: f64, inner: f64, refine: usize) -> Result<String, String> {
    positive("h", h)?;
    let mut mesh = match shape {
        ShapeArg::Disk => build_domain(&DomainSpec::disk(1.0, h)),
        ShapeArg::Annulus => {
            if !(inner > 0.0 && inner < 1.0) {
                return Err(format!("--inner must lie in (0, 1), got {inner}"));
            }
            build_domain(&DomainSpec::annulus(inner, 1.0, h))
        }
        ShapeArg::Strip => build_domain(&DomainSpec::rectangle(0.0, 0.0, std::f64::consts::PI, 1.0, h)).and_then(|m| {
            m.mark_edges(|p, q| {
                Some(if p[1].abs() < 1e-12 && q[1].abs() < 1e-12 { Marker::Steklov } else { Marker::Neumann })
            })
        }),
    }
    .map_err(err)?;
    for _ in 0..refine {
        mesh = refine_uniform(&mesh).map_err(err)?;
    }
    mesh.to_json().map_err(err)
}

pub fn cmd_spectrum(mesh: &Path, density: Option<&Path>, k: usize, rel_tol: f64, refine: usize) -> Result<String, String> {
    positive("rel-tol", rel_tol)?;
    let (mesh, d) = load_mesh(mesh, density, refine)?;
    let mut s = solve(&mesh, &d, k)?;
    s.recluster(rel_tol).map_err(err)?;
    Ok(s.to_csv())
}

pub fn cmd_nodal(mesh: &Path, density: Option<&Path>, k: usize, refine: usize) -> Result<String, String> {
    let (mesh, d) = load_mesh(mesh, density, refine)?;
    let s = solve(&mesh, &d, k)?;
    let mut out = String::from("k,sigma,domains,courant,boundary_contact\n");
    for (i, (sigma, u)) in s.eigenvalues.iter().zip(&s.eigenvectors).enumerate() {
        let dec = nodal_domains(&mesh, u, DEFAULT_ZERO_TOL).map_err(err)?;
        let _ = writeln!(
            out,
            "{i},{sigma:.16e},{},{},{}",
            dec.num_domains(),
            courant_check(&dec, i),
            boundary_contact_check(&dec, &mesh)
        );
    }
    Ok(out)
}

fn load_graph(path: &Path) -> Result<MetricGraph, String> {
    need_file(path)?;
    MetricGraph::load(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn cmd_graph(graph: &Path, rel_tol: f64) -> Result<String, String> {
    positive("rel-tol", rel_tol)?;
    let g = load_graph(graph)?;
    let values = graph_spectrum(&g).map_err(err)?.values;
    let clusters = cluster_multiplicities(&values, rel_tol).map_err(err)?;
    let mut out = String::from("k,lambda,multiplicity_cluster_id\n");
    let mut k = 0;
    for (c, cl) in clusters.iter().enumerate() {
        for _ in 0..cl.multiplicity {
            let _ = writeln!(out, "{k},{:.16e},{c}", values[k]);
            k += 1;
        }
    }
    Ok(out)
}

pub fn cmd_converge(graph: &Path, epsilons: &[f64], k: Option<usize>, h: f64) -> Result<String, String> {
    positive("h", h)?;
    for &e in epsilons {
        positive("epsilons", e)?;
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err("--epsilons must be strictly decreasing".into());
    }
    let g = load_graph(graph)?;
    let params = TubularParams { h, ..TubularParams::default() };
    let study = convergence_study(&g, epsilons, k.unwrap_or(g.n), &params).map_err(err)?;
    Ok(study.to_csv())
}

fn chrom_row(sig: &SurfaceSignature, p: usize) -> Result<serde_json::Value, String> {
    let (lower, upper) = chr0_bounds(sig, p).map_err(err)?;
    Ok(json!({
        "surface": sig.to_string(),
        "chi": sig.chi,
        "orientable": sig.orientable,
        "p": p,
        "chr": chr_closed(sig).map_err(err)?,
        "coloring_constant": coloring_constant(sig, p),
        "lower": lower,
        "upper": upper,
        "exact": chr0_exact(sig, p).map_err(err)?,
    }))
}

pub fn cmd_chrom(surface: &str, p: Option<usize>) -> Result<String, String> {
    let sig: SurfaceSignature = surface.parse().map_err(err)?;
    let value = match p {
        Some(p) => chrom_row(&sig, p)?,
        None => serde_json::Value::Array((1..=5).map(|p| chrom_row(&sig, p)).collect::<Result<_, _>>()?),
    };
    Ok(serde_json::to_string_pretty(&value).map_err(err)? + "\n")
}

pub fn cmd_embed_verify(cert: &Path) -> Result<String, String> {
    need_file(cert)?;
    let c = EmbeddingCertificate::load(cert).map_err(|e| format!("{}: {e}", cert.display()))?;
    let report = c.report().map_err(err)?;
    let mut value = serde_json::to_value(&report).map_err(err)?;
    value["surface"] = json!(c.surface().map_err(err)?.to_string());
    Ok(serde_json::to_string_pretty(&value).map_err(err)? + "\n")
}
