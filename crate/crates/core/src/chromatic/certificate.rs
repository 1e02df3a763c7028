use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::rotation::{is_orientable, trace_faces, Face, RotationSystem};
use super::surface::{classify_surface, SurfaceSignature};
use crate::error::{Error, Result};

/// Surface the certificate claims to realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claims {
    /// Euler characteristic of the closed surface.
    pub chi: i32,
    pub orientable: bool,
    pub p: usize,
}

/// A rotation system together with the faces replaced by boundary circles.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingCertificate {
    pub rotation: RotationSystem,
    /// Vertex cycles (0-based) of the removed faces.
    pub removed_faces: Vec<Vec<usize>>,
    pub claims: Option<Claims>,
}

/// On-disk layout; vertices are 1-based.
#[derive(Debug, Deserialize)]
struct CertificateFile {
    n: usize,
    rotations: Vec<Vec<usize>>,
    #[serde(default)]
    signs: BTreeMap<String, i8>,
    removed_faces: Vec<Vec<usize>>,
    #[serde(default)]
    claims: Option<Claims>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub proper: bool,
    /// Closed surface.
    pub chi: i32,
    pub orientable: bool,
    pub p: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// 1-based vertices not on any removed face.
    pub uncovered: Vec<usize>,
    pub claims_hold: Option<bool>,
}

impl EmbeddingCertificate {
    pub fn new(rotation: RotationSystem, removed_faces: Vec<Vec<usize>>) -> Self {
        Self { rotation, removed_faces, claims: None }
    }

    pub fn with_claims(mut self, claims: Claims) -> Self {
        self.claims = Some(claims);
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: CertificateFile = serde_json::from_str(s)?;
        if file.rotations.len() != file.n {
            return Err(Error::InvalidCertificate(format!(
                "{} rotations listed for n = {}",
                file.rotations.len(),
                file.n
            )));
        }
        let zero_based = |v: usize| {
            if v == 0 || v > file.n {
                Err(Error::InvalidCertificate(format!("vertex {v} outside 1..={}", file.n)))
            } else {
                Ok(v - 1)
            }
        };
        let rotations = file
            .rotations
            .iter()
            .map(|r| r.iter().map(|&v| zero_based(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut twisted = Vec::new();
        for (key, &sign) in &file.signs {
            let (a, b) = key
                .split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::InvalidCertificate(format!("edge key '{key}' is not 'i-j'")))?;
            match sign {
                1 => {}
                -1 => twisted.push((zero_based(a)?, zero_based(b)?)),
                _ => return Err(Error::InvalidCertificate(format!("edge {key} has sign {sign}"))),
            }
        }
        let rotation = RotationSystem::new(rotations, &twisted)?;
        for key in file.signs.keys() {
            let (a, b) = key.split_once('-').unwrap();
            let (a, b) = (a.trim().parse::<usize>().unwrap(), b.trim().parse::<usize>().unwrap());
            if !rotation.rotations()[zero_based(a)?].contains(&zero_based(b)?) {
                return Err(Error::InvalidCertificate(format!("signed pair {key} is not an edge")));
            }
        }
        let removed_faces = file
            .removed_faces
            .iter()
            .map(|f| f.iter().map(|&v| zero_based(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rotation, removed_faces, claims: file.claims })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Every edge gets an explicit sign. One rotation per line.
    pub fn to_json(&self) -> Result<String> {
        let rs = &self.rotation;
        let line = |v: &[usize]| serde_json::to_string(&v.iter().map(|x| x + 1).collect::<Vec<_>>());
        let rotations = rs.rotations().iter().map(|r| line(r).map(|l| format!("    {l}"))).collect::<Result<Vec<_>, _>>()?;
        let signs: Vec<String> =
            rs.edges().into_iter().map(|(a, b)| format!("    \"{}-{}\": {}", a + 1, b + 1, rs.sign(a, b))).collect();
        let removed = self.removed_faces.iter().map(|f| line(f)).collect::<Result<Vec<_>, _>>()?;
        let mut out = format!(
            "{{\n  \"n\": {},\n  \"rotations\": [\n{}\n  ],\n  \"signs\": {{\n{}\n  }},\n  \"removed_faces\": [{}]",
            rs.num_vertices(),
            rotations.join(",\n"),
            signs.join(",\n"),
            removed.join(", ")
        );
        if let Some(c) = &self.claims {
            out += &format!(",\n  \"claims\": {}", serde_json::to_string(c)?);
        }
        out += "\n}";
        Ok(out)
    }

    /// Indices into `trace_faces` of the removed faces. A vertex cycle listed
    /// twice must match two distinct faces.
    pub fn removed_face_ids(&self, faces: &[Face]) -> Result<Vec<usize>> {
        let mut used = vec![false; faces.len()];
        let mut ids = Vec::with_capacity(self.removed_faces.len());
        for cycle in &self.removed_faces {
            let target = Face::canonical(cycle);
            let id = faces
                .iter()
                .enumerate()
                .position(|(i, f)| !used[i] && *f == target)
                .ok_or_else(|| Error::InvalidCertificate(format!("{} is not a face of the map", one_based(cycle))))?;
            used[id] = true;
            ids.push(id);
        }
        Ok(ids)
    }

    /// Closed surface plus the number of removed faces.
    pub fn surface(&self) -> Result<SurfaceSignature> {
        Ok(classify_surface(&self.rotation)?.with_boundary(self.removed_faces.len()))
    }

    pub fn report(&self) -> Result<CertificateReport> {
        let faces = trace_faces(&self.rotation)?;
        let ids = self.removed_face_ids(&faces)?;
        let sig = self.surface()?;
        let n = self.rotation.num_vertices();
        let mut covered = vec![false; n];
        for &id in &ids {
            for &v in &faces[id].0 {
                covered[v] = true;
            }
        }
        let uncovered: Vec<usize> = (0..n).filter(|&v| !covered[v]).map(|v| v + 1).collect();
        let claims_hold = self.claims.map(|c| c.chi == sig.chi && c.orientable == sig.orientable && c.p == sig.p);
        Ok(CertificateReport {
            proper: uncovered.is_empty(),
            chi: sig.chi,
            orientable: is_orientable(&self.rotation),
            p: sig.p,
            vertices: n,
            edges: self.rotation.num_edges(),
            faces: faces.len(),
            uncovered,
            claims_hold,
        })
    }
}

/// True iff every vertex lies on at least one removed face.
pub fn verify_proper(cert: &EmbeddingCertificate) -> Result<bool> {
    Ok(cert.report()?.proper)
}

fn one_based(cycle: &[usize]) -> String {
    let inner: Vec<String> = cycle.iter().map(|v| (v + 1).to_string()).collect();
    format!("({})", inner.join(" "))
}
