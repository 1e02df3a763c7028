use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::CsrMatrix;

use crate::error::{Error, Result};
use crate::linalg::{symmetrize, SparseCholesky};

/// Discrete Dirichlet-to-Neumann operator on a set of boundary vertices.
///
/// All other vertices (interior and Neumann boundary) are eliminated:
/// `schur = K_bb − K_bo K_oo⁻¹ K_ob`, and the discrete harmonic extension of
/// boundary data `u_b` is `u_o = extension · u_b`.
#[derive(Debug, Clone)]
pub struct DtnOperator {
    pub steklov_dofs: Vec<usize>,
    pub other_dofs: Vec<usize>,
    pub schur: DMatrix<f64>,
    pub extension: DMatrix<f64>,
}

impl DtnOperator {
    /// Full vertex vector whose restriction to the Steklov dofs is `boundary`.
    pub fn extend(&self, boundary: &DVector<f64>) -> Vec<f64> {
        let n = self.steklov_dofs.len() + self.other_dofs.len();
        let mut out = vec![0.0; n];
        for (k, &v) in self.steklov_dofs.iter().enumerate() {
            out[v] = boundary[k];
        }
        if !self.other_dofs.is_empty() {
            let inner = &self.extension * boundary;
            for (k, &v) in self.other_dofs.iter().enumerate() {
                out[v] = inner[k];
            }
        }
        out
    }
}

/// Schur complement of `k` onto `steklov_dofs`.
///
/// Fails when some vertex is not coupled, through the stiffness pattern, to
/// any Steklov dof: the eliminated block is then singular.
pub fn dtn_reduce(k: &CsrMatrix<f64>, steklov_dofs: &[usize]) -> Result<DtnOperator> {
    let n = k.nrows();
    if k.ncols() != n {
        return Err(Error::Dimension("stiffness matrix is not square".into()));
    }
    let mut slot = vec![None; n];
    let mut steklov = steklov_dofs.to_vec();
    steklov.sort_unstable();
    steklov.dedup();
    if steklov.is_empty() {
        return Err(Error::NoSteklovBoundary("no Steklov degrees of freedom".into()));
    }
    if let Some(&bad) = steklov.iter().find(|&&v| v >= n) {
        return Err(Error::Dimension(format!("Steklov dof {bad} out of range")));
    }
    for (i, &v) in steklov.iter().enumerate() {
        slot[v] = Some(Block::Steklov(i));
    }
    let mut other = Vec::new();
    for v in 0..n {
        if slot[v].is_none() {
            slot[v] = Some(Block::Other(other.len()));
            other.push(v);
        }
    }
    check_reachable(k, &steklov)?;

    let ns = steklov.len();
    let no = other.len();
    let mut k_ss = DMatrix::zeros(ns, ns);
    let mut k_os = DMatrix::zeros(no, ns);
    let mut oo_entries = Vec::new();
    for (i, j, &v) in k.triplet_iter() {
        match (slot[i].unwrap(), slot[j].unwrap()) {
            (Block::Steklov(a), Block::Steklov(b)) => k_ss[(a, b)] += v,
            (Block::Other(a), Block::Steklov(b)) => k_os[(a, b)] += v,
            (Block::Other(a), Block::Other(b)) => oo_entries.push((a, b, v)),
            (Block::Steklov(_), Block::Other(_)) => {}
        }
    }
    if no == 0 {
        return Ok(DtnOperator {
            steklov_dofs: steklov,
            other_dofs: other,
            schur: symmetrize(&k_ss),
            extension: DMatrix::zeros(0, ns),
        });
    }
    let chol = SparseCholesky::factor(no, &oo_entries)?;
    let solved = chol.solve(&k_os);
    let schur = symmetrize(&(k_ss - k_os.transpose() * &solved));
    Ok(DtnOperator { steklov_dofs: steklov, other_dofs: other, schur, extension: -solved })
}

#[derive(Clone, Copy)]
enum Block {
    Steklov(usize),
    Other(usize),
}

fn check_reachable(k: &CsrMatrix<f64>, steklov: &[usize]) -> Result<()> {
    let n = k.nrows();
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = steklov.iter().copied().collect();
    steklov.iter().for_each(|&v| seen[v] = true);
    while let Some(v) = queue.pop_front() {
        for &w in k.row(v).col_indices() {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    match seen.iter().position(|s| !s) {
        Some(v) => Err(Error::SingularInterior(format!(
            "vertex {v} lies in a mesh component with no Steklov boundary"
        ))),
        None => Ok(()),
    }
}
