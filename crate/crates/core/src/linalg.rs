//! Linear algebra helpers shared by the finite element and graph solvers.
//!
//! Dense work goes through `nalgebra`; the sparse interior solves use
//! `nalgebra-sparse`'s Cholesky after a reverse Cuthill-McKee reordering.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric-definite pencil, ascending.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector of `values[i]`, normalized so that
    /// `vᵀ B v = 1`.
    pub vectors: DMatrix<f64>,
}

/// Solves `A v = λ B v` for symmetric `A` and symmetric positive-definite `B`.
///
/// Reduces to a standard problem with the Cholesky factor of `B`. Each
/// eigenvector is sign-normalized so its largest-magnitude entry is positive.
pub fn generalized_symmetric_eigen(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<Eigenpairs> {
    let n = a.nrows();
    if a.ncols() != n || b.nrows() != n || b.ncols() != n {
        return Err(Error::Dimension(format!(
            "pencil matrices {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if n == 0 {
        return Ok(Eigenpairs { values: Vec::new(), vectors: DMatrix::zeros(0, 0) });
    }
    let chol = b
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Eigensolver("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    // C = L⁻¹ A L⁻ᵀ
    let linv_a = l
        .solve_lower_triangular(a)
        .ok_or_else(|| Error::Eigensolver("singular Cholesky factor".into()))?;
    let c_t = l
        .solve_lower_triangular(&linv_a.transpose())
        .ok_or_else(|| Error::Eigensolver("singular Cholesky factor".into()))?;
    let c = symmetrize(&c_t);
    let (values, y) = symmetric_eigen_sorted(c)?;
    let mut vectors = l
        .transpose()
        .solve_upper_triangular(&y)
        .ok_or_else(|| Error::Eigensolver("singular Cholesky factor".into()))?;
    normalize_signs(&mut vectors);
    Ok(Eigenpairs { values, vectors })
}

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
pub fn symmetric_eigen_sorted(m: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    let eig = m
        .try_symmetric_eigen(1e-15, 0)
        .ok_or_else(|| Error::Eigensolver("symmetric QR iteration did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

fn normalize_signs(vectors: &mut DMatrix<f64>) {
    for mut col in vectors.column_iter_mut() {
        let mut best = 0.0f64;
        for &v in col.iter() {
            // first entry of maximal magnitude wins, up to rounding noise
            if v.abs() > best.abs() * (1.0 + 1e-9) {
                best = v;
            }
        }
        if best < 0.0 {
            col.neg_mut();
        }
    }
}

/// Reverse Cuthill-McKee ordering of an undirected graph given by adjacency
/// lists. Returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        // start each component from an unvisited vertex of minimal degree
        let start = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("unvisited vertex exists");
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> =
                adjacency[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Sparse symmetric positive-definite factorization with a bandwidth-reducing
/// permutation.
pub struct SparseCholesky {
    /// `perm[new] = old`
    perm: Vec<usize>,
    factor: CscCholesky<f64>,
}

impl SparseCholesky {
    /// Factors the `n × n` matrix given by its (row, col, value) entries. Both
    /// triangles must be present; duplicates are summed.
    pub fn factor(n: usize, entries: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j, _) in entries {
            if i != j {
                adjacency[i].push(j);
            }
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
            adj.dedup();
        }
        let perm = reverse_cuthill_mckee(&adjacency);
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut coo = CooMatrix::new(n, n);
        for &(i, j, v) in entries {
            coo.push(inverse[i], inverse[j], v);
        }
        let csc = CscMatrix::from(&coo);
        let factor = CscCholesky::factor(&csc)
            .map_err(|e| Error::SingularInterior(format!("sparse Cholesky failed: {e}")))?;
        Ok(Self { perm, factor })
    }

    /// Solves `A X = B` for a dense right-hand side.
    pub fn solve(&self, rhs: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.perm.len();
        let mut permuted = DMatrix::zeros(n, rhs.ncols());
        for (new, &old) in self.perm.iter().enumerate() {
            permuted.set_row(new, &rhs.row(old));
        }
        let solved = self.factor.solve(&permuted);
        let mut out = DMatrix::zeros(n, rhs.ncols());
        for (new, &old) in self.perm.iter().enumerate() {
            out.set_row(old, &solved.row(new));
        }
        out
    }

    pub fn solve_vector(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let m = DMatrix::from_column_slice(rhs.len(), 1, rhs.as_slice());
        DVector::from_column_slice(self.solve(&m).as_slice())
    }
}
