//! Real canonical form of antisymmetric matrices: B = Q^T R Q with R
//! block-diagonal in 2x2 rotation-generator blocks and Q row-orthonormal.

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, sym_eig, DEFAULT_RANK_TOL};
use crate::matrix::{axpy, dot, scale_vec, vec_norm, Matrix};

/// Canonical form of an antisymmetric N x N matrix of numerical rank 2k:
/// k block frequencies mu_1 >= ... >= mu_k > 0 and a 2k x N matrix with
/// orthonormal rows, grouped in pairs (x_j, y_j) such that
/// B x_j = mu_j y_j and B y_j = -mu_j x_j.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AntisymCanonicalForm {
    mus: Vec<f64>,
    q_rows: Matrix,
    n_ambient: usize,
}

impl AntisymCanonicalForm {
    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    pub fn pair_count(&self) -> usize {
        self.mus.len()
    }

    pub fn q_rows(&self) -> &Matrix {
        &self.q_rows
    }

    pub fn ambient_dim(&self) -> usize {
        self.n_ambient
    }

    /// The 2k x 2k block-diagonal matrix of [[0, -mu], [mu, 0]] blocks.
    pub fn r_matrix(&self) -> Matrix {
        let k = self.mus.len();
        let mut r = Matrix::zeros(2 * k, 2 * k);
        for (j, &mu) in self.mus.iter().enumerate() {
            r.set(2 * j, 2 * j + 1, -mu);
            r.set(2 * j + 1, 2 * j, mu);
        }
        r
    }

    /// Diagonal of square roots (sqrt mu_1, sqrt mu_1, sqrt mu_2, ...),
    /// matching the interleaved row order of Q.
    pub fn sqrt_mu_diagonal(&self) -> Matrix {
        let values: Vec<f64> = self
            .mus
            .iter()
            .flat_map(|&mu| [mu.sqrt(), mu.sqrt()])
            .collect();
        Matrix::diag(&values)
    }
}

/// Computes the canonical form via the spectral decomposition of the
/// positive semidefinite matrix -B^2.
///
/// Eigenvalues mu^2 are grouped within relative tolerance 1e-8; inside
/// each eigenspace a unit x is picked, y = Bx/mu is its automatic
/// orthogonal partner, and the pair is deflated until the eigenspace is
/// exhausted. Frequencies below the rank tolerance are dropped so the
/// form has exactly numerical-rank(B)/2 pairs.
pub fn antisym_canonical(b: &Matrix, tol: f64) -> Result<AntisymCanonicalForm> {
    if !b.is_square() {
        return Err(Error::Input("expected a square matrix".into()));
    }
    let n = b.rows();
    let scale = b.frob();
    let asym = b.add(&b.transpose()).frob();
    if asym > tol * scale.max(f64::MIN_POSITIVE) && asym > tol {
        return Err(Error::Input(format!(
            "matrix is not antisymmetric: |B + B^T| = {asym:.3e}"
        )));
    }
    if scale == 0.0 {
        return Ok(AntisymCanonicalForm {
            mus: vec![],
            q_rows: Matrix::zeros(0, n),
            n_ambient: n,
        });
    }
    // strict antisymmetrization before squaring
    let b = b.sub(&b.transpose()).scaled(0.5);
    let gram = b.matmul(&b).scaled(-1.0);
    let (eigs, vecs) = sym_eig(&gram, 1e-8)?;
    let top = eigs.first().copied().unwrap_or(0.0).max(0.0);
    let mu_max = top.sqrt();
    // keep exactly numerical_rank(B)/2 pairs
    let rank = numerical_rank(&b, DEFAULT_RANK_TOL);
    debug_assert!(rank % 2 == 0, "antisymmetric rank must be even");
    let pairs_wanted = rank / 2;

    let group_tol = 1e-8;
    let mut mus: Vec<f64> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut idx = 0;
    while idx < n && mus.len() < pairs_wanted {
        let lead = eigs[idx];
        if lead <= 0.0 {
            break;
        }
        let mut end = idx + 1;
        while end < n && (lead - eigs[end]).abs() <= group_tol * top {
            end += 1;
        }
        let mu = lead.max(0.0).sqrt();
        if mu > DEFAULT_RANK_TOL * mu_max {
            // eigenspace basis for this group
            let mut space: Vec<Vec<f64>> = (idx..end).map(|j| vecs.col(j)).collect();
            while !space.is_empty() && mus.len() < pairs_wanted {
                let x = space[0].clone();
                let mut y = b.matvec(&x);
                scale_vec(&mut y, 1.0 / mu);
                let ynorm = vec_norm(&y);
                if ynorm == 0.0 {
                    break;
                }
                scale_vec(&mut y, 1.0 / ynorm);
                mus.push(mu);
                rows.push(x.clone());
                rows.push(y.clone());
                // deflate span{x, y} from the remaining eigenspace
                let mut next: Vec<Vec<f64>> = Vec::new();
                for mut w in space.into_iter().skip(1) {
                    let cx = dot(&w, &x);
                    axpy(&mut w, -cx, &x);
                    let cy = dot(&w, &y);
                    axpy(&mut w, -cy, &y);
                    // re-orthonormalize against kept deflated vectors
                    for kept in &next {
                        let c = dot(&w, kept);
                        axpy(&mut w, -c, kept);
                    }
                    let nrm = vec_norm(&w);
                    if nrm > 1e-8 {
                        scale_vec(&mut w, 1.0 / nrm);
                        next.push(w);
                    }
                }
                space = next;
            }
        }
        idx = end;
    }
    if mus.len() != pairs_wanted {
        return Err(Error::Consistency(format!(
            "extracted {} pairs but numerical rank asks for {}",
            mus.len(),
            pairs_wanted
        )));
    }
    let q_rows = Matrix::from_fn(2 * mus.len(), n, |i, j| rows[i][j]);
    Ok(AntisymCanonicalForm {
        mus,
        q_rows,
        n_ambient: n,
    })
}

/// Inverse of the canonical form: Q^T R Q, antisymmetric by construction.
pub fn reconstruct(form: &AntisymCanonicalForm) -> Matrix {
    if form.pair_count() == 0 {
        return Matrix::zeros(form.n_ambient, form.n_ambient);
    }
    form.q_rows
        .transpose()
        .matmul(&form.r_matrix())
        .matmul(&form.q_rows)
}

/// Permutation P with P^T J_{2k} P equal to the block-diagonal matrix of
/// [[0,-1],[1,0]] blocks: it maps pair-interleaved coordinates
/// (x1 y1 x2 y2 ...) to the split order (x1..xk, y1..yk).
pub fn interleave_permutation(k: usize) -> Result<Matrix> {
    if k < 1 {
        return Err(Error::Input("k must be at least 1".into()));
    }
    let mut p = Matrix::zeros(2 * k, 2 * k);
    for j in 0..k {
        // column 2j carries e_j, column 2j+1 carries e_{k+j}
        p.set(j, 2 * j, 1.0);
        p.set(k + j, 2 * j + 1, 1.0);
    }
    Ok(p)
}
