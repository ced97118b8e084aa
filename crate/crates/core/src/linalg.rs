//! Spectral decompositions, norms and rank for dense real matrices.
//!
//! The eigensolver is a cyclic Jacobi iteration on symmetric matrices;
//! everything else (singular values, rank, orthonormalization, the right
//! factor solve) is built on top of it. Intended scale is N up to a few
//! hundred.

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, scale_vec, vec_norm, Matrix};

/// Default relative tolerance for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Jacobi convergence threshold on the off-diagonal HS mass, relative to
/// the input scale.
const JACOBI_TOL: f64 = 1e-14;

/// Eigenvalues below this multiple of the largest one are treated as
/// exact zeros when taking square roots of Gram eigenvalues. Round-off in
/// the eigensolver turns exact-zero eigenvalues into O(eps) noise whose
/// square root would otherwise pollute rank decisions.
const GRAM_ZERO_CLAMP: f64 = 100.0 * f64::EPSILON;

/// Singular values, rank and the two norms of a matrix in one report.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectrumReport {
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    pub hs_norm: f64,
    pub spectral_norm: f64,
}

pub fn spectrum(a: &Matrix, tol: f64) -> SpectrumReport {
    let sv = singular_values(a);
    let s0 = sv.first().copied().unwrap_or(0.0);
    SpectrumReport {
        numerical_rank: sv.iter().filter(|&&s| s > tol * s0).count(),
        hs_norm: hs_norm(a),
        spectral_norm: s0,
        singular_values: sv,
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in non-increasing order and the matrix whose
/// columns are the matching orthonormal eigenvectors, so that
/// `M = E D E^T`. Each eigenvector is normalized so that its first
/// coordinate of non-negligible size is positive.
pub fn sym_eig(m: &Matrix, tol: f64) -> Result<(Vec<f64>, Matrix)> {
    if !m.is_square() {
        return Err(Error::Input(format!(
            "sym_eig requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.frob();
    let asym = m.sub(&m.transpose()).frob();
    if asym > tol * scale.max(f64::MIN_POSITIVE) && asym > tol {
        return Err(Error::Input(format!(
            "matrix is not symmetric: asymmetry {asym:.3e} exceeds tolerance"
        )));
    }
    // Symmetrize to kill round-off level asymmetry before iterating.
    let sym = m.add(&m.transpose()).scaled(0.5);
    Ok(jacobi(&sym))
}

fn jacobi(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let scale = m.frob();
    if n > 0 && scale > 0.0 {
        for _sweep in 0..200 {
            let mut off = 0.0;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off += a.get(i, j) * a.get(i, j);
                    }
                }
            }
            if off.sqrt() <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a.get(p, q);
                    if apq.abs() <= 1e-2 * JACOBI_TOL * scale / (n as f64) {
                        continue;
                    }
                    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                    let t = if theta == 0.0 {
                        1.0
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // rows/columns p and q of A
                    for k in 0..n {
                        let akp = a.get(k, p);
                        let akq = a.get(k, q);
                        a.set(k, p, c * akp - s * akq);
                        a.set(k, q, s * akp + c * akq);
                    }
                    for k in 0..n {
                        let apk = a.get(p, k);
                        let aqk = a.get(q, k);
                        a.set(p, k, c * apk - s * aqk);
                        a.set(q, k, s * apk + c * aqk);
                    }
                    for k in 0..n {
                        let vkp = v.get(k, p);
                        let vkq = v.get(k, q);
                        v.set(k, p, c * vkp - s * vkq);
                        v.set(k, q, s * vkp + c * vkq);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap().then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Matrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    // deterministic sign: first non-negligible coordinate positive
    for j in 0..n {
        let col = vectors.col(j);
        let lead = col.iter().find(|x| x.abs() > 1e-12);
        if let Some(&x) = lead {
            if x < 0.0 {
                let flipped: Vec<f64> = col.iter().map(|y| -y).collect();
                vectors.set_col(j, &flipped);
            }
        }
    }
    (eigenvalues, vectors)
}

/// Non-increasing singular values, length min(rows, cols).
///
/// Computed as square roots of the Gram eigenvalues on the smaller side;
/// eigenvalues at round-off level are clamped to exactly zero.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let (small, gram) = if a.rows() >= a.cols() {
        (a.cols(), a.transpose().matmul(a))
    } else {
        (a.rows(), a.matmul(&a.transpose()))
    };
    if small == 0 {
        return vec![];
    }
    let (eigs, _) = jacobi(&gram);
    let top = eigs.first().copied().unwrap_or(0.0).max(0.0);
    eigs.iter()
        .map(|&l| {
            if l <= GRAM_ZERO_CLAMP * top {
                0.0
            } else {
                l.max(0.0).sqrt()
            }
        })
        .collect()
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(a: &Matrix) -> f64 {
    a.frob()
}

/// Largest singular value, the l2->l2 operator norm.
pub fn spectral_norm(a: &Matrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Number of singular values above `tol` times the largest one. The zero
/// matrix has rank 0.
pub fn numerical_rank(a: &Matrix, tol: f64) -> usize {
    let sv = singular_values(a);
    let s0 = sv.first().copied().unwrap_or(0.0);
    if s0 == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * s0).count()
}

/// In-order modified Gram-Schmidt on the rows of the input.
///
/// Rows whose residual drops below `tol` times the input scale are
/// dropped, so the output has one orthonormal row per independent input
/// row and the same row span up to `tol`.
pub fn orthonormalize(rows: &Matrix, tol: f64) -> Matrix {
    let scale = rows.frob().max(1.0);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for i in 0..rows.rows() {
        let mut r = rows.row(i).to_vec();
        for b in &basis {
            let c = dot(&r, b);
            axpy(&mut r, -c, b);
        }
        // second pass for numerical re-orthogonalization
        for b in &basis {
            let c = dot(&r, b);
            axpy(&mut r, -c, b);
        }
        let nrm = vec_norm(&r);
        if nrm > tol * scale {
            scale_vec(&mut r, 1.0 / nrm);
            basis.push(r);
        }
    }
    let cols = rows.cols();
    Matrix::from_fn(basis.len(), cols, |i, j| basis[i][j])
}

/// Solves `W = S V` for a square `S` acting on the column space of `V`,
/// extended by the identity on its orthogonal complement.
///
/// Requires `ker V` to be contained in `ker W` up to `tol`; this is the
/// right-factor construction used to read the symplectic map off the
/// taming pipeline.
pub fn solve_right_factor(v: &Matrix, w: &Matrix, tol: f64) -> Result<Matrix> {
    if v.rows() != w.rows() || v.cols() != w.cols() {
        return Err(Error::Input(format!(
            "shape mismatch: V is {}x{}, W is {}x{}",
            v.rows(),
            v.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let d = v.rows();
    let w_scale = 1.0 + w.frob();

    // kernel inclusion check through the right singular subspace of V
    let gram_right = v.transpose().matmul(v);
    let (eigs, vecs) = jacobi(&gram_right);
    let top = eigs.first().copied().unwrap_or(0.0).max(0.0);
    for j in 0..eigs.len() {
        if eigs[j] <= (DEFAULT_RANK_TOL * DEFAULT_RANK_TOL * top).max(GRAM_ZERO_CLAMP * top) {
            let x = vecs.col(j);
            let wx = vec_norm(&w.matvec(&x));
            if wx > tol * w_scale {
                return Err(Error::Consistency(format!(
                    "kernel of V is not contained in kernel of W: |W x| = {wx:.3e} \
                     on a null direction of V"
                )));
            }
        }
    }

    // pseudo-inverse of V V^T and the projection onto the column space of V
    let gram_left = v.matmul(&v.transpose());
    let (leigs, levecs) = jacobi(&gram_left);
    let ltop = leigs.first().copied().unwrap_or(0.0).max(0.0);
    let mut s = Matrix::zeros(d, d);
    let mut proj = Matrix::zeros(d, d);
    let wvt = w.matmul(&v.transpose());
    for j in 0..d {
        if leigs[j] > (DEFAULT_RANK_TOL * DEFAULT_RANK_TOL * ltop).max(GRAM_ZERO_CLAMP * ltop) {
            let e = levecs.col(j);
            // S += (1/l) * (W V^T e) e^T ; proj += e e^T
            let we = wvt.matvec(&e);
            for r in 0..d {
                for c in 0..d {
                    s.set(r, c, s.get(r, c) + we[r] * e[c] / leigs[j]);
                    proj.set(r, c, proj.get(r, c) + e[r] * e[c]);
                }
            }
        }
    }
    let complement = Matrix::identity(d).sub(&proj);
    let s = s.add(&complement);

    let residual = w.sub(&s.matmul(v)).frob();
    if residual > tol * w_scale {
        return Err(Error::Consistency(format!(
            "right factor residual {residual:.3e} exceeds tolerance"
        )));
    }
    Ok(s)
}

/// Determinant by LU with partial pivoting.
pub fn det(a: &Matrix) -> f64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return 1.0;
    }
    let mut lu = a.clone();
    let mut sign = 1.0;
    for k in 0..n {
        let mut pivot = k;
        for i in k + 1..n {
            if lu.get(i, k).abs() > lu.get(pivot, k).abs() {
                pivot = i;
            }
        }
        if lu.get(pivot, k) == 0.0 {
            return 0.0;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(pivot, j));
                lu.set(pivot, j, tmp);
            }
            sign = -sign;
        }
        let d = lu.get(k, k);
        for i in k + 1..n {
            let f = lu.get(i, k) / d;
            lu.set(i, k, f);
            for j in k + 1..n {
                lu.set(i, j, lu.get(i, j) - f * lu.get(k, j));
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * lu.get(i, i))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HadamardReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Generalized Hadamard bound: det(P^T Q) against the product of column
/// norms of P and Q.
pub fn hadamard_bound_check(p: &Matrix, q: &Matrix) -> Result<HadamardReport> {
    if p.rows() != q.rows() || p.cols() != q.cols() {
        return Err(Error::Input("P and Q must have the same shape".into()));
    }
    if p.cols() > p.rows() {
        return Err(Error::Input(
            "expected tall matrices (column count at most row count)".into(),
        ));
    }
    let lhs = det(&p.transpose().matmul(q));
    let col_prod = |m: &Matrix| (0..m.cols()).fold(1.0, |acc, j| acc * vec_norm(&m.col(j)));
    let rhs = col_prod(p) * col_prod(q);
    Ok(HadamardReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-10,
    })
}

/// Matrix exponential by scaling-and-squaring with a Taylor series.
pub fn matrix_exp(x: &Matrix) -> Result<Matrix> {
    if !x.is_square() {
        return Err(Error::Input("matrix_exp requires a square matrix".into()));
    }
    let n = x.rows();
    let norm = x.frob();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = x.scaled(0.5f64.powi(squarings as i32));
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=40 {
        term = term.matmul(&scaled).scaled(1.0 / k as f64);
        sum = sum.add(&term);
        if term.frob() <= 1e-18 * sum.frob().max(1.0) {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}
