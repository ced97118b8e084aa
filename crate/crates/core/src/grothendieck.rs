//! Diagonal-scaling factorization: the combination formula for two
//! Grothendieck scaling vectors, a certified direct search for a single
//! scaling, and the inequality checkers built on it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, singular_values, DEFAULT_RANK_TOL};
use crate::matrix::{vec_norm, Matrix};
use crate::opnorms::{gaussian, infty_one_exact};

/// Grothendieck's own upper bound sinh(pi/2) on K_G; the default constant
/// for certification since the exact value is unknown.
pub fn kg_upper() -> f64 {
    (std::f64::consts::PI / 2.0).sinh()
}

/// Lower bound pi/2 on K_G.
pub fn kg_lower() -> f64 {
    std::f64::consts::FRAC_PI_2
}

/// Strictly positive scaling vector with Euclidean norm at most 1.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScalingVector {
    lambdas: Vec<f64>,
}

impl ScalingVector {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Input(
                "scaling vector entries must be strictly positive".into(),
            ));
        }
        let norm = vec_norm(&lambdas);
        if norm > 1.0 + 1e-12 {
            return Err(Error::Input(format!(
                "scaling vector norm {norm} exceeds 1"
            )));
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// D_Lambda^{-1} A D_Lambda^{-1}.
    pub fn scale_matrix(&self, a: &Matrix) -> Matrix {
        assert_eq!(a.rows(), self.len());
        assert_eq!(a.cols(), self.len());
        Matrix::from_fn(a.rows(), a.cols(), |i, j| {
            a.get(i, j) / (self.lambdas[i] * self.lambdas[j])
        })
    }
}

/// Outcome of a scaling search: the best scaling found and whether it
/// certifies the Grothendieck-type bound at the constant used.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScalingCertificate {
    pub lambda: ScalingVector,
    /// Spectral norm of the scaled matrix at the returned scaling.
    pub scaled_norm: f64,
    /// Infinity-to-one norm of the unscaled matrix.
    pub infty_one: f64,
    pub kg_used: f64,
    pub certified: bool,
    /// True when any coordinate was clipped at the positivity floor.
    pub floored: bool,
}

/// Combines two scaling vectors into one dominating both, the
/// max-coordinate formula with the (sqrt3 - sqrt2)/sqrt(n) offset.
///
/// Inputs may have zero coordinates; the output is strictly positive,
/// has norm at most 1 and dominates each input coordinate up to the
/// factor sqrt 3.
pub fn combine_scalings(lambda0: &[f64], lambda1: &[f64]) -> Result<ScalingVector> {
    if lambda0.len() != lambda1.len() {
        return Err(Error::Input("scaling vectors must have equal length".into()));
    }
    if lambda0.is_empty() {
        return Err(Error::Input("scaling vectors must be nonempty".into()));
    }
    if lambda0.iter().chain(lambda1).any(|&l| l < 0.0) {
        return Err(Error::Input("scaling entries must be non-negative".into()));
    }
    for (name, l) in [("first", lambda0), ("second", lambda1)] {
        let norm = vec_norm(l);
        if norm > 1.0 + 1e-12 {
            return Err(Error::Input(format!(
                "{name} scaling vector has norm {norm} > 1"
            )));
        }
    }
    let n = lambda0.len() as f64;
    let sqrt3 = 3f64.sqrt();
    let offset = (sqrt3 - 2f64.sqrt()) / n.sqrt();
    let lambdas: Vec<f64> = lambda0
        .iter()
        .zip(lambda1)
        .map(|(&a, &b)| (offset + a.max(b)) / sqrt3)
        .collect();
    ScalingVector::new(lambdas)
}

/// Searches for a scaling minimizing the spectral norm of the scaled
/// matrix; the infinity-to-one norm is computed exactly inside.
pub fn scaling_search(a: &Matrix, iters: usize, seed: u64, kg: f64) -> Result<ScalingCertificate> {
    let infty_one = infty_one_exact(a)?.value;
    scaling_search_with_infty_one(a, iters, seed, kg, infty_one)
}

/// Same search with a caller-supplied infinity-to-one norm (for sizes
/// beyond exact enumeration).
///
/// The scaling is parametrized as lambda_i = exp(theta_i) normalized to
/// the unit sphere, and the spectral-norm subgradient (outer product of
/// the top singular pair) is descended with step halving, 10 restarts.
pub fn scaling_search_with_infty_one(
    a: &Matrix,
    iters: usize,
    seed: u64,
    kg: f64,
    infty_one: f64,
) -> Result<ScalingCertificate> {
    if !a.is_square() {
        return Err(Error::Input("scaling search requires a square matrix".into()));
    }
    let n = a.rows();
    if n == 0 || a.frob() == 0.0 {
        return Err(Error::Input(
            "scaling search is undefined for the zero matrix".into(),
        ));
    }
    let floor = 1e-8 / (n as f64).sqrt();
    let restarts = 10usize;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for restart in 0..restarts {
        let mut theta = if restart == 0 {
            vec![0.0; n]
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart as u64);
            (0..n).map(|_| gaussian(&mut rng)).collect()
        };
        let mut lambda = theta_to_lambda(&theta, floor);
        // acceptance uses the accurate norm: power-iteration estimates are
        // noisy on near-degenerate spectra and the line search would drift
        let mut value = singular_values(&scaled(a, &lambda))[0];
        let mut step = 0.1;
        for _ in 0..iters {
            let b = scaled(a, &lambda);
            let (sigma, u, v) = top_singular_with_pair(&b);
            if sigma == 0.0 {
                break;
            }
            // d sigma / d lambda_k = -(u_k (Bv)_k + (B^T u)_k v_k) / lambda_k
            let bv = b.matvec(&v);
            let btu = b.tvec(&u);
            let grad_lambda: Vec<f64> = (0..n)
                .map(|k| -(u[k] * bv[k] + btu[k] * v[k]) / lambda[k])
                .collect();
            // chain rule through the normalized exponential
            let inner: f64 = grad_lambda
                .iter()
                .zip(&lambda)
                .map(|(g, l)| g * l)
                .sum();
            let grad_theta: Vec<f64> = (0..n)
                .map(|k| grad_lambda[k] * lambda[k] - lambda[k] * lambda[k] * inner)
                .collect();
            let gnorm = vec_norm(&grad_theta);
            if gnorm < 1e-14 || step < 1e-14 {
                break;
            }
            let candidate: Vec<f64> = theta
                .iter()
                .zip(&grad_theta)
                .map(|(t, g)| t - step * g / gnorm)
                .collect();
            let cand_lambda = theta_to_lambda(&candidate, floor);
            let cand_value = singular_values(&scaled(a, &cand_lambda))[0];
            if cand_value < value {
                theta = candidate;
                lambda = cand_lambda;
                value = cand_value;
                step *= 1.1;
            } else {
                step *= 0.5;
            }
        }
        match &best {
            Some((v, _)) if *v <= value => {}
            _ => best = Some((value, lambda)),
        }
    }
    let (scaled_norm, lambda) = best.expect("at least one restart");
    let floored = lambda.iter().any(|&l| l <= floor);
    let certified = scaled_norm <= 3.0 * kg * infty_one + 1e-9;
    Ok(ScalingCertificate {
        lambda: ScalingVector::new(lambda)?,
        scaled_norm,
        infty_one,
        kg_used: kg,
        certified,
        floored,
    })
}

fn theta_to_lambda(theta: &[f64], floor: f64) -> Vec<f64> {
    // exponentials shifted by the max for overflow safety
    let max = theta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = theta.iter().map(|t| (t - max).exp()).collect();
    let norm = vec_norm(&exps);
    exps.iter().map(|e| (e / norm).max(floor)).collect()
}

fn scaled(a: &Matrix, lambda: &[f64]) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| {
        a.get(i, j) / (lambda[i] * lambda[j])
    })
}

/// Top singular value by power iteration on the Gram matrix.
fn top_singular(b: &Matrix) -> (f64, Vec<f64>) {
    let n = b.cols();
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * (i as f64 + 1.0)).collect();
    let nrm = vec_norm(&v);
    for x in v.iter_mut() {
        *x /= nrm;
    }
    let mut sigma = 0.0;
    for _ in 0..200 {
        let bv = b.matvec(&v);
        let w = b.tvec(&bv);
        let wnorm = vec_norm(&w);
        if wnorm == 0.0 {
            return (0.0, v);
        }
        let next_sigma = wnorm.sqrt();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wnorm;
        }
        if (next_sigma - sigma).abs() <= 1e-13 * next_sigma {
            sigma = next_sigma;
            break;
        }
        sigma = next_sigma;
    }
    (sigma, v)
}

fn top_singular_with_pair(b: &Matrix) -> (f64, Vec<f64>, Vec<f64>) {
    let (sigma, v) = top_singular(b);
    if sigma == 0.0 {
        return (0.0, vec![0.0; b.rows()], v);
    }
    let mut u = b.matvec(&v);
    let unorm = vec_norm(&u);
    if unorm > 0.0 {
        for x in u.iter_mut() {
            *x /= unorm;
        }
    }
    (sigma, u, v)
}

/// Two-sided report for an inequality check.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CheckReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// Checks the sqrt-rank absolute-sum inequality:
/// sum |a_ij| <= 3 kg sqrt(rank A) |A|_{inf->1}.
pub fn theorem1_check(a: &Matrix, kg: f64, tol: f64) -> Result<CheckReport> {
    if !a.is_square() {
        return Err(Error::Input("expected a square matrix".into()));
    }
    let lhs = crate::opnorms::abs_sum(a);
    let rank = numerical_rank(a, DEFAULT_RANK_TOL);
    let norm = infty_one_exact(a)?.value;
    let rhs = 3.0 * kg * (rank as f64).sqrt() * norm;
    Ok(CheckReport {
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        holds: lhs <= rhs * (1.0 + tol) + 1e-12,
    })
}

/// Checks the symplectic pairing inequality for the columns of `vectors`:
/// sum |<v_i, J v_j>| <= 3 kg sqrt(2n) |A|_{inf->1}.
pub fn corollary_check(vectors: &Matrix, kg: f64) -> Result<CheckReport> {
    if vectors.rows() % 2 != 0 || vectors.rows() == 0 {
        return Err(Error::Input(
            "ambient dimension must be even and positive".into(),
        ));
    }
    let two_n = vectors.rows();
    let space = crate::symplectic::SymplecticSpace::standard(two_n / 2)?;
    let a = vectors
        .transpose()
        .matmul(space.j_matrix())
        .matmul(vectors);
    let lhs = crate::opnorms::abs_sum(&a);
    let norm = infty_one_exact(&a)?.value;
    let rhs = 3.0 * kg * (two_n as f64).sqrt() * norm;
    Ok(CheckReport {
        lhs,
        rhs,
        ratio: if rhs > 0.0 { lhs / rhs } else { 0.0 },
        holds: lhs <= rhs * (1.0 + 1e-9) + 1e-12,
    })
}
