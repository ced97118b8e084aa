//! The l-infinity to l-1 operator norm: exact by sign enumeration at
//! small size, bracketed by a low-rank relaxation heuristic beyond.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{dot, vec_norm, Matrix};

/// Largest admissible min-dimension for exact enumeration.
pub const ENUMERATION_LIMIT: usize = 25;

/// Exact value of the infinity-to-one norm with an attaining sign pair.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct InftyOneResult {
    pub value: f64,
    /// Left sign vector, one entry of +-1 per row.
    pub witness_t: Vec<f64>,
    /// Right sign vector, one entry of +-1 per column.
    pub witness_s: Vec<f64>,
    pub exact: bool,
}

/// Sum of absolute values of all entries.
pub fn abs_sum(a: &Matrix) -> f64 {
    a.data().iter().map(|x| x.abs()).sum()
}

/// Exact infinity-to-one norm by enumerating sign vectors on the smaller
/// side. The maximum of the bilinear form over the cube is attained at a
/// sign vertex, so vertex enumeration is exact.
///
/// The first sign is fixed to +1 (global sign symmetry); among equal
/// maximizers the first one in lexicographic order (+1 before -1) wins.
pub fn infty_one_exact(a: &Matrix) -> Result<InftyOneResult> {
    let (m, n) = (a.rows(), a.cols());
    if m.min(n) > ENUMERATION_LIMIT {
        return Err(Error::Capacity(format!(
            "min dimension {} exceeds the enumeration limit {}; \
             use infty_one_bounds instead",
            m.min(n),
            ENUMERATION_LIMIT
        )));
    }
    if m == 0 || n == 0 {
        return Ok(InftyOneResult {
            value: 0.0,
            witness_t: vec![1.0; m],
            witness_s: vec![1.0; n],
            exact: true,
        });
    }
    if n > m {
        // work on the transpose; t and s swap roles
        let r = infty_one_exact(&a.transpose())?;
        return Ok(InftyOneResult {
            value: r.value,
            witness_t: r.witness_s,
            witness_s: r.witness_t,
            exact: true,
        });
    }
    let mut best_value = f64::NEG_INFINITY;
    let mut best_s = vec![1.0; n];
    let mut s = vec![1.0; n];
    let count = 1u64 << (n - 1);
    for code in 0..count {
        // s[0] fixed to +1; remaining bits in lexicographic order
        for i in 1..n {
            let bit = (code >> (n - 1 - i)) & 1;
            s[i] = if bit == 1 { -1.0 } else { 1.0 };
        }
        let value: f64 = a.matvec(&s).iter().map(|x| x.abs()).sum();
        if value > best_value {
            best_value = value;
            best_s.copy_from_slice(&s);
        }
    }
    let as_ = a.matvec(&best_s);
    let witness_t: Vec<f64> = as_
        .iter()
        .map(|&x| if x < 0.0 { -1.0 } else { 1.0 })
        .collect();
    Ok(InftyOneResult {
        value: best_value,
        witness_t,
        witness_s: best_s,
        exact: true,
    })
}

/// Heuristic bracket `lower <= |A|_{inf->1} <= upper` for matrices beyond
/// the enumeration limit.
///
/// Block-coordinate ascent on unit vectors of dimension `rank_param`
/// (a low-rank version of the Grothendieck relaxation) gives a relaxation
/// value; sign-rounding its iterates gives the lower bound and the
/// Grothendieck constant times the relaxation value gives the upper.
pub fn infty_one_bounds(
    a: &Matrix,
    rank_param: usize,
    iters: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if rank_param == 0 {
        return Err(Error::Input("rank_param must be at least 1".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    if a.frob() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let kg = crate::grothendieck::kg_upper();
    let restarts = 20;
    let mut best_relax = 0.0f64;
    let mut best_lower = a.max_abs(); // unit coordinate witnesses
    for restart in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(restart as u64);
        let mut xs = random_unit_rows(&mut rng, m, rank_param);
        let mut ys = random_unit_rows(&mut rng, n, rank_param);
        let mut value = bilinear_value(a, &xs, &ys);
        for _ in 0..iters.max(1) {
            // x_i <- normalize(sum_j a_ij y_j)
            for i in 0..m {
                let mut acc = vec![0.0; rank_param];
                for j in 0..n {
                    let c = a.get(i, j);
                    for (r, y) in acc.iter_mut().zip(&ys[j]) {
                        *r += c * y;
                    }
                }
                normalize_or_keep(&mut xs[i], &acc);
            }
            for j in 0..n {
                let mut acc = vec![0.0; rank_param];
                for i in 0..m {
                    let c = a.get(i, j);
                    for (r, x) in acc.iter_mut().zip(&xs[i]) {
                        *r += c * x;
                    }
                }
                normalize_or_keep(&mut ys[j], &acc);
            }
            let next = bilinear_value(a, &xs, &ys);
            if next - value <= 1e-12 * value.abs().max(1.0) {
                value = next;
                break;
            }
            value = next;
        }
        best_relax = best_relax.max(value);
        // hyperplane rounding of the y side
        for _ in 0..(2 * rank_param + 10) {
            let g: Vec<f64> = (0..rank_param).map(|_| gaussian(&mut rng)).collect();
            let s: Vec<f64> = ys
                .iter()
                .map(|y| if dot(y, &g) < 0.0 { -1.0 } else { 1.0 })
                .collect();
            let rounded: f64 = a.matvec(&s).iter().map(|x| x.abs()).sum();
            best_lower = best_lower.max(rounded);
        }
    }
    let upper = (kg * best_relax).max(best_lower);
    Ok((best_lower, upper))
}

fn random_unit_rows(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let mut v: Vec<f64> = (0..dim).map(|_| gaussian(rng)).collect();
            let nrm = vec_norm(&v);
            if nrm == 0.0 {
                v[0] = 1.0;
            } else {
                for x in v.iter_mut() {
                    *x /= nrm;
                }
            }
            v
        })
        .collect()
}

fn normalize_or_keep(target: &mut Vec<f64>, candidate: &[f64]) {
    let nrm = vec_norm(candidate);
    if nrm > 0.0 {
        *target = candidate.iter().map(|x| x / nrm).collect();
    }
}

fn bilinear_value(a: &Matrix, xs: &[Vec<f64>], ys: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            total += a.get(i, j) * dot(&xs[i], &ys[j]);
        }
    }
    total
}

/// Box-Muller standard normal sample.
pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Default relaxation dimension, ceil(sqrt(2 max(m, n))).
pub fn default_rank_param(a: &Matrix) -> usize {
    ((2 * a.rows().max(a.cols())) as f64).sqrt().ceil() as usize
}
