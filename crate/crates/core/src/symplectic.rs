//! Symplectic forms and matrices, symplectic basis normalization, the
//! taming pipeline that constructs a symplectic map bringing the sum of
//! norms of a vector family under its certified bound, and the example
//! generators used by the sweeps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::antisymmetric::{antisym_canonical, interleave_permutation};
use crate::error::{Error, Result};
use crate::grothendieck::{scaling_search, ScalingCertificate};
use crate::linalg::{matrix_exp, numerical_rank, orthonormalize, solve_right_factor, DEFAULT_RANK_TOL};
use crate::matrix::{axpy, dot, scale_vec, vec_norm, Matrix};
use crate::opnorms::{gaussian, infty_one_exact};

/// Euclidean space R^{2n} with an orthogonal complex structure J,
/// J^2 = -identity.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SymplecticSpace {
    half_dim: usize,
    j_matrix: Matrix,
}

impl SymplecticSpace {
    /// The standard structure: J e_i = e_{n+i}, J e_{n+i} = -e_i.
    pub fn standard(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Input("half dimension must be at least 1".into()));
        }
        let mut j = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            j.set(n + i, i, 1.0);
            j.set(i, n + i, -1.0);
        }
        Ok(Self {
            half_dim: n,
            j_matrix: j,
        })
    }

    pub fn half_dim(&self) -> usize {
        self.half_dim
    }

    pub fn dim(&self) -> usize {
        2 * self.half_dim
    }

    pub fn j_matrix(&self) -> &Matrix {
        &self.j_matrix
    }

    /// J applied to a vector.
    pub fn j_apply(&self, v: &[f64]) -> Vec<f64> {
        self.j_matrix.matvec(v)
    }

    /// The symplectic product <u, J v>.
    pub fn pairing(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(u, &self.j_apply(v))
    }
}

/// Residual |S^T J S - J| and whether it is below `tol`.
pub fn is_symplectic(s: &Matrix, space: &SymplecticSpace, tol: f64) -> Result<(f64, bool)> {
    let d = space.dim();
    if s.rows() != d || s.cols() != d {
        return Err(Error::Input(format!(
            "expected a {d}x{d} matrix, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    let j = space.j_matrix();
    let residual = s.transpose().matmul(j).matmul(s).sub(j).frob();
    Ok((residual, residual <= tol))
}

/// A finite family of vectors in a symplectic space, stored as the
/// columns of a 2n x N matrix.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct VectorFamily {
    space: SymplecticSpace,
    columns: Matrix,
}

impl VectorFamily {
    pub fn new(space: SymplecticSpace, columns: Matrix) -> Result<Self> {
        if columns.rows() != space.dim() {
            return Err(Error::Input(format!(
                "columns live in dimension {}, space has dimension {}",
                columns.rows(),
                space.dim()
            )));
        }
        if columns.cols() == 0 {
            return Err(Error::Input("family must contain at least one vector".into()));
        }
        Ok(Self { space, columns })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn columns(&self) -> &Matrix {
        &self.columns
    }

    /// Number of vectors in the family (always at least one).
    pub fn len(&self) -> usize {
        self.columns.cols()
    }

    /// Sum of Euclidean norms of the vectors.
    pub fn norm_sum(&self) -> f64 {
        (0..self.len())
            .map(|i| vec_norm(&self.columns.col(i)))
            .sum()
    }

    /// The antisymmetric pairing matrix A = V^T J V.
    pub fn pairing_matrix(&self) -> Matrix {
        let raw = self
            .columns
            .transpose()
            .matmul(self.space.j_matrix())
            .matmul(&self.columns);
        // antisymmetrize: forces the diagonal to exact zero, so an
        // all-round-off matrix cannot pick up a spurious numerical rank
        raw.sub(&raw.transpose()).scaled(0.5)
    }

    /// Applies a symplectic matrix to every vector of the family.
    pub fn transform(&self, s: &Matrix) -> Result<VectorFamily> {
        let scale = 1.0 + s.frob() * s.frob();
        let (residual, ok) = is_symplectic(s, &self.space, 1e-8 * scale)?;
        if !ok {
            return Err(Error::Input(format!(
                "matrix is not symplectic: residual {residual:.3e}"
            )));
        }
        Ok(VectorFamily {
            space: self.space.clone(),
            columns: s.matmul(&self.columns),
        })
    }
}

/// Convenience wrapper over [`VectorFamily::pairing_matrix`].
pub fn pairing_matrix(fam: &VectorFamily) -> Matrix {
    fam.pairing_matrix()
}

/// Convenience wrapper over [`VectorFamily::transform`].
pub fn symplectic_transform(fam: &VectorFamily, s: &Matrix) -> Result<VectorFamily> {
    fam.transform(s)
}

/// Normalization of the span of a family: dimensions k (symplectic
/// pairs) and l (isotropic directions), the symplectic matrix T mapping
/// the span onto the standard subspace, and the four coordinate
/// projections in the normalized frame.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IsotropicSplit {
    pub k: usize,
    pub l: usize,
    pub t: Matrix,
    /// Orthogonal projections onto E0, E1, E2, E3 in normalized
    /// coordinates (diagonal 0/1 matrices).
    pub projections: [Matrix; 4],
}

impl IsotropicSplit {
    /// Row indices of the reduced symplectic space E0 inside R^{2n}:
    /// coordinates 1..k and n+1..n+k.
    pub fn e0_indices(&self, half_dim: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.k).collect();
        idx.extend(half_dim..half_dim + self.k);
        idx
    }
}

fn coordinate_projection(dim: usize, coords: &[usize]) -> Matrix {
    let mut p = Matrix::zeros(dim, dim);
    for &c in coords {
        p.set(c, c, 1.0);
    }
    p
}

/// Symplectic Gram-Schmidt normalization of the span of a family.
///
/// Greedy pivoting: at each step the pair of residual basis vectors with
/// the largest symplectic pairing is normalized into a symplectic pair
/// and projected out; what remains below the pairing tolerance is the
/// isotropic part. The basis is then completed to a full symplectic
/// basis of R^{2n} and inverted into T.
pub fn symplectic_basis_extension(fam: &VectorFamily, tol: f64) -> Result<IsotropicSplit> {
    let space = fam.space();
    let n = space.half_dim();
    let dim = space.dim();

    // Euclidean orthonormal basis of E = span of the family
    let basis_rows = orthonormalize(&fam.columns().transpose(), tol.max(1e-12));
    let mut working: Vec<Vec<f64>> = (0..basis_rows.rows())
        .map(|i| basis_rows.row(i).to_vec())
        .collect();

    // reference scale for rank decisions on the pairing
    let mut max_pairing: f64 = 0.0;
    for i in 0..working.len() {
        for j in i + 1..working.len() {
            max_pairing = max_pairing.max(space.pairing(&working[i], &working[j]).abs());
        }
    }
    let pair_tol = DEFAULT_RANK_TOL * max_pairing.max(f64::MIN_POSITIVE);

    // symplectic pairs (p, q) with <p, Jq> = 1
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    loop {
        let mut best = (0usize, 0usize, 0.0f64);
        for i in 0..working.len() {
            for j in i + 1..working.len() {
                let w = space.pairing(&working[i], &working[j]);
                if w.abs() > best.2.abs() {
                    best = (i, j, w);
                }
            }
        }
        if best.2.abs() <= pair_tol || working.len() < 2 {
            break;
        }
        let (bi, bj, omega) = best;
        let (mut p, mut q) = if omega > 0.0 {
            (working[bi].clone(), working[bj].clone())
        } else {
            (working[bj].clone(), working[bi].clone())
        };
        let root = omega.abs().sqrt();
        scale_vec(&mut p, 1.0 / root);
        scale_vec(&mut q, 1.0 / root);
        // remove the two pivots, symplectically project the rest
        let mut rest: Vec<Vec<f64>> = working
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *i != bi && *i != bj)
            .map(|(_, v)| v)
            .collect();
        for v in rest.iter_mut() {
            symplectic_project(space, v, &p, &q);
        }
        pairs.push((p, q));
        // Euclidean re-orthonormalization keeps the working set conditioned
        working = reorthonormalize(rest, 1e-10);
    }
    let k = pairs.len();

    // isotropic directions, Euclidean orthonormal
    let isotropic = reorthonormalize(working, 1e-10);
    let l = isotropic.len();
    if k + l > n {
        return Err(Error::Consistency(format!(
            "extracted k = {k}, l = {l} with k + l > n = {n}"
        )));
    }

    // partners for the isotropic directions: start from J z_j, project
    // against the complete pairs, then correct mutual pairings. The
    // partner is normalized so <z_j, J w_j> = 1 (z_j sits in the second
    // half of the basis).
    let mut partners: Vec<Vec<f64>> = Vec::new();
    for j in 0..l {
        let mut w = space.j_apply(&isotropic[j]);
        for (p, q) in &pairs {
            symplectic_project(space, &mut w, p, q);
        }
        let omega = space.pairing(&w, &isotropic[j]);
        if omega.abs() <= f64::MIN_POSITIVE {
            return Err(Error::Consistency(
                "degenerate partner for an isotropic direction".into(),
            ));
        }
        scale_vec(&mut w, -1.0 / omega);
        // cancel <w, J w_i> against already-built partners; adding a
        // multiple of z_i leaves every other pairing untouched
        for (i, wi) in partners.iter().enumerate() {
            let c = -space.pairing(&w, wi);
            let zi = isotropic[i].clone();
            axpy(&mut w, c, &zi);
        }
        partners.push(w);
    }

    // filler pairs spanning the rest of R^{2n}; projection pairs are
    // stored in the <p, Jq> = 1 orientation
    let mut all_pairs: Vec<(Vec<f64>, Vec<f64>)> = pairs.clone();
    for (w, z) in partners.iter().zip(&isotropic) {
        all_pairs.push((z.clone(), w.clone()));
    }
    let mut filler: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    while all_pairs.len() < n {
        let mut candidate: Option<Vec<f64>> = None;
        for e in 0..dim {
            let mut u = vec![0.0; dim];
            u[e] = 1.0;
            for (p, q) in &all_pairs {
                symplectic_project(space, &mut u, p, q);
            }
            // also keep it off the span already chosen for conditioning
            let nrm = vec_norm(&u);
            if nrm > 1e-6 {
                scale_vec(&mut u, 1.0 / nrm);
                candidate = Some(u);
                break;
            }
        }
        let u = candidate.ok_or_else(|| {
            Error::Consistency("failed to complete the symplectic basis".into())
        })?;
        let mut v = space.j_apply(&u).iter().map(|x| -x).collect::<Vec<f64>>();
        for (p, q) in &all_pairs {
            symplectic_project(space, &mut v, p, q);
        }
        let omega = space.pairing(&u, &v);
        if omega <= 0.0 {
            return Err(Error::Consistency(
                "filler pair lost its positive pairing".into(),
            ));
        }
        let root = omega.sqrt();
        let mut p = u;
        let mut q = v;
        scale_vec(&mut p, 1.0 / root);
        scale_vec(&mut q, 1.0 / root);
        all_pairs.push((p.clone(), q.clone()));
        filler.push((p, q));
    }

    // G columns: a_1..a_n then b_1..b_n in the order
    // (symplectic pairs of E, partners of isotropics, filler)
    // a pair (p, q) with <p, Jq> = 1 sits as a = q, b = p, matching the
    // sign pattern of the standard form
    let mut a_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut b_cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for (p, q) in &pairs {
        a_cols.push(q.clone());
        b_cols.push(p.clone());
    }
    for (w, z) in partners.iter().zip(&isotropic) {
        a_cols.push(w.clone());
        b_cols.push(z.clone());
    }
    for (p, q) in &filler {
        a_cols.push(q.clone());
        b_cols.push(p.clone());
    }
    let mut cols = a_cols;
    cols.extend(b_cols);
    let g = Matrix::from_cols(&cols)?;
    // G is symplectic, so G^{-1} = -J G^T J
    let j = space.j_matrix();
    let t = j.matmul(&g.transpose()).matmul(j).scaled(-1.0);

    let e0: Vec<usize> = (0..k).chain(n..n + k).collect();
    let e1: Vec<usize> = (n + k..n + k + l).collect();
    let e2: Vec<usize> = (k..k + l).collect();
    let e3: Vec<usize> = (k + l..n).chain(n + k + l..2 * n).collect();
    Ok(IsotropicSplit {
        k,
        l,
        t,
        projections: [
            coordinate_projection(dim, &e0),
            coordinate_projection(dim, &e1),
            coordinate_projection(dim, &e2),
            coordinate_projection(dim, &e3),
        ],
    })
}

/// Removes the symplectic components of `v` along the pair (p, q) with
/// <p, Jq> = 1.
fn symplectic_project(space: &SymplecticSpace, v: &mut Vec<f64>, p: &[f64], q: &[f64]) {
    let alpha = space.pairing(v, q); // <v, Jq>
    let beta = space.pairing(v, p); // <v, Jp>
    let mut tmp = v.clone();
    axpy(&mut tmp, -alpha, p);
    axpy(&mut tmp, beta, q);
    *v = tmp;
}

fn reorthonormalize(vectors: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            let c = dot(&v, b);
            axpy(&mut v, -c, b);
        }
        for b in &basis {
            let c = dot(&v, b);
            axpy(&mut v, -c, b);
        }
        let nrm = vec_norm(&v);
        if nrm > tol {
            scale_vec(&mut v, 1.0 / nrm);
            basis.push(v);
        }
    }
    basis
}

/// Tag for which branch of the construction applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CaseTag {
    /// The pairing matrix has full rank 2n.
    FullRank,
    /// Rank below 2n; the result is an epsilon-family.
    Degenerate,
}

/// Tuning knobs for the taming pipeline.
#[derive(Clone, Debug)]
pub struct TameParams {
    pub iters: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for TameParams {
    fn default() -> Self {
        Self {
            iters: 200,
            seed: 7,
            tol: 1e-8,
        }
    }
}

/// Output of the taming pipeline.
#[derive(Clone, Debug)]
pub struct TameResult {
    /// The symplectic map evaluated at the requested epsilon.
    pub s_matrix: Matrix,
    /// Sum of norms of the transformed family at that epsilon.
    pub achieved_sum: f64,
    /// The epsilon -> 0 limit value (contribution of the reduced
    /// symplectic part only); equal to `achieved_sum` when the family
    /// spans no isotropic directions.
    pub limit_sum: f64,
    /// sqrt(3 kg rank(A) |A|_{inf->1}) of the unscaled family.
    pub certified_bound: f64,
    /// sqrt(scaled_norm rank(A) |A|_{inf->1}); the bound actually
    /// achieved by the search even when certification failed.
    pub empirical_bound: f64,
    pub certified: bool,
    pub case_tag: CaseTag,
    /// The intermediate right factor W = P D_M Q D_Lambda (2k x N).
    pub w_matrix: Matrix,
    pub eps: f64,
    /// Residual of S^T J S - J at the requested epsilon.
    pub symplectic_residual: f64,
    /// Scaling certificate of the reduced pairing, when a reduction ran.
    pub scaling: Option<ScalingCertificate>,
    s0_full: Matrix,
    projections: [Matrix; 4],
    t: Matrix,
    space: SymplecticSpace,
}

impl TameResult {
    /// The symplectic map at an arbitrary epsilon > 0.
    pub fn s_at(&self, eps: f64) -> Result<Matrix> {
        if !(eps > 0.0) {
            return Err(Error::Input("epsilon must be positive".into()));
        }
        let [p0, p1, p2, p3] = &self.projections;
        let core = self
            .s0_full
            .matmul(p0)
            .add(&p1.scaled(eps))
            .add(&p2.scaled(1.0 / eps))
            .add(p3);
        Ok(core.matmul(&self.t))
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }
}

/// Constructs a symplectic map bringing the sum of norms of the family
/// toward sqrt(3 kg rank(A) |A|_{inf->1}).
///
/// Pipeline: normalize the pairing norm to 1, normalize the span with
/// [`symplectic_basis_extension`], reduce to the symplectic part, run
/// the scaling search plus antisymmetric canonical form there, read the
/// map off the right factor W = P D_M Q D_Lambda, and reassemble the
/// epsilon-family through T.
pub fn tame(fam: &VectorFamily, kg: f64, eps: f64, params: &TameParams) -> Result<TameResult> {
    if !(eps > 0.0) {
        return Err(Error::Input("epsilon must be positive".into()));
    }
    let space = fam.space().clone();
    let n = space.half_dim();
    let cols = fam.len();

    let a = fam.pairing_matrix();
    let norm_a = infty_one_exact(&a)?.value;
    let rank_a = numerical_rank(&a, DEFAULT_RANK_TOL);
    let certified_bound = (3.0 * kg * rank_a as f64 * norm_a).sqrt();

    // homogeneity: scale vectors so the pairing norm becomes 1
    let normalized_columns = if norm_a > 0.0 {
        fam.columns().scaled(1.0 / norm_a.sqrt())
    } else {
        fam.columns().clone()
    };
    let fam_n = VectorFamily {
        space: space.clone(),
        columns: normalized_columns,
    };

    let split = symplectic_basis_extension(&fam_n, params.tol)?;
    let k = split.k;
    if 2 * k != rank_a {
        return Err(Error::Consistency(format!(
            "pairing rank {rank_a} disagrees with 2k = {}",
            2 * k
        )));
    }
    let normalized = split.t.matmul(fam_n.columns());
    let e0 = split.e0_indices(n);

    let (s0_red, w_matrix, scaling) = if k > 0 {
        let v0 = normalized.select_rows(&e0);
        let j_red = SymplecticSpace::standard(k)?;
        let a0 = v0.transpose().matmul(j_red.j_matrix()).matmul(&v0);
        let cert = scaling_search(&a0, params.iters, params.seed, kg)?;
        let b = cert.lambda.scale_matrix(&a0);
        let form = antisym_canonical(&b, 1e-6)?;
        if form.pair_count() != k {
            return Err(Error::Consistency(format!(
                "canonical form yields {} pairs, expected {k}",
                form.pair_count()
            )));
        }
        let p = interleave_permutation(k)?;
        let dm = form.sqrt_mu_diagonal();
        let dl = Matrix::diag(cert.lambda.lambdas());
        let w = p.matmul(&dm).matmul(form.q_rows()).matmul(&dl);
        let s0 = solve_right_factor(&v0, &w, params.tol.max(1e-7))?;
        (s0, w, Some(cert))
    } else {
        (Matrix::zeros(0, 0), Matrix::zeros(0, cols), None)
    };

    // embed the reduced map at the E0 coordinates
    let dim = space.dim();
    let mut s0_full = Matrix::zeros(dim, dim);
    for i in 0..2 * k {
        for j in 0..2 * k {
            s0_full.set(e0[i], e0[j], s0_red.get(i, j));
        }
    }

    let certified = scaling.as_ref().map_or(true, |c| c.certified);
    let empirical_bound = scaling
        .as_ref()
        .map_or(0.0, |c| (c.scaled_norm * rank_a as f64 * norm_a).sqrt());

    let result_skeleton = TameResult {
        s_matrix: Matrix::zeros(dim, dim),
        achieved_sum: 0.0,
        limit_sum: 0.0,
        certified_bound,
        empirical_bound,
        certified,
        case_tag: if rank_a == 2 * n {
            CaseTag::FullRank
        } else {
            CaseTag::Degenerate
        },
        w_matrix,
        eps,
        symplectic_residual: 0.0,
        scaling,
        s0_full,
        projections: split.projections.clone(),
        t: split.t.clone(),
        space: space.clone(),
    };
    let s_matrix = result_skeleton.s_at(eps)?;
    let (symplectic_residual, _) = is_symplectic(&s_matrix, &space, f64::INFINITY)?;
    let transformed = s_matrix.matmul(fam.columns());
    let achieved_sum: f64 = (0..cols).map(|i| vec_norm(&transformed.col(i))).sum();
    // epsilon -> 0 limit: only the reduced part survives on the family
    let limit_map = result_skeleton
        .s0_full
        .matmul(&result_skeleton.projections[0])
        .matmul(&result_skeleton.t);
    let limited = limit_map.matmul(fam.columns());
    let limit_sum: f64 = (0..cols).map(|i| vec_norm(&limited.col(i))).sum();

    Ok(TameResult {
        s_matrix,
        achieved_sum,
        limit_sum,
        symplectic_residual,
        ..result_skeleton
    })
}

/// Random element of Sp(2n): exp(J H) for a random symmetric H.
pub fn random_symplectic(n: usize, scale: f64, seed: u64) -> Result<Matrix> {
    let space = SymplecticSpace::standard(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * n;
    let mut h = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x = scale * gaussian(&mut rng);
            h.set(i, j, x);
            h.set(j, i, x);
        }
    }
    matrix_exp(&space.j_matrix().matmul(&h))
}

/// The 2m x 2m orthogonal matrix of rotation blocks built from the
/// discrete Fourier angles 2 pi j l / m; every entry is at most
/// sqrt(2)/sqrt(2m).
pub fn fourier_orthogonal(m: usize) -> Matrix {
    assert!(m >= 1);
    let inv = 1.0 / (m as f64).sqrt();
    Matrix::from_fn(2 * m, 2 * m, |r, c| {
        let (j, dr) = (r / 2 + 1, r % 2);
        let (l, dc) = (c / 2 + 1, c % 2);
        let angle = 2.0 * std::f64::consts::PI * (j as f64) * (l as f64) / m as f64;
        inv * match (dr, dc) {
            (0, 0) => angle.cos(),
            (0, 1) => -angle.sin(),
            (1, 0) => angle.sin(),
            _ => angle.cos(),
        }
    })
}

/// The sharp family: e_1..e_m and e_{n+1}..e_{n+m}, padded with zero
/// vectors up to N columns. Its pairing matrix is the 2m-dimensional
/// standard symplectic block padded by zeros.
pub fn example2_vectors(n: usize, m: usize, total: usize) -> Result<VectorFamily> {
    if m > n {
        return Err(Error::Input(format!("m = {m} exceeds n = {n}")));
    }
    if m < 1 || total < 2 * m {
        return Err(Error::Input("need m >= 1 and N >= 2m".into()));
    }
    let space = SymplecticSpace::standard(n)?;
    let mut columns = Matrix::zeros(2 * n, total);
    for i in 0..m {
        columns.set(i, i, 1.0);
        columns.set(n + i, m + i, 1.0);
    }
    VectorFamily::new(space, columns)
}
