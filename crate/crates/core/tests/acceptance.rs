//! Acceptance gate: one test per shipping criterion, each printing a
//! single pass/fail line.

use std::time::Instant;

use grosym::{
    antisym_canonical, blt_sweep, example2_vectors, hs_norm, infty_one_exact, kg_upper,
    orthonormalize, random_symplectic, scaling_search, sharpness_sweep, spectral_norm,
    symplectic_transform, tame, theorem1_check, Matrix, SymplecticSpace, TameParams, VectorFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// 500 square matrices, N <= 12, four ensembles: Gaussian, +-1
/// Bernoulli, sparse, and rank-deficient.
fn square_corpus() -> Vec<Matrix> {
    let mut out = Vec::with_capacity(500);
    for i in 0..500u64 {
        let mut rng = rng_for(1000 + i);
        let n = 1 + (i as usize % 12);
        let mut a = match i % 4 {
            0 => Matrix::from_fn(n, n, |_, _| gaussian(&mut rng)),
            1 => Matrix::from_fn(n, n, |_, _| if rng.gen::<bool>() { 1.0 } else { -1.0 }),
            2 => Matrix::from_fn(n, n, |_, _| {
                if rng.gen::<f64>() < 0.2 {
                    gaussian(&mut rng)
                } else {
                    0.0
                }
            }),
            _ => {
                let r = 1 + (i as usize / 4) % n.max(1);
                let left = Matrix::from_fn(n, r, |_, _| gaussian(&mut rng));
                let right = Matrix::from_fn(r, n, |_, _| gaussian(&mut rng));
                left.matmul(&right)
            }
        };
        if a.frob() == 0.0 {
            a.set(0, 0, 1.0);
        }
        out.push(a);
    }
    out
}

#[test]
fn criterion_1_sqrt_rank_inequality_corpus() {
    let start = Instant::now();
    let mut violations = 0usize;
    for a in &square_corpus() {
        let report = theorem1_check(a, kg_upper(), 1e-9).unwrap();
        if !report.holds {
            violations += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = violations == 0 && elapsed < 60.0;
    println!(
        "criterion 1: {} ({violations} violations, {elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_2_scaling_search_certification_rate() {
    let start = Instant::now();
    let corpus = square_corpus();
    let mut certified = 0usize;
    let mut failures: Vec<usize> = Vec::new();
    for (i, a) in corpus.iter().enumerate() {
        let cert = scaling_search(a, 120, i as u64, kg_upper()).unwrap();
        if cert.certified {
            certified += 1;
        } else {
            failures.push(i);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let rate = certified as f64 / corpus.len() as f64;
    let pass = rate >= 0.99 && elapsed < 120.0;
    println!(
        "criterion 2: {} (certified {certified}/{} = {rate:.3}, failures {failures:?}, {elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        corpus.len()
    );
    assert!(pass);
}

#[test]
fn criterion_3_fourier_block_sharpness() {
    let start = Instant::now();
    let report = sharpness_sweep(&[1, 2, 4, 8, 16], 32, kg_upper()).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let floor = 1.0 / 2f64.sqrt() - 1e-9;
    let pass = report.rows.iter().all(|r| r.ratio >= floor) && elapsed < 30.0;
    println!(
        "criterion 3: {} (min ratio {:.6} vs floor {:.6}, {elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        report.min_ratio,
        floor
    );
    assert!(pass);
}

#[test]
fn criterion_4_antisymmetric_canonical_form() {
    let start = Instant::now();
    let mut pass = true;
    for i in 0..200u64 {
        let mut rng = rng_for(4000 + i);
        let n = 2 + (i as usize % 19); // 2..=20
        let b = match i % 4 {
            0 | 3 => {
                let g = Matrix::from_fn(n, n, |_, _| gaussian(&mut rng));
                g.sub(&g.transpose()).scaled(if i % 4 == 0 { 0.5 } else { 3.0 })
            }
            1 => {
                // rank-deficient: small antisymmetric block padded with zeros
                let m = 2.max(n / 2);
                let g = Matrix::from_fn(m, m, |_, _| gaussian(&mut rng));
                let small = g.sub(&g.transpose()).scaled(0.5);
                let mut big = Matrix::zeros(n, n);
                big.set_block(0, 0, &small);
                big
            }
            _ => {
                // repeated mu: sum of mu_j (x y^T - y x^T) over an
                // orthonormal set with deliberately equal coefficients
                let raw = Matrix::from_fn(n, n, |_, _| gaussian(&mut rng));
                let basis = orthonormalize(&raw, 1e-10);
                let pairs = basis.rows() / 2;
                let mut b = Matrix::zeros(n, n);
                for j in 0..pairs {
                    let mu = (1 + j / 2) as f64; // each value used twice
                    let x = basis.row(2 * j).to_vec();
                    let y = basis.row(2 * j + 1).to_vec();
                    for r in 0..n {
                        for c in 0..n {
                            let v = b.get(r, c) + mu * (x[r] * y[c] - y[r] * x[c]);
                            b.set(r, c, v);
                        }
                    }
                }
                b
            }
        };
        let form = antisym_canonical(&b, 1e-9).unwrap();
        let scale = hs_norm(&b).max(1.0);
        let residual = hs_norm(&grosym::reconstruct(&form).sub(&b)) / scale;
        let q = form.q_rows();
        let gram = q.matmul(&q.transpose());
        let ortho = hs_norm(&gram.sub(&Matrix::identity(gram.rows())));
        let top_mu = form.mus().first().copied().unwrap_or(0.0);
        let spec = spectral_norm(&b);
        let mu_err = (top_mu - spec).abs() / spec.max(1.0);
        if residual > 1e-8 || ortho > 1e-10 || mu_err > 1e-9 {
            println!(
                "  case {i}: residual {residual:.2e} ortho {ortho:.2e} mu_err {mu_err:.2e}"
            );
            pass = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 4: {} ({elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_5_taming_bound() {
    let start = Instant::now();
    let eps = 1e-6;
    let params = TameParams::default();
    let mut pass = true;
    for i in 0..200u64 {
        let mut rng = rng_for(5000 + i);
        let n = 1 + (i as usize % 4);
        let len = 1 + (i as usize % 10);
        let cols = match i % 3 {
            0 => Matrix::from_fn(2 * n, len, |_, _| gaussian(&mut rng)),
            1 => {
                // Lagrangian span: only the first n coordinates
                Matrix::from_fn(2 * n, len, |r, _| if r < n { gaussian(&mut rng) } else { 0.0 })
            }
            _ => Matrix::from_fn(2 * n, len, |r, c| {
                if c % 2 == 0 || r < n {
                    gaussian(&mut rng)
                } else {
                    0.0
                }
            }),
        };
        let fam = VectorFamily::new(SymplecticSpace::standard(n).unwrap(), cols).unwrap();
        let result = tame(&fam, kg_upper(), eps, &params).unwrap();
        // the epsilon -> 0 limit obeys the certified bound; the finite
        // epsilon evaluation adds an O(eps) contribution on top
        let limit_ok = result.limit_sum <= result.certified_bound * (1.0 + 1e-6) + 1e-9;
        let eps_ok =
            result.achieved_sum <= result.limit_sum + eps * 100.0 * fam.norm_sum() + 1e-9;
        if !(result.certified && limit_ok && eps_ok && result.symplectic_residual <= 1e-8) {
            println!(
                "  family {i}: certified {} limit {:.6} bound {:.6} achieved {:.6} residual {:.2e}",
                result.certified,
                result.limit_sum,
                result.certified_bound,
                result.achieved_sum,
                result.symplectic_residual
            );
            pass = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass = pass && elapsed < 180.0;
    println!(
        "criterion 5: {} ({elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_6_lower_bound_family() {
    let start = Instant::now();
    let mut pass = true;
    for m in 1..=3usize {
        let fam = example2_vectors(m, m, 2 * m).unwrap();
        for seed in 0..100u64 {
            let s = random_symplectic(m, 0.8, 600 + seed).unwrap();
            let moved = symplectic_transform(&fam, &s).unwrap();
            let sum = moved.norm_sum();
            if sum < 2.0 * m as f64 - 1e-8 {
                println!("  m {m} seed {seed}: sum {sum:.9} < {}", 2 * m);
                pass = false;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 6: {} ({elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_7_pairing_sweep_growth() {
    let start = Instant::now();
    let mut cns = Vec::new();
    let mut pass = true;
    for n in 1..=3usize {
        let report = blt_sweep(&[n], 10, 50, 77, kg_upper()).unwrap();
        let cn = report.empirical_cn.unwrap();
        let cap = 3.0 * kg_upper() * ((2 * n) as f64).sqrt();
        if !report.all_hold || cn > cap {
            pass = false;
        }
        cns.push(cn);
    }
    if !(cns[0] <= cns[1] && cns[1] <= cns[2]) {
        pass = false;
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 7: {} (empirical constants {:?}, {elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" },
        cns
    );
    assert!(pass);
}

/// Brute force over the full sign cube on both sides, written
/// independently of the production enumeration.
fn brute_force_infty_one(a: &Matrix) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    let mut best = f64::NEG_INFINITY;
    for smask in 0..(1u64 << n) {
        let s: Vec<f64> = (0..n)
            .map(|j| if smask >> j & 1 == 1 { 1.0 } else { -1.0 })
            .collect();
        let as_vec = a.matvec(&s);
        for tmask in 0..(1u64 << m) {
            let mut total = 0.0;
            for (i, x) in as_vec.iter().enumerate() {
                total += if tmask >> i & 1 == 1 { *x } else { -*x };
            }
            best = best.max(total);
        }
    }
    best
}

#[test]
fn criterion_8_norm_oracle_equivalence() {
    let start = Instant::now();
    let mut pass = true;
    for i in 0..100u64 {
        let mut rng = rng_for(8000 + i);
        let m = 1 + (i as usize % 8);
        let n = 1 + ((i as usize / 8) % 8);
        let a = Matrix::from_fn(m, n, |_, _| gaussian(&mut rng));
        let fast = infty_one_exact(&a).unwrap().value;
        let slow = brute_force_infty_one(&a);
        if (fast - slow).abs() > 1e-12 * slow.abs().max(1.0) {
            println!("  case {i}: fast {fast:.15} slow {slow:.15}");
            pass = false;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "criterion 8: {} ({elapsed:.1}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}
