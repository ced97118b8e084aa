//! Randomized invariants for the core algorithms.

use grosym::{
    abs_sum, antisym_canonical, combine_scalings, hs_norm, infty_one_exact, numerical_rank,
    pairing_matrix, random_symplectic, singular_values, sym_eig, symplectic_transform,
    theorem1_check, kg_upper, Matrix, SymplecticSpace, VectorFamily,
};
use proptest::prelude::*;

fn small_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-10.0f64..10.0, r * c)
            .prop_map(move |data| Matrix::new(r, c, data).unwrap())
    })
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_dim).prop_flat_map(|n| {
        prop::collection::vec(-10.0f64..10.0, n * n)
            .prop_map(move |data| Matrix::new(n, n, data).unwrap())
    })
}

fn vector_family(max_n: usize, max_len: usize) -> impl Strategy<Value = VectorFamily> {
    (1..=max_n, 1..=max_len).prop_flat_map(|(n, len)| {
        prop::collection::vec(-5.0f64..5.0, 2 * n * len).prop_map(move |data| {
            let cols = Matrix::new(2 * n, len, data).unwrap();
            VectorFamily::new(SymplecticSpace::standard(n).unwrap(), cols).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_matches_singular_values(a in small_matrix(7)) {
        let s = singular_values(&a);
        let sum_sq: f64 = s.iter().map(|x| x * x).sum();
        let frob = hs_norm(&a);
        prop_assert!((sum_sq - frob * frob).abs() <= 1e-8 * (1.0 + frob * frob));
    }

    #[test]
    fn rank_bounded_by_dimensions(a in small_matrix(7)) {
        let r = numerical_rank(&a, 1e-8);
        prop_assert!(r <= a.rows().min(a.cols()));
    }

    #[test]
    fn infty_one_transpose_symmetric(a in small_matrix(6)) {
        let lhs = infty_one_exact(&a).unwrap().value;
        let rhs = infty_one_exact(&a.transpose()).unwrap().value;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn infty_one_homogeneous(a in small_matrix(6), c in -4.0f64..4.0) {
        let base = infty_one_exact(&a).unwrap().value;
        let scaled = infty_one_exact(&a.scaled(c)).unwrap().value;
        prop_assert!((scaled - c.abs() * base).abs() <= 1e-9 * (1.0 + base));
    }

    #[test]
    fn infty_one_witness_is_tight(a in small_matrix(6)) {
        let res = infty_one_exact(&a).unwrap();
        // t^T A s reproduces the claimed value
        let as_vec = a.matvec(&res.witness_s);
        let attained: f64 = res.witness_t.iter().zip(&as_vec).map(|(t, x)| t * x).sum();
        prop_assert!((attained - res.value).abs() <= 1e-9 * (1.0 + res.value));
    }

    #[test]
    fn abs_sum_dominates_infty_one(a in small_matrix(6)) {
        let norm = infty_one_exact(&a).unwrap().value;
        prop_assert!(norm <= abs_sum(&a) + 1e-12);
    }

    #[test]
    fn sqrt_rank_inequality_holds(a in square_matrix(6)) {
        let report = theorem1_check(&a, kg_upper(), 1e-9).unwrap();
        prop_assert!(report.holds, "lhs {} rhs {}", report.lhs, report.rhs);
    }

    #[test]
    fn sym_eig_reconstructs(a in square_matrix(7)) {
        let sym = a.add(&a.transpose()).scaled(0.5);
        let (vals, vecs) = sym_eig(&sym, 1e-9).unwrap();
        let d = Matrix::diag(&vals);
        let back = vecs.matmul(&d).matmul(&vecs.transpose());
        prop_assert!(hs_norm(&back.sub(&sym)) <= 1e-8 * (1.0 + hs_norm(&sym)));
        // descending order
        for w in vals.windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12);
        }
    }

    #[test]
    fn combine_scalings_dominates(raw0 in prop::collection::vec(0.0f64..1.0, 1..10),
                                  raw1 in prop::collection::vec(0.0f64..1.0, 1..10)) {
        let n = raw0.len().min(raw1.len());
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        let l0: Vec<f64> = raw0[..n].iter().map(|x| x / norm(&raw0[..n])).collect();
        let l1: Vec<f64> = raw1[..n].iter().map(|x| x / norm(&raw1[..n])).collect();
        let combined = combine_scalings(&l0, &l1).unwrap();
        let cn: f64 = combined.lambdas().iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(cn <= 1.0 + 1e-12);
        for i in 0..n {
            prop_assert!(combined.lambdas()[i] >= l0[i].max(l1[i]) / 3f64.sqrt() - 1e-12);
            prop_assert!(combined.lambdas()[i] > 0.0);
        }
    }

    #[test]
    fn pairing_invariant_under_symplectic_maps(fam in vector_family(3, 5), seed in 0u64..50) {
        let n = fam.space().half_dim();
        let s = random_symplectic(n, 0.5, seed).unwrap();
        let moved = symplectic_transform(&fam, &s).unwrap();
        let before = pairing_matrix(&fam);
        let after = pairing_matrix(&moved);
        prop_assert!(hs_norm(&after.sub(&before)) <= 1e-7 * (1.0 + hs_norm(&before)));
    }

    #[test]
    fn antisym_canonical_reconstructs(a in square_matrix(8)) {
        let b = a.sub(&a.transpose()).scaled(0.5);
        let form = antisym_canonical(&b, 1e-9).unwrap();
        let back = grosym::reconstruct(&form);
        prop_assert!(hs_norm(&back.sub(&b)) <= 1e-7 * (1.0 + hs_norm(&b)));
        for w in form.mus().windows(2) {
            prop_assert!(w[0] >= w[1] - 1e-12);
        }
        for &mu in form.mus() {
            prop_assert!(mu > 0.0);
        }
    }
}
