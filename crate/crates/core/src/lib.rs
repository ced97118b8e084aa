//! Constructive linear algebra around Grothendieck-type diagonal
//! scalings and symplectic geometry: the sqrt-rank absolute-sum
//! inequality with certified scalings, the real canonical form of
//! antisymmetric matrices, and the explicit construction of symplectic
//! matrices taming the sum of norms of a vector family.

pub mod antisymmetric;
pub mod error;
pub mod experiments;
pub mod grothendieck;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod opnorms;
pub mod symplectic;

pub use antisymmetric::{antisym_canonical, interleave_permutation, reconstruct, AntisymCanonicalForm};
pub use error::{Error, Result};
pub use experiments::{blt_sweep, sharpness_sweep, tame_bench, SweepReport, SweepRow};
pub use grothendieck::{
    combine_scalings, corollary_check, kg_lower, kg_upper, scaling_search,
    scaling_search_with_infty_one, theorem1_check, CheckReport, ScalingCertificate, ScalingVector,
};
pub use linalg::{
    hadamard_bound_check, hs_norm, matrix_exp, numerical_rank, orthonormalize, singular_values,
    solve_right_factor, spectral_norm, spectrum, sym_eig, SpectrumReport,
};
pub use matrix::Matrix;
pub use opnorms::{abs_sum, infty_one_bounds, infty_one_exact, InftyOneResult, ENUMERATION_LIMIT};
pub use symplectic::{
    example2_vectors, fourier_orthogonal, is_symplectic, pairing_matrix, random_symplectic,
    symplectic_basis_extension, symplectic_transform, tame, CaseTag, IsotropicSplit,
    SymplecticSpace, TameParams, TameResult, VectorFamily,
};
