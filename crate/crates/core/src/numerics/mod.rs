//! Dense complex linear algebra: matrix type, SVD, pseudoinverse and
//! seeded random sampling.

pub mod matrix;
pub mod random;
pub mod svd;

pub use matrix::{frobenius_norm_sq, ComplexMatrix};
pub use random::{derive_seed, random_complex_gaussian, random_orthonormal_columns, seeded_rng, SimRng};
pub use svd::{default_rank_tol, pseudoinverse, right_singular_basis, svd, RightSingularBasis, SvdResult};

pub use num_complex::Complex64;
