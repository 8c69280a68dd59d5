#![allow(dead_code)]

use nalgebra::DMatrix;
use softnull::numerics::{random_complex_gaussian, Complex64, ComplexMatrix};

pub fn to_nalgebra(a: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.rows(), a.cols(), |r, c| a[(r, c)])
}

/// Squared singular values from an independent SVD, descending, padded with
/// zeros to `len`.
pub fn oracle_sigma_sq(a: &ComplexMatrix, len: usize) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(a).singular_values().iter().map(|x| x * x).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s.resize(len, 0.0);
    s
}

/// `‖A† A − I‖_F`.
pub fn orthonormality_error(a: &ComplexMatrix) -> f64 {
    let g = a.adjoint_mul(a).unwrap();
    g.sub(&ComplexMatrix::identity(a.cols())).unwrap().frobenius_norm()
}

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    random_complex_gaussian(rows, cols, 1.0, seed)
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}
