//! Seeded sampling helpers. Every random quantity in the crate is drawn
//! through these so a single `u64` seed reproduces a whole experiment.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a master seed with a stream tag and an index (SplitMix64 finalizer),
/// so sub-experiments get decorrelated but reproducible seeds.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One circularly-symmetric complex Gaussian draw with `E|z|² = variance`.
pub fn complex_gaussian(rng: &mut SimRng, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

pub fn complex_gaussian_matrix(rng: &mut SimRng, rows: usize, cols: usize, variance: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng, variance))
}

/// i.i.d. circular complex Gaussian matrix from a fresh seeded stream.
pub fn random_complex_gaussian(rows: usize, cols: usize, variance: f64, seed: u64) -> ComplexMatrix {
    let mut rng = seeded_rng(seed);
    complex_gaussian_matrix(&mut rng, rows, cols, variance)
}

/// Haar-distributed `m × d` matrix with orthonormal columns.
///
/// Gram-Schmidt on a complex Gaussian matrix is the QR factorization with a
/// positive real R diagonal, which is exactly the phase-corrected QR that
/// makes Q Haar distributed.
pub fn random_orthonormal_columns(m: usize, d: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = seeded_rng(seed);
    sample_orthonormal_columns(&mut rng, m, d)
}

pub fn sample_orthonormal_columns(rng: &mut SimRng, m: usize, d: usize) -> Result<ComplexMatrix> {
    if d == 0 || d > m {
        return Err(Error::Argument(format!(
            "need 1 <= d <= m for orthonormal columns, got m={m}, d={d}"
        )));
    }
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut x: Vec<Complex64> = (0..m).map(|_| complex_gaussian(rng, 1.0)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
                for (xi, qi) in x.iter_mut().zip(q) {
                    *xi -= proj * qi;
                }
            }
        }
        let nrm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // a Gaussian draw lands in the current span with probability zero
        if nrm > 1e-8 {
            cols.push(x.into_iter().map(|z| z / nrm).collect());
        }
    }
    Ok(ComplexMatrix::from_columns(m, &cols))
}
