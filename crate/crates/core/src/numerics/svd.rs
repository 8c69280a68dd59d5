//! Complex singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations, plus the pseudoinverse built on top of it.
//!
//! One-sided Jacobi orthogonalizes the columns of `A·V` pairwise until every
//! pair is orthogonal to a relative tolerance. It delivers small singular
//! values and their right singular vectors to high relative accuracy, which
//! is what the self-interference precoder consumes.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Upper bound on full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 10_000;

/// A column pair is rotated while `|a_i† a_j| > tol · ‖a_i‖ ‖a_j‖`.
pub const CONVERGENCE_TOL: f64 = 1e-12;

/// Thin SVD `A = U · diag(sigma) · V†` with `k = min(rows, cols)` terms.
#[derive(Clone, Debug)]
pub struct SvdResult {
    /// `rows × k`, orthonormal columns.
    pub u: ComplexMatrix,
    /// Descending, non-negative.
    pub sigma: Vec<f64>,
    /// `cols × k`, orthonormal columns.
    pub v: ComplexMatrix,
}

impl SvdResult {
    /// Number of singular values above `rank_tol · σ_max`.
    pub fn rank(&self, rank_tol: f64) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        self.sigma.iter().filter(|&&s| s > rank_tol * smax).count()
    }

    /// `U · diag(sigma) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let us = ComplexMatrix::from_fn(self.u.rows(), self.sigma.len(), |r, c| {
            self.u[(r, c)] * self.sigma[c]
        });
        us.matmul(&self.v.adjoint()).expect("svd factors are conformant")
    }
}

/// A complete orthonormal basis of right singular vectors.
///
/// Unlike the thin SVD this always has `cols` vectors; when the matrix is
/// wide the trailing vectors span its null space and carry zero singular value.
#[derive(Clone, Debug)]
pub struct RightSingularBasis {
    /// Length `cols`, descending.
    pub sigma: Vec<f64>,
    /// `cols × cols` unitary.
    pub v: ComplexMatrix,
}

/// Default relative rank tolerance for an `rows × cols` matrix.
pub fn default_rank_tol(rows: usize, cols: usize) -> f64 {
    1e-12 * rows.max(cols) as f64
}

pub fn svd(a: &ComplexMatrix) -> Result<SvdResult> {
    check_input(a)?;
    if a.rows() >= a.cols() {
        let (u, sigma, v) = tall_svd(a)?;
        Ok(normalize_phases(SvdResult { u, sigma, v }))
    } else {
        // A† = U' Σ V'†  =>  A = V' Σ U'†
        let (u_t, sigma, v_t) = tall_svd(&a.adjoint())?;
        Ok(normalize_phases(SvdResult {
            u: v_t,
            sigma,
            v: u_t,
        }))
    }
}

/// Full right singular basis, sorted by descending singular value.
pub fn right_singular_basis(a: &ComplexMatrix) -> Result<RightSingularBasis> {
    let thin = svd(a)?;
    let n = a.cols();
    if thin.v.cols() == n {
        return Ok(RightSingularBasis {
            sigma: thin.sigma,
            v: thin.v,
        });
    }
    let mut columns: Vec<Vec<Complex64>> = (0..thin.v.cols()).map(|j| thin.v.column(j)).collect();
    complete_orthonormal(&mut columns, n, n);
    let mut v = ComplexMatrix::from_columns(n, &columns);
    for j in thin.v.cols()..n {
        normalize_column_phase(&mut v, None, j);
    }
    let mut sigma = thin.sigma;
    sigma.resize(n, 0.0);
    Ok(RightSingularBasis { sigma, v })
}

/// Moore-Penrose pseudoinverse; singular values at or below
/// `rank_tol · σ_max` are treated as zero.
pub fn pseudoinverse(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    if !(rank_tol >= 0.0) {
        return Err(Error::Argument(format!("rank_tol must be >= 0, got {rank_tol}")));
    }
    let s = svd(a)?;
    Ok(pseudoinverse_from_svd(&s, a.rows(), a.cols(), rank_tol))
}

pub(crate) fn pseudoinverse_from_svd(
    s: &SvdResult,
    rows: usize,
    cols: usize,
    rank_tol: f64,
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(cols, rows);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return out;
    }
    for (k, &sk) in s.sigma.iter().enumerate() {
        if sk <= rank_tol * smax {
            continue;
        }
        let inv = 1.0 / sk;
        for i in 0..cols {
            let vik = s.v[(i, k)] * inv;
            for j in 0..rows {
                out[(i, j)] += vik * s.u[(j, k)].conj();
            }
        }
    }
    out
}

fn check_input(a: &ComplexMatrix) -> Result<()> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Argument(format!(
            "svd needs a non-empty matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::Argument("svd input has non-finite entries".into()));
    }
    Ok(())
}

/// SVD of a matrix with `rows >= cols`. Returns `(U, sigma, V)` with V square.
fn tall_svd(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut work: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    jacobi_sweeps(&mut work, &mut v)?;

    let norms: Vec<f64> = work.iter().map(|c| norm_sq(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let smax = sigma[0];
    let zero_tol = smax * f64::EPSILON * m as f64;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for &j in &order {
        if norms[j] > zero_tol && norms[j] > 0.0 {
            let inv = 1.0 / norms[j];
            u_cols.push(work[j].iter().map(|z| z * inv).collect());
        } else {
            break;
        }
    }
    complete_orthonormal(&mut u_cols, m, n);

    let v_sorted: Vec<Vec<Complex64>> = order.iter().map(|&j| v[j].clone()).collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::Numerical("svd produced non-finite singular values".into()));
    }
    Ok((
        ComplexMatrix::from_columns(m, &u_cols),
        sigma,
        ComplexMatrix::from_columns(n, &v_sorted),
    ))
}

fn jacobi_sweeps(work: &mut [Vec<Complex64>], v: &mut [Vec<Complex64>]) -> Result<()> {
    let n = work.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = norm_sq(&work[i]);
                let beta = norm_sq(&work[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma = inner(&work[i], &work[j]);
                let g = gamma.norm();
                if g <= CONVERGENCE_TOL * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                // Rotate (a_i, e^{-iφ} a_j) by a real Jacobi rotation.
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta_sign(zeta) / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(work, i, j, c, s, phase_conj);
                rotate_pair(v, i, j, c, s, phase_conj);
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::Numerical(format!(
        "jacobi svd did not converge within {MAX_SWEEPS} sweeps"
    )))
}

#[inline]
fn zeta_sign(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

fn rotate_pair(cols: &mut [Vec<Complex64>], i: usize, j: usize, c: f64, s: f64, phase_conj: Complex64) {
    let (left, right) = cols.split_at_mut(j);
    let ci = &mut left[i];
    let cj = &mut right[0];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let a = *x;
        let b = *y * phase_conj;
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

#[inline]
fn norm_sq(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// `x† y`
#[inline]
fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Extends `basis` with unit vectors of length `dim` until it has `target`
/// orthonormal members, drawing candidates from the standard basis.
pub(crate) fn complete_orthonormal(basis: &mut Vec<Vec<Complex64>>, dim: usize, target: usize) {
    let mut e = 0;
    while basis.len() < target && e < dim {
        let mut cand = vec![Complex64::new(0.0, 0.0); dim];
        cand[e] = Complex64::new(1.0, 0.0);
        e += 1;
        // two passes of classical Gram-Schmidt
        for _ in 0..2 {
            for q in basis.iter() {
                let proj = inner(q, &cand);
                for (x, qv) in cand.iter_mut().zip(q) {
                    *x -= proj * qv;
                }
            }
        }
        let nrm = norm_sq(&cand).sqrt();
        if nrm > 1e-3 {
            basis.push(cand.into_iter().map(|z| z / nrm).collect());
        }
    }
    debug_assert_eq!(basis.len(), target);
}

/// Rotates column `j` of `v` so its largest-magnitude entry is real and
/// positive, applying the same phase to column `j` of `u` when given.
fn normalize_column_phase(v: &mut ComplexMatrix, u: Option<&mut ComplexMatrix>, j: usize) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for r in 0..v.rows() {
        let mag = v[(r, j)].norm();
        // strict comparison keeps the first index on ties
        if mag > best_mag * (1.0 + 1e-12) {
            best_mag = mag;
            best = r;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let phase = v[(best, j)] / best_mag;
    let rot = phase.conj();
    for r in 0..v.rows() {
        v[(r, j)] *= rot;
    }
    v[(best, j)] = Complex64::new(v[(best, j)].norm(), 0.0);
    if let Some(u) = u {
        for r in 0..u.rows() {
            u[(r, j)] *= rot;
        }
    }
}

fn normalize_phases(mut s: SvdResult) -> SvdResult {
    for j in 0..s.v.cols() {
        normalize_column_phase(&mut s.v, Some(&mut s.u), j);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::random::random_complex_gaussian;

    fn unitary_defect(q: &ComplexMatrix) -> f64 {
        let g = q.adjoint_mul(q).unwrap();
        g.sub(&ComplexMatrix::identity(q.cols())).unwrap().frobenius_norm()
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s.sigma.len(), 2);
        for v in &s.sigma {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn diagonal_is_sorted_descending() {
        let s = svd(&ComplexMatrix::from_real_diagonal(&[3.0, 4.0])).unwrap();
        assert!((s.sigma[0] - 4.0).abs() < 1e-14);
        assert!((s.sigma[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn random_tall_reconstructs() {
        let a = random_complex_gaussian(5, 3, 1.0, 7);
        let s = svd(&a).unwrap();
        let err = s.reconstruct().sub(&a).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(err < 1e-10, "reconstruction error {err}");
        assert!(unitary_defect(&s.u) < 1e-10);
        assert!(unitary_defect(&s.v) < 1e-10);
    }

    #[test]
    fn wide_input_reconstructs() {
        let a = random_complex_gaussian(3, 7, 1.0, 8);
        let s = svd(&a).unwrap();
        assert_eq!(s.u.shape(), (3, 3));
        assert_eq!(s.v.shape(), (7, 3));
        let err = s.reconstruct().sub(&a).unwrap().frobenius_norm() / a.frobenius_norm();
        assert!(err < 1e-10);
    }

    #[test]
    fn right_basis_of_wide_matrix_spans_null_space() {
        let a = random_complex_gaussian(2, 5, 1.0, 21);
        let b = right_singular_basis(&a).unwrap();
        assert_eq!(b.v.shape(), (5, 5));
        assert!(unitary_defect(&b.v) < 1e-10);
        assert_eq!(&b.sigma[2..], &[0.0, 0.0, 0.0]);
        let null = b.v.select_columns(&[2, 3, 4]);
        assert!(a.matmul(&null).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn rank_deficient_u_is_completed() {
        // rank-1 outer product
        let x = random_complex_gaussian(4, 1, 1.0, 3);
        let y = random_complex_gaussian(1, 3, 1.0, 4);
        let a = x.matmul(&y).unwrap();
        let s = svd(&a).unwrap();
        assert_eq!(s.rank(default_rank_tol(4, 3)), 1);
        assert!(unitary_defect(&s.u) < 1e-10);
        let err = s.reconstruct().sub(&a).unwrap().frobenius_norm();
        assert!(err < 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&ComplexMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert!(unitary_defect(&s.u) < 1e-12);
        let p = pseudoinverse(&ComplexMatrix::zeros(2, 3), 0.0).unwrap();
        assert_eq!(p.shape(), (3, 2));
        assert!(p.is_zero());
    }

    #[test]
    fn right_vectors_have_real_positive_peak() {
        let a = random_complex_gaussian(6, 4, 1.0, 5);
        let s = svd(&a).unwrap();
        for j in 0..s.v.cols() {
            let col = s.v.column(j);
            let peak = col
                .iter()
                .copied()
                .max_by(|x, y| x.norm().total_cmp(&y.norm()))
                .unwrap();
            assert!(peak.im.abs() < 1e-14 && peak.re > 0.0);
        }
    }

    #[test]
    fn pseudoinverse_of_diagonal() {
        let p = pseudoinverse(&ComplexMatrix::from_real_diagonal(&[2.0, 4.0]), 1e-12).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[0.5, 0.25]);
        assert!(p.sub(&expect).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn empty_and_non_finite_inputs_are_rejected() {
        assert!(matches!(svd(&ComplexMatrix::zeros(0, 3)), Err(Error::Argument(_))));
        assert!(pseudoinverse(&ComplexMatrix::identity(2), -1.0).is_err());
    }
}
