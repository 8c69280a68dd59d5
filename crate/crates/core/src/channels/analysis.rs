use crate::error::{Error, Result};
use crate::numerics::{svd, ComplexMatrix};

/// Per-pair coupling `20·log10|h[r,t]|` in dB; exact zeros map to `-inf`.
pub fn coupling_map(h_self: &ComplexMatrix) -> Vec<Vec<f64>> {
    (0..h_self.rows())
        .map(|r| {
            h_self
                .row(r)
                .iter()
                .map(|z| {
                    let mag = z.norm();
                    if mag == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        20.0 * mag.log10()
                    }
                })
                .collect()
        })
        .collect()
}

/// Fraction of Frobenius power carried by the `n` strongest singular modes.
pub fn eigenvalue_concentration(h: &ComplexMatrix, n: usize) -> Result<f64> {
    let k = h.rows().min(h.cols());
    if n == 0 || n > k {
        return Err(Error::Argument(format!("n must lie in [1, {k}], got {n}")));
    }
    let s = svd(h)?;
    let total: f64 = s.sigma.iter().map(|x| x * x).sum();
    if total == 0.0 {
        return Err(Error::Argument("eigenvalue concentration of a zero matrix is undefined".into()));
    }
    let top: f64 = s.sigma[..n].iter().map(|x| x * x).sum();
    Ok((top / total).min(1.0))
}
