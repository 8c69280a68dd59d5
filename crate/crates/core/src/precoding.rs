//! Self-interference-minimizing precoder and standard multi-user MIMO
//! precoders/equalizers.
//!
//! The full downlink transmit chain is `x = P_self · P_down · s`: `P_down`
//! is an ordinary MU-MIMO precoder acting on the effective channel
//! `H_down · P_self`, and `P_self` maps `d_tx` effective antennas onto the
//! `M_Tx` physical transmit antennas.
//!
//! `P_self` solves
//!
//! ```text
//! minimize ‖H_self · P‖_F²   subject to   P† P = I_{d_tx}
//! ```
//!
//! whose minimizer is the set of right singular vectors of `H_self` with the
//! `d_tx` smallest singular values; the minimum is the sum of those squared
//! singular values.

use crate::error::{Error, Result};
use crate::numerics::svd::pseudoinverse_from_svd;
use crate::numerics::{default_rank_tol, right_singular_basis, svd, ComplexMatrix, RightSingularBasis};

#[derive(Clone, Debug)]
pub struct SoftNullPrecoder {
    /// `M_Tx × d_tx`, orthonormal columns.
    pub p_self: ComplexMatrix,
    pub d_tx: usize,
    /// Total self-interference power `‖H_self · P_self‖_F²` for unit-power
    /// inputs on every effective antenna.
    pub residual_power: f64,
}

/// Right singular basis of a self-interference channel, computed once and
/// reused for every `d_tx`.
#[derive(Clone, Debug)]
pub struct SoftNullBasis {
    basis: RightSingularBasis,
    m_rx: usize,
    /// Squared singular values with numerical-rank noise flushed to zero.
    power: Vec<f64>,
}

impl SoftNullBasis {
    pub fn new(h_self: &ComplexMatrix) -> Result<Self> {
        let basis = right_singular_basis(h_self)?;
        let smax = basis.sigma.first().copied().unwrap_or(0.0);
        let tol = default_rank_tol(h_self.rows(), h_self.cols()) * smax;
        let power = basis
            .sigma
            .iter()
            .map(|&s| if s > tol { s * s } else { 0.0 })
            .collect();
        Ok(Self {
            basis,
            m_rx: h_self.rows(),
            power,
        })
    }

    pub fn m_tx(&self) -> usize {
        self.basis.v.rows()
    }

    pub fn m_rx(&self) -> usize {
        self.m_rx
    }

    /// All `M_Tx` singular values, descending (zero-padded for wide channels).
    pub fn singular_values(&self) -> &[f64] {
        &self.basis.sigma
    }

    pub fn precoder(&self, d_tx: usize) -> Result<SoftNullPrecoder> {
        let m_tx = self.m_tx();
        if d_tx == 0 || d_tx > m_tx {
            return Err(Error::Argument(format!("d_tx must lie in [1, {m_tx}], got {d_tx}")));
        }
        let cols: Vec<usize> = (m_tx - d_tx..m_tx).collect();
        Ok(SoftNullPrecoder {
            p_self: self.basis.v.select_columns(&cols),
            d_tx,
            residual_power: self.power[m_tx - d_tx..].iter().sum(),
        })
    }

    /// Residual self-interference power for `d_tx` without building the precoder.
    pub fn residual_power(&self, d_tx: usize) -> f64 {
        let m_tx = self.m_tx();
        self.power[m_tx - d_tx.min(m_tx)..].iter().sum()
    }
}

pub fn softnull_precoder(h_self: &ComplexMatrix, d_tx: usize) -> Result<SoftNullPrecoder> {
    let m_tx = h_self.cols();
    if d_tx == 0 || d_tx > m_tx {
        return Err(Error::Argument(format!("d_tx must lie in [1, {m_tx}], got {d_tx}")));
    }
    SoftNullBasis::new(h_self)?.precoder(d_tx)
}

/// Transmit-to-interference ratio in dB with unit transmit power split evenly
/// over the effective antennas and interference averaged over receive antennas.
/// A perfect null gives `+inf`.
pub fn suppression_db(h_self: &ComplexMatrix, precoder: &SoftNullPrecoder, m_rx: usize) -> Result<f64> {
    check_precoder_dims(h_self, precoder)?;
    if m_rx != h_self.rows() {
        return Err(Error::Dimension(format!(
            "m_rx = {m_rx} but the self-interference channel has {} rows",
            h_self.rows()
        )));
    }
    Ok(power_ratio_db(precoder.residual_power / (precoder.d_tx as f64 * m_rx as f64)))
}

/// Suppression seen by each receive antenna individually, same normalization
/// as [`suppression_db`].
pub fn per_antenna_suppression_db(h_self: &ComplexMatrix, precoder: &SoftNullPrecoder) -> Result<Vec<f64>> {
    check_precoder_dims(h_self, precoder)?;
    let hp = h_self.matmul(&precoder.p_self)?;
    let d = precoder.d_tx as f64;
    Ok((0..hp.rows()).map(|r| power_ratio_db(hp.row_power(r) / d)).collect())
}

fn power_ratio_db(si_power: f64) -> f64 {
    if si_power <= 0.0 {
        f64::INFINITY
    } else {
        -10.0 * si_power.log10()
    }
}

fn check_precoder_dims(h_self: &ComplexMatrix, precoder: &SoftNullPrecoder) -> Result<()> {
    if h_self.cols() != precoder.p_self.rows() {
        return Err(Error::Dimension(format!(
            "precoder has {} rows but the channel has {} transmit antennas",
            precoder.p_self.rows(),
            h_self.cols()
        )));
    }
    Ok(())
}

/// `H_eff = H_down · P_self`.
pub fn effective_channel(h_down: &ComplexMatrix, p_self: &ComplexMatrix) -> Result<ComplexMatrix> {
    h_down.matmul(p_self)
}

fn check_power(total_power: f64) -> Result<()> {
    if !(total_power >= 0.0 && total_power.is_finite()) {
        return Err(Error::Argument(format!("total power must be finite and >= 0, got {total_power}")));
    }
    Ok(())
}

/// Zero-forcing precoder `α · H†(H H†)⁻¹` scaled so `‖P‖_F² = total_power`.
/// `h_eff · P = α · I`.
pub fn zf_precoder(h_eff: &ComplexMatrix, total_power: f64) -> Result<ComplexMatrix> {
    check_power(total_power)?;
    let (k, d) = h_eff.shape();
    if k > d {
        return Err(Error::Capability(format!(
            "zero-forcing {k} users needs at least {k} transmit dimensions, have {d}"
        )));
    }
    let pinv = full_rank_pinv(h_eff, "effective downlink channel", k)?;
    let norm_sq = pinv.frobenius_norm_sq();
    Ok(pinv.scale_real((total_power / norm_sq).sqrt()))
}

/// Matched-filter (maximum-ratio) precoder `β · H†` with `‖P‖_F² = total_power`.
pub fn matched_filter_precoder(h_eff: &ComplexMatrix, total_power: f64) -> Result<ComplexMatrix> {
    check_power(total_power)?;
    let norm_sq = h_eff.frobenius_norm_sq();
    if norm_sq == 0.0 {
        return Err(Error::Argument("matched filter of an all-zero channel".into()));
    }
    Ok(h_eff.adjoint().scale_real((total_power / norm_sq).sqrt()))
}

/// Linear decorrelator `(H† H)⁻¹ H†`; `W · h_up = I`.
pub fn decorrelator(h_up: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (m, k) = h_up.shape();
    if k > m {
        return Err(Error::Capability(format!(
            "decorrelating {k} uplink users needs at least {k} receive antennas, have {m}"
        )));
    }
    full_rank_pinv(h_up, "uplink channel", k)
}

fn full_rank_pinv(h: &ComplexMatrix, what: &'static str, needed: usize) -> Result<ComplexMatrix> {
    let s = svd(h)?;
    let tol = default_rank_tol(h.rows(), h.cols());
    let rank = s.rank(tol);
    if rank < needed {
        return Err(Error::Rank { what, rank, needed });
    }
    Ok(pseudoinverse_from_svd(&s, h.rows(), h.cols(), tol))
}
