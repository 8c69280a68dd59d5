//! Synthetic channel generators.
//!
//! The self-interference model mixes a deterministic near-field
//! line-of-sight term with an i.i.d. scattered term:
//!
//! ```text
//! H = sqrt(κ/(1+κ)) · H_los + sqrt(1/(1+κ)) · H_scat
//! H_los[r,t] = g · (d0 / d_rt) · exp(-j 2π d_rt / λ)
//! ```
//!
//! `d0` is the element pitch and `g` pins the adjacent-element coupling to
//! `reference_coupling_db`. `H_scat` has the same mean per-entry power as
//! `H_los`. Large κ behaves like an anechoic/outdoor site, κ near 1 like a
//! cluttered indoor one.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ChannelSet;
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, Partition};
use crate::numerics::random::complex_gaussian_matrix;
use crate::numerics::{derive_seed, seeded_rng, ComplexMatrix};

pub const OUTDOOR_KAPPA: f64 = 100.0;
pub const INDOOR_KAPPA: f64 = 1.0;
pub const DEFAULT_REFERENCE_COUPLING_DB: f64 = -15.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiChannelParams {
    /// Carrier wavelength in meters.
    pub wavelength: f64,
    /// Power ratio of direct to scattered coupling; `f64::INFINITY` is pure LOS.
    pub backscatter_ratio: f64,
    /// Coupling between adjacent elements at one pitch, in dB.
    pub reference_coupling_db: f64,
    pub seed: u64,
}

impl SiChannelParams {
    pub fn new(wavelength: f64, backscatter_ratio: f64, reference_coupling_db: f64, seed: u64) -> Self {
        Self {
            wavelength,
            backscatter_ratio,
            reference_coupling_db,
            seed,
        }
    }

    pub fn outdoor_like(wavelength: f64, seed: u64) -> Self {
        Self::new(wavelength, OUTDOOR_KAPPA, DEFAULT_REFERENCE_COUPLING_DB, seed)
    }

    pub fn indoor_like(wavelength: f64, seed: u64) -> Self {
        Self::new(wavelength, INDOOR_KAPPA, DEFAULT_REFERENCE_COUPLING_DB, seed)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    fn validate(&self) -> Result<()> {
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::Argument(format!("wavelength must be positive, got {}", self.wavelength)));
        }
        if !(self.backscatter_ratio >= 0.0) {
            return Err(Error::Argument(format!(
                "backscatter ratio must be >= 0, got {}",
                self.backscatter_ratio
            )));
        }
        if !self.reference_coupling_db.is_finite() {
            return Err(Error::Argument("reference coupling must be finite".into()));
        }
        Ok(())
    }

    /// `(los, scatter)` amplitude weights.
    fn mixing_weights(&self) -> (f64, f64) {
        let k = self.backscatter_ratio;
        if k.is_infinite() {
            (1.0, 0.0)
        } else {
            ((k / (1.0 + k)).sqrt(), (1.0 / (1.0 + k)).sqrt())
        }
    }
}

/// `M_Rx × M_Tx` self-interference channel for the given partition.
pub fn geometric_self_interference(
    geom: &ArrayGeometry,
    part: &Partition,
    p: &SiChannelParams,
) -> Result<ComplexMatrix> {
    p.validate()?;
    if part.n_elements() != geom.n_elements() {
        return Err(Error::Dimension(format!(
            "partition covers {} elements but the array has {}",
            part.n_elements(),
            geom.n_elements()
        )));
    }
    let gain = 10f64.powf(p.reference_coupling_db / 20.0);
    let d0 = geom.spacing();
    let k = 2.0 * PI / p.wavelength;

    let mut los = ComplexMatrix::zeros(part.m_rx(), part.m_tx());
    for (r, &ri) in part.rx().iter().enumerate() {
        for (t, &ti) in part.tx().iter().enumerate() {
            let d = geom.distance(ri, ti);
            if d <= 0.0 {
                return Err(Error::Argument(format!("elements {ri} and {ti} are coincident")));
            }
            los[(r, t)] = Complex64::from_polar(gain * d0 / d, -k * d);
        }
    }

    let (w_los, w_scat) = p.mixing_weights();
    if w_scat == 0.0 {
        return Ok(los);
    }
    let los_power = los.frobenius_norm_sq() / (los.rows() * los.cols()) as f64;
    let mut rng = seeded_rng(p.seed);
    let scat = complex_gaussian_matrix(&mut rng, los.rows(), los.cols(), los_power);
    Ok(ComplexMatrix::from_fn(los.rows(), los.cols(), |r, c| {
        los[(r, c)] * w_los + scat[(r, c)] * w_scat
    }))
}

/// i.i.d. Rayleigh channel with per-entry mean power `10^(-path_loss_db/10)`.
pub fn rayleigh_channel(rows: usize, cols: usize, path_loss_db: f64, seed: u64) -> Result<ComplexMatrix> {
    if !(path_loss_db >= 0.0 && path_loss_db.is_finite()) {
        return Err(Error::Argument(format!("path loss must be finite and >= 0, got {path_loss_db}")));
    }
    let mut rng = seeded_rng(seed);
    Ok(complex_gaussian_matrix(&mut rng, rows, cols, 10f64.powf(-path_loss_db / 10.0)))
}

/// Matched full-duplex and half-duplex realizations of one trial.
///
/// The user links are drawn once over the whole array; the full-duplex set
/// sees the receive rows of the uplink and the transmit columns of the
/// downlink, so both schemes face the same propagation.
#[derive(Clone, Debug)]
pub struct TrialChannels {
    pub full_duplex: ChannelSet,
    /// Full-array links; `h_self` is an all-zero `M × M` placeholder.
    pub half_duplex: ChannelSet,
}

/// Draws one trial. `h_self` is supplied by the caller (synthetic or trace).
pub fn draw_trial(
    part: &Partition,
    h_self: ComplexMatrix,
    users: usize,
    path_loss_db: f64,
    seed: u64,
) -> Result<TrialChannels> {
    if h_self.shape() != (part.m_rx(), part.m_tx()) {
        return Err(Error::Dimension(format!(
            "self-interference channel is {}x{} but the partition is {} rx x {} tx",
            h_self.rows(),
            h_self.cols(),
            part.m_rx(),
            part.m_tx()
        )));
    }
    let m = part.n_elements();
    let h_up_full = rayleigh_channel(m, users, path_loss_db, derive_seed(seed, 1, 0))?;
    let h_down_full = rayleigh_channel(users, m, path_loss_db, derive_seed(seed, 2, 0))?;
    let full_duplex = ChannelSet::new(
        h_self,
        h_up_full.select_rows(part.rx()),
        h_down_full.select_columns(part.tx()),
        None,
    )?;
    let half_duplex = ChannelSet::new(ComplexMatrix::zeros(m, m), h_up_full, h_down_full, None)?;
    Ok(TrialChannels {
        full_duplex,
        half_duplex,
    })
}
