//! Receiver dynamic-range model, per-user SINRs and ergodic achievable rates
//! for half-duplex, SoftNull full-duplex and ideal full-duplex operation.
//!
//! Linear powers are in milliwatts. Every receive chain (base-station antenna
//! or client) sees thermal noise plus a dynamic-range noise term equal to its
//! total received power divided by the dynamic noise figure `D0`. At the base
//! station the known self-interference is subtracted digitally, but the
//! dynamic noise it raised stays, which caps effective digital cancellation
//! at `D0`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::geometry::Partition;
use crate::numerics::ComplexMatrix;
use crate::precoding::{decorrelator, effective_channel, zf_precoder, SoftNullBasis};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    /// Array sum-power constraint.
    pub bs_power_dbm: f64,
    /// Per uplink user.
    pub user_power_dbm: f64,
    /// Per receive chain, base station and clients alike.
    pub thermal_noise_dbm: f64,
    /// Base-station dynamic noise figure.
    pub d0_bs_db: f64,
    /// Client dynamic noise figure.
    pub d0_user_db: f64,
    /// Count uplink-user to downlink-user interference in full-duplex modes.
    pub include_h_usr: bool,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            bs_power_dbm: 0.0,
            user_power_dbm: -10.0,
            thermal_noise_dbm: -95.0,
            d0_bs_db: 25.0,
            d0_user_db: 25.0,
            include_h_usr: false,
        }
    }
}

impl LinkConfig {
    /// Dynamic noise figures may be `+inf` to switch the impairment off.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("bs_power_dbm", self.bs_power_dbm),
            ("user_power_dbm", self.user_power_dbm),
            ("thermal_noise_dbm", self.thermal_noise_dbm),
        ] {
            if !v.is_finite() {
                return Err(Error::Argument(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("d0_bs_db", self.d0_bs_db), ("d0_user_db", self.d0_user_db)] {
            if !(v > 0.0) {
                return Err(Error::Argument(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    fn bs_power_mw(&self) -> f64 {
        dbm_to_mw(self.bs_power_dbm)
    }

    fn user_power_mw(&self) -> f64 {
        dbm_to_mw(self.user_power_dbm)
    }

    fn thermal_mw(&self) -> f64 {
        dbm_to_mw(self.thermal_noise_dbm)
    }
}

/// Noise that scales with the received power: `received / 10^(d0/10)`.
pub fn dynamic_noise_power(received_power: f64, d0_db: f64) -> Result<f64> {
    if !(received_power >= 0.0) {
        return Err(Error::Argument(format!("received power must be >= 0, got {received_power}")));
    }
    Ok(received_power / db_to_linear(d0_db))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseMode {
    /// The strongest received component alone sets the noise floor: the
    /// dynamic floor below the self-interference when that exceeds thermal
    /// noise, thermal noise otherwise. Matches the usual back-of-envelope
    /// budget arithmetic.
    Dominant,
    /// Thermal and dynamic floors add in power.
    Sum,
}

impl FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dominant" => Ok(NoiseMode::Dominant),
            "sum" => Ok(NoiseMode::Sum),
            _ => Err(Error::Config(format!("unknown noise mode {s:?} (dominant|sum)"))),
        }
    }
}

/// Uplink SNR in dB after perfect digital cancellation of the residual
/// self-interference.
pub fn link_budget_snr(
    tx_dbm: f64,
    path_loss_db: f64,
    suppression_db: f64,
    thermal_dbm: f64,
    d0_db: f64,
    mode: NoiseMode,
) -> f64 {
    let signal = tx_dbm - path_loss_db;
    let si = tx_dbm - suppression_db;
    let dynamic_floor = si - d0_db;
    let noise = match mode {
        NoiseMode::Dominant => {
            if si > thermal_dbm {
                dynamic_floor
            } else {
                thermal_dbm
            }
        }
        NoiseMode::Sum => mw_to_dbm(dbm_to_mw(thermal_dbm) + dbm_to_mw(dynamic_floor)),
    };
    signal - noise
}

/// Per-user uplink SINR (linear) after equalization by `w`.
///
/// `downlink` is the complete `M_Tx × K_Down` transmit precoder
/// (`P_self · P_down`) active during reception, or `None` when the array is
/// not transmitting. Its self-interference raises the dynamic noise of each
/// receive chain and is then cancelled exactly.
pub fn uplink_sinr(
    ch: &ChannelSet,
    downlink: Option<&ComplexMatrix>,
    w: &ComplexMatrix,
    cfg: &LinkConfig,
) -> Result<Vec<f64>> {
    let m_rx = ch.h_up.rows();
    let k_up = ch.k_up();
    if w.shape() != (k_up, m_rx) {
        return Err(Error::Dimension(format!(
            "equalizer is {}x{}, expected {k_up}x{m_rx}",
            w.rows(),
            w.cols()
        )));
    }
    let p_user = cfg.user_power_mw();
    let thermal = cfg.thermal_mw();

    let si = match downlink {
        Some(x) => {
            if x.rows() != ch.m_tx() || ch.m_rx() != m_rx {
                return Err(Error::Dimension(format!(
                    "downlink precoder has {} rows, self-interference channel is {}x{}",
                    x.rows(),
                    ch.m_rx(),
                    ch.m_tx()
                )));
            }
            let hx = ch.h_self.matmul(x)?;
            (0..m_rx).map(|r| hx.row_power(r)).collect()
        }
        None => vec![0.0; m_rx],
    };

    let mut chain_noise = Vec::with_capacity(m_rx);
    for (r, si_r) in si.iter().enumerate() {
        let received = ch.h_up.row_power(r) * p_user + si_r + thermal;
        chain_noise.push(thermal + dynamic_noise_power(received, cfg.d0_bs_db)?);
    }

    let gain = w.matmul(&ch.h_up)?;
    Ok((0..k_up)
        .map(|i| {
            let desired = gain[(i, i)].norm_sqr() * p_user;
            let inter: f64 = (0..k_up)
                .filter(|&k| k != i)
                .map(|k| gain[(i, k)].norm_sqr() * p_user)
                .sum();
            let noise: f64 = w.row(i).iter().zip(&chain_noise).map(|(wr, n)| wr.norm_sqr() * n).sum();
            ratio(desired, inter + noise)
        })
        .collect())
}

/// Per-user downlink SINR (linear) for precoder `p_down` on `h_eff`.
///
/// `h_usr` adds interference from the uplink users when
/// `cfg.include_h_usr` is set; pass `None` when no uplink is simultaneously active.
pub fn downlink_sinr(
    h_eff: &ComplexMatrix,
    p_down: &ComplexMatrix,
    h_usr: Option<&ComplexMatrix>,
    cfg: &LinkConfig,
) -> Result<Vec<f64>> {
    let g = h_eff.matmul(p_down)?;
    let k = g.rows();
    if g.cols() != k {
        return Err(Error::Dimension(format!(
            "downlink precoder serves {} streams for {k} users",
            g.cols()
        )));
    }
    let thermal = cfg.thermal_mw();
    let p_user = cfg.user_power_mw();
    let usr = match (h_usr, cfg.include_h_usr) {
        (Some(u), true) => {
            if u.rows() != k {
                return Err(Error::Dimension(format!("h_usr has {} rows for {k} users", u.rows())));
            }
            (0..k).map(|j| u.row_power(j) * p_user).collect()
        }
        _ => vec![0.0; k],
    };
    (0..k)
        .map(|j| {
            let desired = g[(j, j)].norm_sqr();
            let inter: f64 = (0..k).filter(|&c| c != j).map(|c| g[(j, c)].norm_sqr()).sum();
            let received = desired + inter + usr[j] + thermal;
            let dynamic = dynamic_noise_power(received, cfg.d0_user_db)?;
            Ok(ratio(desired, inter + usr[j] + thermal + dynamic))
        })
        .collect()
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `alpha · mean_p Σ_j log2(1 + SINR(p, j))` in bits/s/Hz.
pub fn achievable_rate(sinrs: &[Vec<f64>], alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Argument(format!("time fraction must lie in [0, 1], got {alpha}")));
    }
    if sinrs.is_empty() {
        return Err(Error::Argument("no channel realizations".into()));
    }
    let mut total = 0.0;
    for trial in sinrs {
        for &s in trial {
            if !(s >= 0.0) {
                return Err(Error::Argument(format!("SINR must be >= 0, got {s}")));
            }
            total += (1.0 + s).log2();
        }
    }
    Ok(alpha * total / sinrs.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    HalfDuplex,
    SoftNull,
    IdealFullDuplex,
}

impl Scheme {
    pub fn label(self) -> &'static str {
        match self {
            Scheme::HalfDuplex => "half-duplex",
            Scheme::SoftNull => "softnull",
            Scheme::IdealFullDuplex => "ideal-fd",
        }
    }

    /// Fraction of time given to each link direction.
    pub fn time_fraction(self) -> f64 {
        match self {
            Scheme::HalfDuplex => 0.5,
            Scheme::SoftNull | Scheme::IdealFullDuplex => 1.0,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Per-user SINRs of one channel realization.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSinrs {
    pub up: Vec<f64>,
    pub down: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub scheme: Scheme,
    /// Effective transmit antennas actually used.
    pub d_tx: usize,
    pub uplink_rate: f64,
    pub downlink_rate: f64,
    pub sum_rate: f64,
    pub per_user_sinr_up: Vec<Vec<f64>>,
    pub per_user_sinr_down: Vec<Vec<f64>>,
}

impl RateReport {
    pub fn from_trials(scheme: Scheme, d_tx: usize, trials: Vec<TrialSinrs>) -> Result<Self> {
        let (up, down): (Vec<_>, Vec<_>) = trials.into_iter().map(|t| (t.up, t.down)).unzip();
        let alpha = scheme.time_fraction();
        let uplink_rate = achievable_rate(&up, alpha)?;
        let downlink_rate = achievable_rate(&down, alpha)?;
        Ok(Self {
            scheme,
            d_tx,
            uplink_rate,
            downlink_rate,
            sum_rate: uplink_rate + downlink_rate,
            per_user_sinr_up: up,
            per_user_sinr_down: down,
        })
    }
}

/// Half-duplex: zero-forcing downlink and decorrelator uplink over the whole
/// array, no self-interference. `ch` must carry full-array links.
pub fn half_duplex_sinrs(ch: &ChannelSet, cfg: &LinkConfig) -> Result<TrialSinrs> {
    let p_down = zf_precoder(&ch.h_down, cfg.bs_power_mw())?;
    let w = decorrelator(&ch.h_up)?;
    Ok(TrialSinrs {
        up: uplink_sinr(ch, None, &w, cfg)?,
        down: downlink_sinr(&ch.h_down, &p_down, None, cfg)?,
    })
}

/// Ideal full-duplex: partitioned array, simultaneous links, zero self-interference.
pub fn ideal_full_duplex_sinrs(ch: &ChannelSet, cfg: &LinkConfig) -> Result<TrialSinrs> {
    let p_down = zf_precoder(&ch.h_down, cfg.bs_power_mw())?;
    let w = decorrelator(&ch.h_up)?;
    Ok(TrialSinrs {
        up: uplink_sinr(ch, None, &w, cfg)?,
        down: downlink_sinr(&ch.h_down, &p_down, ch.h_usr.as_ref(), cfg)?,
    })
}

/// SoftNull with a precomputed self-interference basis.
pub fn softnull_sinrs(basis: &SoftNullBasis, ch: &ChannelSet, cfg: &LinkConfig, d_tx: usize) -> Result<TrialSinrs> {
    if ch.k_down() > d_tx {
        return Err(Error::Capability(format!(
            "{} downlink users exceed {d_tx} effective antennas",
            ch.k_down()
        )));
    }
    let pre = basis.precoder(d_tx)?;
    let h_eff = effective_channel(&ch.h_down, &pre.p_self)?;
    let p_down = zf_precoder(&h_eff, cfg.bs_power_mw())?;
    let x = pre.p_self.matmul(&p_down)?;
    let w = decorrelator(&ch.h_up)?;
    Ok(TrialSinrs {
        up: uplink_sinr(ch, Some(&x), &w, cfg)?,
        down: downlink_sinr(&h_eff, &p_down, ch.h_usr.as_ref(), cfg)?,
    })
}

/// SINRs of one realization under `scheme`.
pub fn trial_sinrs(scheme: Scheme, ch: &ChannelSet, cfg: &LinkConfig, d_tx: usize) -> Result<TrialSinrs> {
    match scheme {
        Scheme::HalfDuplex => half_duplex_sinrs(ch, cfg),
        Scheme::IdealFullDuplex => ideal_full_duplex_sinrs(ch, cfg),
        Scheme::SoftNull => softnull_sinrs(&SoftNullBasis::new(&ch.h_self)?, ch, cfg, d_tx),
    }
}

/// Runs `scheme` over every realization and averages the rates.
///
/// Half-duplex channel sets carry full-array links (`h_up` is `M × K`,
/// `h_down` is `K × M`); the full-duplex schemes expect links restricted to
/// the partition. `d_tx` is ignored by the half-duplex and ideal schemes.
pub fn simulate_scheme(
    scheme: Scheme,
    channels: &[ChannelSet],
    cfg: &LinkConfig,
    partition: &Partition,
    d_tx: usize,
) -> Result<RateReport> {
    cfg.validate()?;
    let (rx_dim, tx_dim) = match scheme {
        Scheme::HalfDuplex => (partition.n_elements(), partition.n_elements()),
        _ => (partition.m_rx(), partition.m_tx()),
    };
    for (p, ch) in channels.iter().enumerate() {
        ch.validate()?;
        if ch.h_up.rows() != rx_dim || ch.h_down.cols() != tx_dim {
            return Err(Error::Dimension(format!(
                "realization {p}: links are {}x{} up / {}x{} down, {scheme} needs {rx_dim} rx and {tx_dim} tx antennas",
                ch.h_up.rows(),
                ch.h_up.cols(),
                ch.h_down.rows(),
                ch.h_down.cols()
            )));
        }
        if ch.k_up() > rx_dim {
            return Err(Error::Capability(format!(
                "{} uplink users exceed {rx_dim} receive antennas",
                ch.k_up()
            )));
        }
        let tx_avail = if scheme == Scheme::SoftNull { d_tx } else { tx_dim };
        if ch.k_down() > tx_avail {
            return Err(Error::Capability(format!(
                "{} downlink users exceed {tx_avail} transmit dimensions",
                ch.k_down()
            )));
        }
    }
    if scheme == Scheme::SoftNull && (d_tx == 0 || d_tx > partition.m_tx()) {
        return Err(Error::Argument(format!(
            "d_tx must lie in [1, {}], got {d_tx}",
            partition.m_tx()
        )));
    }
    let trials = channels
        .par_iter()
        .map(|ch| trial_sinrs(scheme, ch, cfg, d_tx))
        .collect::<Result<Vec<_>>>()?;
    let used = match scheme {
        Scheme::HalfDuplex => partition.n_elements(),
        Scheme::IdealFullDuplex => partition.m_tx(),
        Scheme::SoftNull => d_tx,
    };
    RateReport::from_trials(scheme, used, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{random_complex_gaussian, Complex64};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dynamic_noise_examples() {
        let n = mw_to_dbm(dynamic_noise_power(dbm_to_mw(-20.0), 40.0).unwrap());
        assert!(close(n, -60.0, 1e-9));
        let n = mw_to_dbm(dynamic_noise_power(dbm_to_mw(-50.0), 40.0).unwrap());
        assert!(close(n, -90.0, 1e-9));
        assert_eq!(dynamic_noise_power(0.37, 0.0).unwrap(), 0.37);
        assert!(dynamic_noise_power(-1.0, 10.0).is_err());
        assert_eq!(dynamic_noise_power(1.0, f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn budget_examples_dominant() {
        let m = NoiseMode::Dominant;
        assert!(close(link_budget_snr(0.0, 80.0, 20.0, -90.0, 40.0, m), -20.0, 1e-9));
        assert!(close(link_budget_snr(0.0, 80.0, 50.0, -90.0, 40.0, m), 10.0, 1e-9));
        assert!(close(link_budget_snr(0.0, 100.0, 70.0, -90.0, 40.0, m), 10.0, 1e-9));
        // no self-interference above the thermal floor
        assert!(close(link_budget_snr(0.0, 80.0, 120.0, -90.0, 40.0, m), 10.0, 1e-9));
    }

    #[test]
    fn budget_sum_mode_adds_floors() {
        // equal thermal and dynamic floors: 3 dB worse than either alone
        let snr = link_budget_snr(0.0, 80.0, 50.0, -90.0, 40.0, NoiseMode::Sum);
        assert!(close(snr, 10.0 - 10.0 * 2f64.log10(), 1e-9));
        assert!(
            link_budget_snr(0.0, 80.0, 20.0, -90.0, 40.0, NoiseMode::Sum)
                <= link_budget_snr(0.0, 80.0, 20.0, -90.0, 40.0, NoiseMode::Dominant)
        );
    }

    #[test]
    fn achievable_rate_examples() {
        assert!(close(achievable_rate(&[vec![1.0]], 1.0).unwrap(), 1.0, 1e-15));
        assert!(close(achievable_rate(&[vec![1.0], vec![3.0]], 1.0).unwrap(), 1.5, 1e-15));
        let full = achievable_rate(&[vec![5.0, 2.0]], 1.0).unwrap();
        assert!(close(achievable_rate(&[vec![5.0, 2.0]], 0.5).unwrap(), full / 2.0, 1e-15));
        assert!(achievable_rate(&[vec![1.0]], 1.5).is_err());
        assert!(achievable_rate(&[vec![-1.0]], 1.0).is_err());
        assert!(achievable_rate(&[], 1.0).is_err());
    }

    fn single_antenna_set(h_self: f64, h_up: f64, h_down: f64) -> ChannelSet {
        let one = |x: f64| ComplexMatrix::from_vec(1, 1, vec![Complex64::new(x, 0.0)]).unwrap();
        ChannelSet::new(one(h_self), one(h_up), one(h_down), None).unwrap()
    }

    #[test]
    fn uplink_reduces_to_snr_without_downlink() {
        let cfg = LinkConfig {
            user_power_dbm: 0.0,
            thermal_noise_dbm: -20.0,
            d0_bs_db: f64::INFINITY,
            ..LinkConfig::default()
        };
        let ch = single_antenna_set(0.0, 1.0, 1.0);
        let w = decorrelator(&ch.h_up).unwrap();
        let s = uplink_sinr(&ch, None, &w, &cfg).unwrap();
        assert!(close(linear_to_db(s[0]), 20.0, 1e-9));
    }

    #[test]
    fn huge_self_interference_caps_sinr_at_dynamic_range() {
        let cfg = LinkConfig {
            user_power_dbm: 0.0,
            bs_power_dbm: 0.0,
            thermal_noise_dbm: -150.0,
            d0_bs_db: 25.0,
            ..LinkConfig::default()
        };
        let signal_gain: f64 = 1e-6;
        let si_gain = 1.0;
        let ch = single_antenna_set(si_gain, signal_gain.sqrt(), 1.0);
        let w = decorrelator(&ch.h_up).unwrap();
        let x = ComplexMatrix::identity(1);
        let s = uplink_sinr(&ch, Some(&x), &w, &cfg).unwrap()[0];
        let bound = signal_gain / (si_gain / db_to_linear(25.0));
        assert!(s <= bound && s > 0.99 * bound, "{s} vs {bound}");
    }

    #[test]
    fn zero_self_interference_matches_no_downlink() {
        let cfg = LinkConfig::default();
        let mut ch = ChannelSet::new(
            ComplexMatrix::zeros(4, 3),
            random_complex_gaussian(4, 2, 1e-8, 1),
            random_complex_gaussian(2, 3, 1e-8, 2),
            None,
        )
        .unwrap();
        let w = decorrelator(&ch.h_up).unwrap();
        let x = random_complex_gaussian(3, 2, 1.0, 3);
        let with = uplink_sinr(&ch, Some(&x), &w, &cfg).unwrap();
        let without = uplink_sinr(&ch, None, &w, &cfg).unwrap();
        assert_eq!(with, without);
        ch.h_self = ComplexMatrix::zeros(3, 3);
        assert!(uplink_sinr(&ch, Some(&x), &w, &cfg).is_err());
    }

    #[test]
    fn zf_downlink_sinr_is_alpha_over_thermal() {
        let cfg = LinkConfig {
            d0_user_db: f64::INFINITY,
            ..LinkConfig::default()
        };
        let h = random_complex_gaussian(3, 6, 1e-8, 4);
        let p = zf_precoder(&h, dbm_to_mw(cfg.bs_power_dbm)).unwrap();
        let alpha = h.matmul(&p).unwrap()[(0, 0)].norm_sqr();
        let s = downlink_sinr(&h, &p, None, &cfg).unwrap();
        for v in s {
            assert!(close(v / (alpha / dbm_to_mw(cfg.thermal_noise_dbm)), 1.0, 1e-9));
        }
    }

    #[test]
    fn user_to_user_interference_enters_denominator() {
        let g = Complex64::new(0.3, -0.4);
        let cfg = LinkConfig {
            include_h_usr: true,
            d0_user_db: f64::INFINITY,
            user_power_dbm: -10.0,
            thermal_noise_dbm: -40.0,
            ..LinkConfig::default()
        };
        let h = ComplexMatrix::identity(1);
        let p = ComplexMatrix::identity(1).scale_real(0.01);
        let u = ComplexMatrix::from_vec(1, 1, vec![g]).unwrap();
        let s = downlink_sinr(&h, &p, Some(&u), &cfg).unwrap()[0];
        let expect = 1e-4 / (g.norm_sqr() * 0.1 + 1e-4);
        assert!(close(s, expect, 1e-12 * expect));
        let off = LinkConfig {
            include_h_usr: false,
            ..cfg.clone()
        };
        assert!(downlink_sinr(&h, &p, Some(&u), &off).unwrap()[0] > s);
    }

    #[test]
    fn silent_downlink_has_zero_sinr() {
        let h = random_complex_gaussian(2, 4, 1.0, 1);
        let s = downlink_sinr(&h, &ComplexMatrix::zeros(4, 2), None, &LinkConfig::default()).unwrap();
        assert_eq!(s, vec![0.0, 0.0]);
    }

    #[test]
    fn config_validation() {
        assert!(LinkConfig::default().validate().is_ok());
        let bad = LinkConfig {
            d0_bs_db: 0.0,
            ..LinkConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = LinkConfig {
            thermal_noise_dbm: f64::NAN,
            ..LinkConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!("dominant".parse::<NoiseMode>().is_ok());
        assert!("max".parse::<NoiseMode>().is_err());
    }
}
