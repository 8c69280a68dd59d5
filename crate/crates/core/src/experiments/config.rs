use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::SiChannelParams;
use crate::channels::synthetic::{INDOOR_KAPPA, OUTDOOR_KAPPA};
use crate::error::{Error, Result};
use crate::geometry::{
    ArrayGeometry, Partition, PartitionKind, DEFAULT_CARRIER_HZ, DEFAULT_COLS, DEFAULT_ROWS, DEFAULT_SPACING_M,
    SPEED_OF_LIGHT,
};
use crate::link::LinkConfig;

/// Where self-interference realizations come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelSource {
    /// Synthetic model with a strong direct path.
    OutdoorLike,
    /// Synthetic model with heavy scattering.
    IndoorLike,
    /// Every entry of the file at `trace` is one realization.
    Trace,
}

impl ChannelSource {
    pub fn label(self) -> &'static str {
        match self {
            ChannelSource::OutdoorLike => "outdoor-like",
            ChannelSource::IndoorLike => "indoor-like",
            ChannelSource::Trace => "trace",
        }
    }
}

impl fmt::Display for ChannelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ChannelSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "outdoor-like" => Ok(ChannelSource::OutdoorLike),
            "indoor-like" => Ok(ChannelSource::IndoorLike),
            "trace" => Ok(ChannelSource::Trace),
            _ => Err(Error::Config(format!(
                "unknown channel source {s:?} (outdoor-like|indoor-like|trace)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown output format {s:?} (csv|json)"))),
        }
    }
}

/// Flat experiment configuration, read from TOML. Every key is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,

    pub rows: usize,
    pub cols: usize,
    pub spacing_m: f64,
    pub carrier_hz: f64,
    /// Frequency step between simulated subcarriers. Zero keeps every
    /// subcarrier on the carrier, so subcarriers differ only in their
    /// scattered component.
    pub subcarrier_spacing_hz: f64,

    pub partition: PartitionKind,
    pub m_tx: usize,

    pub channel: ChannelSource,
    /// Overrides the preset's direct-to-scattered power ratio.
    pub kappa: Option<f64>,
    pub reference_coupling_db: f64,
    pub trace: Option<PathBuf>,

    /// Uplink and downlink user counts (equal).
    pub users: Vec<usize>,
    pub path_loss_db: Vec<f64>,
    /// Effective transmit antenna sweep; empty means `1..=m_tx`.
    pub d_tx: Vec<usize>,
    pub n_trials: usize,
    pub n_subcarriers: usize,
    /// Random partitions averaged by the partition comparison.
    pub n_random: usize,

    pub bs_power_dbm: f64,
    pub user_power_dbm: f64,
    pub thermal_noise_dbm: f64,
    pub d0_bs_db: f64,
    pub d0_user_db: f64,
    pub include_h_usr: bool,

    /// Standard output when absent.
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let link = LinkConfig::default();
        Self {
            seed: 1,
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            spacing_m: DEFAULT_SPACING_M,
            carrier_hz: DEFAULT_CARRIER_HZ,
            subcarrier_spacing_hz: 0.0,
            partition: PartitionKind::EastWest,
            m_tx: DEFAULT_ROWS * DEFAULT_COLS / 2,
            channel: ChannelSource::OutdoorLike,
            kappa: None,
            reference_coupling_db: crate::channels::synthetic::DEFAULT_REFERENCE_COUPLING_DB,
            trace: None,
            users: vec![4],
            path_loss_db: vec![85.0],
            d_tx: Vec::new(),
            n_trials: 20,
            n_subcarriers: 1,
            n_random: 200,
            bs_power_dbm: link.bs_power_dbm,
            user_power_dbm: link.user_power_dbm,
            thermal_noise_dbm: link.thermal_noise_dbm,
            d0_bs_db: link.d0_bs_db,
            d0_user_db: link.d0_user_db,
            include_h_usr: link.include_h_usr,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Static checks; file existence is checked when a trace is opened.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.rows == 0 || self.cols == 0 {
            return bad(format!("array must be non-empty, got {}x{}", self.rows, self.cols));
        }
        if !(self.spacing_m > 0.0 && self.spacing_m.is_finite()) {
            return bad(format!("spacing_m must be positive, got {}", self.spacing_m));
        }
        if !(self.carrier_hz > 0.0 && self.carrier_hz.is_finite()) {
            return bad(format!("carrier_hz must be positive, got {}", self.carrier_hz));
        }
        if !(self.subcarrier_spacing_hz >= 0.0 && self.subcarrier_spacing_hz.is_finite()) {
            return bad(format!("subcarrier_spacing_hz must be >= 0, got {}", self.subcarrier_spacing_hz));
        }
        let n = self.rows * self.cols;
        if self.m_tx == 0 || self.m_tx >= n {
            return bad(format!("m_tx must lie in [1, {}], got {}", n - 1, self.m_tx));
        }
        if let Some(k) = self.kappa {
            if !(k >= 0.0) {
                return bad(format!("kappa must be >= 0, got {k}"));
            }
        }
        if !self.reference_coupling_db.is_finite() {
            return bad("reference_coupling_db must be finite".into());
        }
        match (self.channel, &self.trace) {
            (ChannelSource::Trace, None) => return bad("channel = \"trace\" requires a trace path".into()),
            (ChannelSource::Trace, Some(_)) if self.kappa.is_some() => {
                return bad("kappa only applies to synthetic channels".into())
            }
            _ => {}
        }
        if self.users.is_empty() || self.path_loss_db.is_empty() {
            return bad("users and path_loss_db must be non-empty".into());
        }
        if self.users.contains(&0) {
            return bad("user counts must be >= 1".into());
        }
        if let Some(pl) = self.path_loss_db.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
            return bad(format!("path loss must be finite and >= 0, got {pl}"));
        }
        if let Some(d) = self.d_tx.iter().find(|&&d| d == 0 || d > self.m_tx) {
            return bad(format!("d_tx values must lie in [1, {}], got {d}", self.m_tx));
        }
        if self.n_trials == 0 || self.n_subcarriers == 0 || self.n_random == 0 {
            return bad("n_trials, n_subcarriers and n_random must be >= 1".into());
        }
        self.link().validate().map_err(|e| Error::Config(e.to_string()))
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        ArrayGeometry::rectangular(self.rows, self.cols, self.spacing_m)
    }

    pub fn build_partition(&self, geom: &ArrayGeometry) -> Result<Partition> {
        self.partition.build(geom, self.m_tx, self.seed)
    }

    /// The configured sweep, sorted and deduplicated.
    pub fn d_tx_sweep(&self) -> Vec<usize> {
        if self.d_tx.is_empty() {
            return (1..=self.m_tx).collect();
        }
        let mut d = self.d_tx.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn link(&self) -> LinkConfig {
        LinkConfig {
            bs_power_dbm: self.bs_power_dbm,
            user_power_dbm: self.user_power_dbm,
            thermal_noise_dbm: self.thermal_noise_dbm,
            d0_bs_db: self.d0_bs_db,
            d0_user_db: self.d0_user_db,
            include_h_usr: self.include_h_usr,
        }
    }

    pub fn kappa_value(&self) -> f64 {
        self.kappa.unwrap_or(match self.channel {
            ChannelSource::IndoorLike => INDOOR_KAPPA,
            _ => OUTDOOR_KAPPA,
        })
    }

    /// Synthetic model parameters for subcarrier `sub`; subcarriers sit
    /// symmetrically around the carrier.
    pub fn si_params(&self, sub: usize, seed: u64) -> SiChannelParams {
        let offset = sub as f64 - (self.n_subcarriers as f64 - 1.0) / 2.0;
        let freq = self.carrier_hz + offset * self.subcarrier_spacing_hz;
        SiChannelParams::new(SPEED_OF_LIGHT / freq, self.kappa_value(), self.reference_coupling_db, seed)
    }
}
