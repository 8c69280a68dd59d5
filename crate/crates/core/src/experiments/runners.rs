use rayon::prelude::*;

use super::config::{ChannelSource, ExperimentConfig};
use super::table::{Cell, Table};
use crate::channels::{draw_trial, geometric_self_interference, load_trace, rayleigh_channel, ChannelSet};
use crate::error::{Error, Result};
use crate::geometry::{random_partition, ArrayGeometry, Partition, PartitionKind};
use crate::link::{simulate_scheme, softnull_sinrs, LinkConfig, RateReport, Scheme};
use crate::numerics::{derive_seed, ComplexMatrix};
use crate::precoding::{per_antenna_suppression_db, suppression_db, SoftNullBasis};

// Independent random streams derived from the master seed.
const STREAM_SELF: u64 = 10;
const STREAM_USERS: u64 = 11;
const STREAM_USER_TO_USER: u64 = 12;
const STREAM_PARTITION: u64 = 13;

/// Self-interference realizations for `part`, ordered trial-major then by
/// subcarrier. Trace sources yield every entry of the file.
pub fn self_interference_realizations(
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    part: &Partition,
) -> Result<Vec<ComplexMatrix>> {
    match cfg.channel {
        ChannelSource::Trace => {
            let path = cfg
                .trace
                .as_ref()
                .ok_or_else(|| Error::Config("trace source without a trace path".into()))?;
            if !path.is_file() {
                return Err(Error::Config(format!("trace file {} does not exist", path.display())));
            }
            let sets = load_trace(path)?;
            let want = (part.m_rx(), part.m_tx());
            if let Some(set) = sets.first() {
                if set.h_self.shape() != want {
                    return Err(Error::Dimension(format!(
                        "trace {} holds {}x{} self-interference channels, the {} partition needs {}x{} (rx x tx)",
                        path.display(),
                        set.h_self.rows(),
                        set.h_self.cols(),
                        cfg.partition,
                        want.0,
                        want.1
                    )));
                }
            }
            Ok(sets.into_iter().map(|s| s.h_self).collect())
        }
        ChannelSource::OutdoorLike | ChannelSource::IndoorLike => {
            synthetic_realizations(cfg, geom, part, cfg.seed)
        }
    }
}

fn synthetic_realizations(
    cfg: &ExperimentConfig,
    geom: &ArrayGeometry,
    part: &Partition,
    seed: u64,
) -> Result<Vec<ComplexMatrix>> {
    let n_sub = cfg.n_subcarriers;
    (0..cfg.n_trials * n_sub)
        .into_par_iter()
        .map(|i| {
            let params = cfg.si_params(i % n_sub, derive_seed(seed, STREAM_SELF, i as u64));
            geometric_self_interference(geom, part, &params)
        })
        .collect()
}

/// Mean total suppression in dB for every `d_tx` in `sweep`, averaged over
/// realizations.
pub fn mean_suppression_curve(realizations: &[ComplexMatrix], sweep: &[usize]) -> Result<Vec<f64>> {
    let per_real = realizations
        .par_iter()
        .map(|h| {
            let basis = SoftNullBasis::new(h)?;
            sweep
                .iter()
                .map(|&d| suppression_db(h, &basis.precoder(d)?, h.rows()))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(average_columns(&per_real, sweep.len()))
}

fn average_columns(rows: &[Vec<f64>], width: usize) -> Vec<f64> {
    let mut acc = vec![0.0; width];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row) {
            *a += v;
        }
    }
    acc.iter().map(|a| a / rows.len() as f64).collect()
}

fn setup(cfg: &ExperimentConfig) -> Result<(ArrayGeometry, Partition)> {
    cfg.validate()?;
    let geom = cfg.geometry()?;
    let part = cfg.build_partition(&geom)?;
    Ok((geom, part))
}

/// Per-receive-antenna and mean suppression against `d_tx`.
///
/// Columns: `d_tx`, `rx<element>_suppression_db` for every receive element,
/// `mean_suppression_db`.
pub fn run_suppression_curve(cfg: &ExperimentConfig) -> Result<Table> {
    let (geom, part) = setup(cfg)?;
    let sweep = cfg.d_tx_sweep();
    let hs = self_interference_realizations(cfg, &geom, &part)?;

    // per realization, per d_tx: per-antenna values followed by the total
    let per_real = hs
        .par_iter()
        .map(|h| {
            let basis = SoftNullBasis::new(h)?;
            sweep
                .iter()
                .map(|&d| {
                    let pre = basis.precoder(d)?;
                    let mut v = per_antenna_suppression_db(h, &pre)?;
                    v.push(suppression_db(h, &pre, h.rows())?);
                    Ok(v)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let width = part.m_rx() + 1;
    let mut columns = vec!["d_tx".to_string()];
    columns.extend(part.rx().iter().map(|e| format!("rx{e}_suppression_db")));
    columns.push("mean_suppression_db".into());
    let mut table = Table::new(columns);
    for (j, &d) in sweep.iter().enumerate() {
        let rows: Vec<Vec<f64>> = per_real.iter().map(|r| r[j].clone()).collect();
        let mut row = vec![Cell::from(d)];
        row.extend(average_columns(&rows, width).into_iter().map(Cell::from));
        table.push(row);
    }
    Ok(table)
}

/// Mean suppression of the four structured partitions and the average over
/// `n_random` random partitions. Needs a synthetic channel source.
///
/// Columns: `partition`, `d_tx`, `mean_suppression_db`.
pub fn run_partition_compare(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    if cfg.channel == ChannelSource::Trace {
        return Err(Error::Config(
            "partition comparison needs a synthetic channel source; a trace fixes one partition".into(),
        ));
    }
    let geom = cfg.geometry()?;
    let sweep = cfg.d_tx_sweep();
    let mut table = Table::new(["partition", "d_tx", "mean_suppression_db"]);

    for kind in PartitionKind::ALL {
        let curve = if kind == PartitionKind::Random {
            let curves = (0..cfg.n_random)
                .into_par_iter()
                .map(|r| {
                    let part = random_partition(&geom, cfg.m_tx, derive_seed(cfg.seed, STREAM_PARTITION, r as u64))?;
                    let hs = synthetic_realizations(cfg, &geom, &part, cfg.seed)?;
                    mean_suppression_curve(&hs, &sweep)
                })
                .collect::<Result<Vec<_>>>()?;
            average_columns(&curves, sweep.len())
        } else {
            let part = kind.build(&geom, cfg.m_tx, cfg.seed)?;
            let hs = synthetic_realizations(cfg, &geom, &part, cfg.seed)?;
            mean_suppression_curve(&hs, &sweep)?
        };
        for (&d, s) in sweep.iter().zip(curve) {
            table.push(vec![kind.label().into(), d.into(), s.into()]);
        }
    }
    Ok(table)
}

/// Channel realizations of one (users, path loss) point for both duplexing modes.
struct RateTrials {
    full_duplex: Vec<ChannelSet>,
    half_duplex: Vec<ChannelSet>,
}

fn rate_trials(
    cfg: &ExperimentConfig,
    part: &Partition,
    hs: &[ComplexMatrix],
    users: usize,
    path_loss_db: f64,
) -> Result<RateTrials> {
    if users > part.m_tx() || users > part.m_rx() {
        return Err(Error::Capability(format!(
            "{users} users exceed the {} transmit / {} receive antennas",
            part.m_tx(),
            part.m_rx()
        )));
    }
    let drawn = hs
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            let mut t = draw_trial(part, h.clone(), users, path_loss_db, derive_seed(cfg.seed, STREAM_USERS, i as u64))?;
            if cfg.include_h_usr {
                let seed = derive_seed(cfg.seed, STREAM_USER_TO_USER, i as u64);
                t.full_duplex.h_usr = Some(rayleigh_channel(users, users, path_loss_db, seed)?);
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let (full_duplex, half_duplex) = drawn.into_iter().map(|t| (t.full_duplex, t.half_duplex)).unzip();
    Ok(RateTrials {
        full_duplex,
        half_duplex,
    })
}

fn softnull_report(
    bases: &[SoftNullBasis],
    sets: &[ChannelSet],
    link: &LinkConfig,
    d_tx: usize,
) -> Result<RateReport> {
    let trials = bases
        .par_iter()
        .zip(sets)
        .map(|(b, ch)| softnull_sinrs(b, ch, link, d_tx))
        .collect::<Result<Vec<_>>>()?;
    RateReport::from_trials(Scheme::SoftNull, d_tx, trials)
}

/// Rates at one (users, path loss) point: half-duplex, ideal full-duplex and
/// SoftNull at every feasible `d_tx` of the sweep (`d_tx >= users`).
struct RatePoint {
    half_duplex: RateReport,
    ideal: RateReport,
    softnull: Vec<RateReport>,
}

fn rate_point(
    cfg: &ExperimentConfig,
    part: &Partition,
    hs: &[ComplexMatrix],
    bases: &[SoftNullBasis],
    users: usize,
    path_loss_db: f64,
) -> Result<RatePoint> {
    let link = cfg.link();
    let trials = rate_trials(cfg, part, hs, users, path_loss_db)?;
    let half_duplex = simulate_scheme(Scheme::HalfDuplex, &trials.half_duplex, &link, part, part.n_elements())?;
    let ideal = simulate_scheme(Scheme::IdealFullDuplex, &trials.full_duplex, &link, part, part.m_tx())?;
    let softnull = cfg
        .d_tx_sweep()
        .into_iter()
        .filter(|&d| d >= users)
        .map(|d| softnull_report(bases, &trials.full_duplex, &link, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatePoint {
        half_duplex,
        ideal,
        softnull,
    })
}

fn rate_setup(cfg: &ExperimentConfig) -> Result<(Partition, Vec<ComplexMatrix>, Vec<SoftNullBasis>)> {
    let (geom, part) = setup(cfg)?;
    let hs = self_interference_realizations(cfg, &geom, &part)?;
    let bases = hs.par_iter().map(SoftNullBasis::new).collect::<Result<Vec<_>>>()?;
    Ok((part, hs, bases))
}

/// Uplink, downlink and sum rates against `d_tx` for every configured path
/// loss and user count. Each `d_tx` row block holds SoftNull, ideal
/// full-duplex and half-duplex; the last two do not depend on `d_tx` and are
/// repeated. Sweep points with fewer effective antennas than users are
/// skipped.
pub fn run_rate_curve(cfg: &ExperimentConfig) -> Result<Table> {
    let (part, hs, bases) = rate_setup(cfg)?;
    let mut table = Table::new([
        "path_loss_db",
        "users",
        "d_tx",
        "scheme",
        "uplink_rate_bps_per_hz",
        "downlink_rate_bps_per_hz",
        "sum_rate_bps_per_hz",
    ]);
    for &pl in &cfg.path_loss_db {
        for &k in &cfg.users {
            let point = rate_point(cfg, &part, &hs, &bases, k, pl)?;
            for sn in &point.softnull {
                for r in [sn, &point.ideal, &point.half_duplex] {
                    table.push(vec![
                        pl.into(),
                        k.into(),
                        sn.d_tx.into(),
                        r.scheme.label().into(),
                        r.uplink_rate.into(),
                        r.downlink_rate.into(),
                        r.sum_rate.into(),
                    ]);
                }
            }
        }
    }
    Ok(table)
}

/// Best SoftNull sum rate over the `d_tx` sweep against the user count,
/// alongside the half-duplex and ideal full-duplex sum rates.
///
/// Columns: `path_loss_db`, `users`, `scheme`, `best_d_tx` (SoftNull only),
/// `sum_rate_bps_per_hz`.
pub fn run_users_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    let (part, hs, bases) = rate_setup(cfg)?;
    let mut table = Table::new(["path_loss_db", "users", "scheme", "best_d_tx", "sum_rate_bps_per_hz"]);
    for &pl in &cfg.path_loss_db {
        for &k in &cfg.users {
            let point = rate_point(cfg, &part, &hs, &bases, k, pl)?;
            let best = best_softnull(&point.softnull).ok_or_else(|| {
                Error::Capability(format!("no d_tx in the sweep can serve {k} users"))
            })?;
            table.push(vec![
                pl.into(),
                k.into(),
                Scheme::SoftNull.label().into(),
                best.d_tx.into(),
                best.sum_rate.into(),
            ]);
            for r in [&point.ideal, &point.half_duplex] {
                table.push(vec![pl.into(), k.into(), r.scheme.label().into(), Cell::Empty, r.sum_rate.into()]);
            }
        }
    }
    Ok(table)
}

/// Highest sum rate; ties go to the smaller `d_tx`.
fn best_softnull(reports: &[RateReport]) -> Option<&RateReport> {
    reports
        .iter()
        .fold(None, |best: Option<&RateReport>, r| match best {
            Some(b) if b.sum_rate >= r.sum_rate => Some(b),
            _ => Some(r),
        })
}

/// Full-duplex channel sets for a trace file: `n_trials × n_subcarriers`
/// synthetic realizations for the first configured user count and path loss.
pub fn synthesize_trace(cfg: &ExperimentConfig) -> Result<Vec<ChannelSet>> {
    if cfg.channel == ChannelSource::Trace {
        return Err(Error::Config("trace generation needs a synthetic channel source".into()));
    }
    let (geom, part) = setup(cfg)?;
    let hs = synthetic_realizations(cfg, &geom, &part, cfg.seed)?;
    let trials = rate_trials(cfg, &part, &hs, cfg.users[0], cfg.path_loss_db[0])?;
    Ok(trials
        .full_duplex
        .into_iter()
        .enumerate()
        .map(|(i, mut set)| {
            set.subcarrier_index = i;
            set
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Suppression,
    Partitions,
    Rates,
    Users,
}

impl Experiment {
    pub fn run(self, cfg: &ExperimentConfig) -> Result<Table> {
        match self {
            Experiment::Suppression => run_suppression_curve(cfg),
            Experiment::Partitions => run_partition_compare(cfg),
            Experiment::Rates => run_rate_curve(cfg),
            Experiment::Users => run_users_sweep(cfg),
        }
    }
}
