use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{ChannelSource, ExperimentConfig};
use super::runners::{synthesize_trace, Experiment};
use crate::channels::{load_trace, read_sidecar, save_trace, trace_from_json, trace_to_json, write_sidecar, ChannelSet};
use crate::error::{Error, Result};
use crate::link::{link_budget_snr, NoiseMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "softnull", version, about = "Full-duplex many-antenna beamforming experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Self-interference suppression against the number of effective antennas
    Suppression(RunArgs),
    /// Mean suppression of the structured partitions and of random partitions
    Partitions(RunArgs),
    /// SoftNull, ideal full-duplex and half-duplex rates against effective antennas
    Rates(RunArgs),
    /// Best SoftNull sum rate against the number of users
    Users(RunArgs),
    /// Uplink SNR from a back-of-envelope link budget
    #[command(allow_negative_numbers = true)]
    Budget(BudgetArgs),
    /// Inspect, generate and convert channel trace files
    #[command(subcommand)]
    Trace(TraceCommand),
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct RunArgs {
    /// TOML experiment configuration; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for every random draw
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (standard output when absent)
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// east-west, north-south, nw-se, interleaved or random
    #[arg(long)]
    partition: Option<String>,
    /// Transmit elements in the partition
    #[arg(long)]
    m_tx: Option<usize>,
    /// outdoor-like, indoor-like or trace
    #[arg(long)]
    channel: Option<String>,
    /// Direct-to-scattered self-interference power ratio
    #[arg(long)]
    kappa: Option<f64>,
    /// Trace file; implies --channel trace
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Comma-separated user counts
    #[arg(long, value_delimiter = ',')]
    users: Option<Vec<usize>>,
    /// Comma-separated path losses in dB
    #[arg(long, value_delimiter = ',')]
    path_loss: Option<Vec<f64>>,
    /// Comma-separated effective antenna counts
    #[arg(long, value_delimiter = ',')]
    d_tx: Option<Vec<usize>>,
    /// Channel realizations per point
    #[arg(long)]
    trials: Option<usize>,
    /// Subcarriers per realization
    #[arg(long)]
    subcarriers: Option<usize>,
    /// Random partitions averaged by `partitions`
    #[arg(long)]
    random: Option<usize>,
    /// Array sum power in dBm
    #[arg(long)]
    bs_power: Option<f64>,
    /// Per-user uplink power in dBm
    #[arg(long)]
    user_power: Option<f64>,
    /// Thermal noise per receive chain in dBm
    #[arg(long)]
    thermal: Option<f64>,
    /// Base-station dynamic range in dB
    #[arg(long)]
    d0_bs: Option<f64>,
    /// User dynamic range in dB
    #[arg(long)]
    d0_user: Option<f64>,
    /// Count uplink-user to downlink-user interference
    #[arg(long)]
    include_h_usr: bool,
}

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value {
                    cfg.$field = v;
                }
            };
        }
        set!(seed, self.seed);
        if let Some(f) = &self.format {
            cfg.format = f.parse()?;
        }
        if let Some(p) = &self.partition {
            cfg.partition = p.parse()?;
        }
        set!(m_tx, self.m_tx);
        if let Some(c) = &self.channel {
            cfg.channel = c.parse()?;
        }
        if self.kappa.is_some() {
            cfg.kappa = self.kappa;
        }
        if let Some(t) = &self.trace {
            cfg.trace = Some(t.clone());
            if self.channel.is_none() {
                cfg.channel = ChannelSource::Trace;
            }
        }
        set!(users, self.users.clone());
        set!(path_loss_db, self.path_loss.clone());
        set!(d_tx, self.d_tx.clone());
        set!(n_trials, self.trials);
        set!(n_subcarriers, self.subcarriers);
        set!(n_random, self.random);
        set!(bs_power_dbm, self.bs_power);
        set!(user_power_dbm, self.user_power);
        set!(thermal_noise_dbm, self.thermal);
        set!(d0_bs_db, self.d0_bs);
        set!(d0_user_db, self.d0_user);
        if self.include_h_usr {
            cfg.include_h_usr = true;
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct BudgetArgs {
    /// Transmit power in dBm
    #[arg(long)]
    tx: f64,
    /// Uplink path loss in dB
    #[arg(long)]
    pl: f64,
    /// Self-interference suppression in dB
    #[arg(long)]
    supp: f64,
    /// Thermal noise floor in dBm
    #[arg(long)]
    thermal: f64,
    /// Receiver dynamic range in dB
    #[arg(long)]
    dr: f64,
    /// dominant or sum
    #[arg(long, default_value = "sum")]
    mode: String,
}

#[derive(Subcommand, Debug)]
enum TraceCommand {
    /// Print dimensions, entry count and metadata of a trace file
    Inspect { file: PathBuf },
    /// Write synthetic channel sets (one per trial and subcarrier) to --output
    Generate(RunArgs),
    /// Convert between the binary format and JSON; a `.json` input is
    /// converted to binary, anything else to JSON
    Convert { input: PathBuf, output: PathBuf },
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 for usage and configuration errors, 2 for runtime failures.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Suppression(a) => run_experiment(Experiment::Suppression, &a),
        Command::Partitions(a) => run_experiment(Experiment::Partitions, &a),
        Command::Rates(a) => run_experiment(Experiment::Rates, &a),
        Command::Users(a) => run_experiment(Experiment::Users, &a),
        Command::Budget(a) => {
            let mode: NoiseMode = a.mode.parse()?;
            let snr = link_budget_snr(a.tx, a.pl, a.supp, a.thermal, a.dr, mode);
            println!("{snr:.1} dB");
            Ok(())
        }
        Command::Trace(TraceCommand::Inspect { file }) => inspect_trace(&file),
        Command::Trace(TraceCommand::Generate(a)) => generate_trace(&a),
        Command::Trace(TraceCommand::Convert { input, output }) => convert_trace(&input, &output),
    }
}

fn run_experiment(kind: Experiment, args: &RunArgs) -> Result<()> {
    let cfg = args.resolve()?;
    let table = kind.run(&cfg)?;
    match &cfg.output {
        Some(path) => table.write(path, cfg.format),
        None => emit(&table.render(cfg.format)),
    }
}

fn emit(text: &str) -> Result<()> {
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn inspect_trace(file: &Path) -> Result<()> {
    let sets = load_trace(file)?;
    let first = &sets[0];
    let with_usr = sets.iter().filter(|s| s.h_usr.is_some()).count();
    let mean_coupling_db = |s: &ChannelSet| {
        10.0 * (s.h_self.frobenius_norm_sq() / (s.m_rx() * s.m_tx()) as f64).log10()
    };
    let mut out = format!(
        "file: {}\nsubcarriers: {}\nm_rx: {}\nm_tx: {}\nk_up: {}\nk_down: {}\nh_usr_present: {with_usr}\n",
        file.display(),
        sets.len(),
        first.m_rx(),
        first.m_tx(),
        first.k_up(),
        first.k_down()
    );
    let levels: Vec<f64> = sets.iter().map(mean_coupling_db).collect();
    let lo = levels.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.push_str(&format!("mean_self_coupling_db: {lo:.2} .. {hi:.2}\n"));
    if let Some(meta) = read_sidecar(file)? {
        for (k, v) in meta {
            out.push_str(&format!("meta.{k}: {v}\n"));
        }
    }
    emit(&out)
}

fn generate_trace(args: &RunArgs) -> Result<()> {
    let cfg = args.resolve()?;
    let path = cfg
        .output
        .clone()
        .ok_or_else(|| Error::Config("trace generate needs --output".into()))?;
    let sets = synthesize_trace(&cfg)?;
    save_trace(&path, &sets)?;
    let meta: BTreeMap<String, String> = [
        ("seed", cfg.seed.to_string()),
        ("channel", cfg.channel.to_string()),
        ("kappa", cfg.kappa_value().to_string()),
        ("partition", cfg.partition.to_string()),
        ("m_tx", cfg.m_tx.to_string()),
        ("grid", format!("{}x{}", cfg.rows, cfg.cols)),
        ("carrier_hz", cfg.carrier_hz.to_string()),
        ("n_trials", cfg.n_trials.to_string()),
        ("n_subcarriers", cfg.n_subcarriers.to_string()),
        ("users", cfg.users[0].to_string()),
        ("path_loss_db", cfg.path_loss_db[0].to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    write_sidecar(&path, &meta)
}

fn convert_trace(input: &Path, output: &Path) -> Result<()> {
    let to_binary = input.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if to_binary {
        let text = fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
        save_trace(output, &trace_from_json(&text)?)
    } else {
        let sets = load_trace(input)?;
        fs::write(output, trace_to_json(&sets)).map_err(|e| Error::io(output, e))
    }
}
