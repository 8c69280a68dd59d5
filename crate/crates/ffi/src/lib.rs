//! C ABI over the `softnull` simulator.
//!
//! Every fallible function returns an [`SnStatus`]; on failure a message is
//! kept per thread and read back with [`sn_last_error_message`]. Objects are
//! opaque handles created by `sn_*_new`/`sn_*_load` style functions and
//! released with the matching `sn_*_free`. Matrices cross the boundary as
//! row-major pairs of `double` arrays holding real and imaginary parts.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use softnull::channels::{load_trace, save_trace};
use softnull::experiments::{Experiment, ExperimentConfig, OutputFormat};
use softnull::geometry::{ArrayGeometry, PartitionKind, DEFAULT_SPACING_M};
use softnull::link::{dynamic_noise_power, link_budget_snr, NoiseMode};
use softnull::numerics::random_complex_gaussian;
use softnull::precoding::{decorrelator, effective_channel, suppression_db, zf_precoder};
use softnull::{ChannelSet, Complex64, ComplexMatrix, Error, SoftNullBasis};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Rank = 4,
    Numerical = 5,
    Capability = 6,
    Config = 7,
    Trace = 8,
    Io = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnPartitionKind {
    EastWest = 0,
    NorthSouth = 1,
    NwSe = 2,
    Interleaved = 3,
    Random = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnNoiseMode {
    Dominant = 0,
    Sum = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnExperiment {
    Suppression = 0,
    Partitions = 1,
    Rates = 2,
    Users = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnFormat {
    Csv = 0,
    Json = 1,
}

/// Which matrix of a trace entry to copy out.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnLink {
    SelfInterference = 0,
    Uplink = 1,
    Downlink = 2,
    UserToUser = 3,
}

/// Dense complex matrix.
pub struct SnMatrix(ComplexMatrix);

/// Right singular basis of a self-interference channel, reusable across
/// effective antenna counts.
pub struct SnBasis(SoftNullBasis);

/// Ordered channel sets read from or destined for a trace file.
pub struct SnTrace(Vec<ChannelSet>);

pub struct SnConfig(ExperimentConfig);

/// Dimensions of one trace entry.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SnTraceDims {
    pub m_rx: usize,
    pub m_tx: usize,
    pub k_up: usize,
    pub k_down: usize,
    pub subcarrier_index: usize,
    pub has_user_to_user: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Argument(_) => SnStatus::InvalidArgument,
            Error::Dimension(_) => SnStatus::Dimension,
            Error::Rank { .. } => SnStatus::Rank,
            Error::Numerical(_) => SnStatus::Numerical,
            Error::Capability(_) => SnStatus::Capability,
            Error::Config(_) => SnStatus::Config,
            Error::Trace(_) => SnStatus::Trace,
            Error::Io { .. } => SnStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, recording any failure or panic for [`sn_last_error_message`].
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SnStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => SnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            SnStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SnStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SnStatus::InvalidArgument, msg.into())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn sn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// Matrices

/// Builds a `rows x cols` matrix from row-major real and imaginary parts.
/// `im` may be NULL for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-NULL) must point to `rows * cols` doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_matrix_new(
    rows: usize,
    cols: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut SnMatrix,
) -> SnStatus {
    guard(|| {
        let n = rows.checked_mul(cols).ok_or_else(|| invalid("matrix size overflows"))?;
        let re = slice(re, n, "re")?;
        let im = if im.is_null() { None } else { Some(slice(im, n, "im")?) };
        let data = (0..n)
            .map(|i| Complex64::new(re[i], im.map_or(0.0, |v| v[i])))
            .collect();
        let m = ComplexMatrix::from_vec(rows, cols, data)?;
        write_out(out, boxed(SnMatrix(m)), "out")
    })
}

/// Matrix with i.i.d. circularly symmetric complex Gaussian entries.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_matrix_gaussian(
    rows: usize,
    cols: usize,
    variance: f64,
    seed: u64,
    out: *mut *mut SnMatrix,
) -> SnStatus {
    guard(|| {
        if !(variance >= 0.0 && variance.is_finite()) {
            return Err(invalid(format!("variance must be finite and >= 0, got {variance}")));
        }
        write_out(out, boxed(SnMatrix(random_complex_gaussian(rows, cols, variance, seed))), "out")
    })
}

/// # Safety
/// `m` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sn_matrix_free(m: *mut SnMatrix) {
    free(m)
}

/// # Safety
/// `m` must be a live matrix handle; `rows` and `cols` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_matrix_shape(m: *const SnMatrix, rows: *mut usize, cols: *mut usize) -> SnStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        write_out(rows, m.rows(), "rows")?;
        write_out(cols, m.cols(), "cols")
    })
}

/// Copies the entries out in row-major order. `len` is the capacity of each
/// buffer and must be at least `rows * cols`; `im` may be NULL.
///
/// # Safety
/// `re` (and `im` when non-NULL) must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sn_matrix_copy(m: *const SnMatrix, re: *mut f64, im: *mut f64, len: usize) -> SnStatus {
    guard(|| {
        let m = &deref(m, "matrix")?.0;
        let n = m.rows() * m.cols();
        if len < n {
            return Err(invalid(format!("buffer holds {len} entries, matrix has {n}")));
        }
        let re = slice_mut(re, n, "re")?;
        for (dst, z) in re.iter_mut().zip(m.as_slice()) {
            *dst = z.re;
        }
        if !im.is_null() {
            let im = slice_mut(im, n, "im")?;
            for (dst, z) in im.iter_mut().zip(m.as_slice()) {
                *dst = z.im;
            }
        }
        Ok(())
    })
}

// Precoding

/// Factors `h_self` once for later precoders.
///
/// # Safety
/// `h_self` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_basis_new(h_self: *const SnMatrix, out: *mut *mut SnBasis) -> SnStatus {
    guard(|| {
        let basis = SoftNullBasis::new(&deref(h_self, "h_self")?.0)?;
        write_out(out, boxed(SnBasis(basis)), "out")
    })
}

/// # Safety
/// `b` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sn_basis_free(b: *mut SnBasis) {
    free(b)
}

/// Self-interference precoder with `d_tx` effective antennas, plus its
/// residual power `‖H_self P‖_F²`. `residual` may be NULL.
///
/// # Safety
/// `b` must be a live basis handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_basis_precoder(
    b: *const SnBasis,
    d_tx: usize,
    out: *mut *mut SnMatrix,
    residual: *mut f64,
) -> SnStatus {
    guard(|| {
        let pre = deref(b, "basis")?.0.precoder(d_tx)?;
        if !residual.is_null() {
            residual.write(pre.residual_power);
        }
        write_out(out, boxed(SnMatrix(pre.p_self)), "out")
    })
}

/// Mean suppression in dB for `d_tx` effective antennas; `+inf` for a
/// perfect null.
///
/// # Safety
/// `h_self` must be a live matrix handle; `out_db` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_suppression_db(h_self: *const SnMatrix, d_tx: usize, out_db: *mut f64) -> SnStatus {
    guard(|| {
        let h = &deref(h_self, "h_self")?.0;
        let pre = SoftNullBasis::new(h)?.precoder(d_tx)?;
        write_out(out_db, suppression_db(h, &pre, h.rows())?, "out_db")
    })
}

/// `h_down · p_self`.
///
/// # Safety
/// Both inputs must be live matrix handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_effective_channel(
    h_down: *const SnMatrix,
    p_self: *const SnMatrix,
    out: *mut *mut SnMatrix,
) -> SnStatus {
    guard(|| {
        let h = effective_channel(&deref(h_down, "h_down")?.0, &deref(p_self, "p_self")?.0)?;
        write_out(out, boxed(SnMatrix(h)), "out")
    })
}

/// Zero-forcing downlink precoder spending `total_power`.
///
/// # Safety
/// `h_eff` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_zf_precoder(h_eff: *const SnMatrix, total_power: f64, out: *mut *mut SnMatrix) -> SnStatus {
    guard(|| {
        let p = zf_precoder(&deref(h_eff, "h_eff")?.0, total_power)?;
        write_out(out, boxed(SnMatrix(p)), "out")
    })
}

/// Uplink decorrelator, the left pseudoinverse of `h_up`.
///
/// # Safety
/// `h_up` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_decorrelator(h_up: *const SnMatrix, out: *mut *mut SnMatrix) -> SnStatus {
    guard(|| {
        let w = decorrelator(&deref(h_up, "h_up")?.0)?;
        write_out(out, boxed(SnMatrix(w)), "out")
    })
}

// Link budget

/// Receiver floor `received_power / 10^(d0_db/10)`, same unit as the input.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_dynamic_noise_power(received_power: f64, d0_db: f64, out: *mut f64) -> SnStatus {
    guard(|| write_out(out, dynamic_noise_power(received_power, d0_db)?, "out"))
}

/// Uplink SNR in dB from a dB-domain budget.
///
/// # Safety
/// `out_db` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_link_budget_snr(
    tx_dbm: f64,
    path_loss_db: f64,
    suppression_db: f64,
    thermal_dbm: f64,
    d0_db: f64,
    mode: SnNoiseMode,
    out_db: *mut f64,
) -> SnStatus {
    guard(|| {
        let mode = match mode {
            SnNoiseMode::Dominant => NoiseMode::Dominant,
            SnNoiseMode::Sum => NoiseMode::Sum,
        };
        let snr = link_budget_snr(tx_dbm, path_loss_db, suppression_db, thermal_dbm, d0_db, mode);
        write_out(out_db, snr, "out_db")
    })
}

// Geometry

/// Splits a `rows x cols` grid into `m_tx` transmit and `rows*cols - m_tx`
/// receive element indices (row-major), each written ascending. `seed` only
/// affects the random kind.
///
/// # Safety
/// `tx` must hold `tx_len` and `rx` `rx_len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn sn_partition(
    kind: SnPartitionKind,
    rows: usize,
    cols: usize,
    m_tx: usize,
    seed: u64,
    tx: *mut usize,
    tx_len: usize,
    rx: *mut usize,
    rx_len: usize,
) -> SnStatus {
    guard(|| {
        let kind = match kind {
            SnPartitionKind::EastWest => PartitionKind::EastWest,
            SnPartitionKind::NorthSouth => PartitionKind::NorthSouth,
            SnPartitionKind::NwSe => PartitionKind::NwSe,
            SnPartitionKind::Interleaved => PartitionKind::Interleaved,
            SnPartitionKind::Random => PartitionKind::Random,
        };
        let geom = ArrayGeometry::rectangular(rows, cols, DEFAULT_SPACING_M)?;
        let part = kind.build(&geom, m_tx, seed)?;
        if tx_len < part.m_tx() || rx_len < part.m_rx() {
            return Err(invalid(format!(
                "buffers hold {tx_len} tx and {rx_len} rx indices, need {} and {}",
                part.m_tx(),
                part.m_rx()
            )));
        }
        slice_mut(tx, part.m_tx(), "tx")?.copy_from_slice(part.tx());
        slice_mut(rx, part.m_rx(), "rx")?.copy_from_slice(part.rx());
        Ok(())
    })
}

// Traces

/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_load(path: *const c_char, out: *mut *mut SnTrace) -> SnStatus {
    guard(|| {
        let sets = load_trace(PathBuf::from(read_str(path, "path")?))?;
        write_out(out, boxed(SnTrace(sets)), "out")
    })
}

/// # Safety
/// `trace` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_save(trace: *const SnTrace, path: *const c_char) -> SnStatus {
    guard(|| {
        let sets = &deref(trace, "trace")?.0;
        save_trace(PathBuf::from(read_str(path, "path")?), sets)?;
        Ok(())
    })
}

/// Synthetic trace for the configured scenario: one entry per trial and
/// subcarrier, first user count and path loss.
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_synthesize(cfg: *const SnConfig, out: *mut *mut SnTrace) -> SnStatus {
    guard(|| {
        let cfg = &deref(cfg, "config")?.0;
        cfg.validate()?;
        let sets = softnull::experiments::synthesize_trace(cfg)?;
        write_out(out, boxed(SnTrace(sets)), "out")
    })
}

/// # Safety
/// `trace` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_free(trace: *mut SnTrace) {
    free(trace)
}

/// # Safety
/// `trace` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_len(trace: *const SnTrace, out: *mut usize) -> SnStatus {
    guard(|| write_out(out, deref(trace, "trace")?.0.len(), "out"))
}

fn entry(trace: &SnTrace, index: usize) -> Result<&ChannelSet, Failure> {
    trace
        .0
        .get(index)
        .ok_or_else(|| invalid(format!("entry {index} out of range for {} entries", trace.0.len())))
}

/// # Safety
/// `trace` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_dims(trace: *const SnTrace, index: usize, out: *mut SnTraceDims) -> SnStatus {
    guard(|| {
        let set = entry(deref(trace, "trace")?, index)?;
        let dims = SnTraceDims {
            m_rx: set.m_rx(),
            m_tx: set.m_tx(),
            k_up: set.k_up(),
            k_down: set.k_down(),
            subcarrier_index: set.subcarrier_index,
            has_user_to_user: set.h_usr.is_some(),
        };
        write_out(out, dims, "out")
    })
}

/// Copies one link of entry `index` into a new matrix. An absent
/// user-to-user link comes back as zeros.
///
/// # Safety
/// `trace` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_trace_matrix(
    trace: *const SnTrace,
    index: usize,
    link: SnLink,
    out: *mut *mut SnMatrix,
) -> SnStatus {
    guard(|| {
        let set = entry(deref(trace, "trace")?, index)?;
        let m = match link {
            SnLink::SelfInterference => set.h_self.clone(),
            SnLink::Uplink => set.h_up.clone(),
            SnLink::Downlink => set.h_down.clone(),
            SnLink::UserToUser => set.h_usr_or_zero(),
        };
        write_out(out, boxed(SnMatrix(m)), "out")
    })
}

// Experiments

/// Configuration with every key at its default.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_config_default(out: *mut *mut SnConfig) -> SnStatus {
    guard(|| write_out(out, boxed(SnConfig(ExperimentConfig::default())), "out"))
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `toml` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_config_from_toml(toml: *const c_char, out: *mut *mut SnConfig) -> SnStatus {
    guard(|| {
        let cfg = ExperimentConfig::from_toml_str(read_str(toml, "toml")?)?;
        cfg.validate()?;
        write_out(out, boxed(SnConfig(cfg)), "out")
    })
}

/// # Safety
/// `cfg` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn sn_config_free(cfg: *mut SnConfig) {
    free(cfg)
}

/// Overrides the master seed.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sn_config_set_seed(cfg: *mut SnConfig, seed: u64) -> SnStatus {
    guard(|| {
        cfg.as_mut().ok_or_else(|| null("config"))?.0.seed = seed;
        Ok(())
    })
}

/// Runs an experiment and returns its table as CSV or JSON text in `out`,
/// to be released with [`sn_string_free`].
///
/// # Safety
/// `cfg` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_run_experiment(
    cfg: *const SnConfig,
    experiment: SnExperiment,
    format: SnFormat,
    out: *mut *mut c_char,
) -> SnStatus {
    guard(|| {
        let cfg = &deref(cfg, "config")?.0;
        cfg.validate()?;
        let kind = match experiment {
            SnExperiment::Suppression => Experiment::Suppression,
            SnExperiment::Partitions => Experiment::Partitions,
            SnExperiment::Rates => Experiment::Rates,
            SnExperiment::Users => Experiment::Users,
        };
        let format = match format {
            SnFormat::Csv => OutputFormat::Csv,
            SnFormat::Json => OutputFormat::Json,
        };
        let text = kind.run(cfg)?.render(format);
        let text = CString::new(text).map_err(|_| invalid("output contains a NUL byte"))?;
        write_out(out, text.into_raw(), "out")
    })
}
