#ifndef SOFTNULL_H
#define SOFTNULL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum SnStatus {
  SN_STATUS_OK = 0,
  SN_STATUS_NULL_POINTER = 1,
  SN_STATUS_INVALID_ARGUMENT = 2,
  SN_STATUS_DIMENSION = 3,
  SN_STATUS_RANK = 4,
  SN_STATUS_NUMERICAL = 5,
  SN_STATUS_CAPABILITY = 6,
  SN_STATUS_CONFIG = 7,
  SN_STATUS_TRACE = 8,
  SN_STATUS_IO = 9,
  SN_STATUS_PANIC = 10,
} SnStatus;

typedef enum SnNoiseMode {
  SN_NOISE_MODE_DOMINANT = 0,
  SN_NOISE_MODE_SUM = 1,
} SnNoiseMode;

typedef enum SnPartitionKind {
  SN_PARTITION_KIND_EAST_WEST = 0,
  SN_PARTITION_KIND_NORTH_SOUTH = 1,
  SN_PARTITION_KIND_NW_SE = 2,
  SN_PARTITION_KIND_INTERLEAVED = 3,
  SN_PARTITION_KIND_RANDOM = 4,
} SnPartitionKind;

/**
 * Which matrix of a trace entry to copy out.
 */
typedef enum SnLink {
  SN_LINK_SELF_INTERFERENCE = 0,
  SN_LINK_UPLINK = 1,
  SN_LINK_DOWNLINK = 2,
  SN_LINK_USER_TO_USER = 3,
} SnLink;

typedef enum SnExperiment {
  SN_EXPERIMENT_SUPPRESSION = 0,
  SN_EXPERIMENT_PARTITIONS = 1,
  SN_EXPERIMENT_RATES = 2,
  SN_EXPERIMENT_USERS = 3,
} SnExperiment;

typedef enum SnFormat {
  SN_FORMAT_CSV = 0,
  SN_FORMAT_JSON = 1,
} SnFormat;

/**
 * Right singular basis of a self-interference channel, reusable across
 * effective antenna counts.
 */
typedef struct SnBasis SnBasis;

typedef struct SnConfig SnConfig;

/**
 * Dense complex matrix.
 */
typedef struct SnMatrix SnMatrix;

/**
 * Ordered channel sets read from or destined for a trace file.
 */
typedef struct SnTrace SnTrace;

/**
 * Dimensions of one trace entry.
 */
typedef struct SnTraceDims {
  size_t m_rx;
  size_t m_tx;
  size_t k_up;
  size_t k_down;
  size_t subcarrier_index;
  bool has_user_to_user;
} SnTraceDims;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sn_version(void);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sn_string_free(char *s);

/**
 * Builds a `rows x cols` matrix from row-major real and imaginary parts.
 * `im` may be NULL for a real matrix.
 *
 * # Safety
 * `re` (and `im` when non-NULL) must point to `rows * cols` doubles.
 */
enum SnStatus sn_matrix_new(size_t rows,
                            size_t cols,
                            const double *re,
                            const double *im,
                            struct SnMatrix **out);

/**
 * Matrix with i.i.d. circularly symmetric complex Gaussian entries.
 *
 * # Safety
 * `out` must be writable.
 */
enum SnStatus sn_matrix_gaussian(size_t rows,
                                 size_t cols,
                                 double variance,
                                 uint64_t seed,
                                 struct SnMatrix **out);

/**
 * # Safety
 * `m` must come from this library and not have been freed. NULL is ignored.
 */
void sn_matrix_free(struct SnMatrix *m);

/**
 * # Safety
 * `m` must be a live matrix handle; `rows` and `cols` must be writable.
 */
enum SnStatus sn_matrix_shape(const struct SnMatrix *m, size_t *rows, size_t *cols);

/**
 * Copies the entries out in row-major order. `len` is the capacity of each
 * buffer and must be at least `rows * cols`; `im` may be NULL.
 *
 * # Safety
 * `re` (and `im` when non-NULL) must point to `len` writable doubles.
 */
enum SnStatus sn_matrix_copy(const struct SnMatrix *m, double *re, double *im, size_t len);

/**
 * Factors `h_self` once for later precoders.
 *
 * # Safety
 * `h_self` must be a live matrix handle; `out` must be writable.
 */
enum SnStatus sn_basis_new(const struct SnMatrix *h_self, struct SnBasis **out);

/**
 * # Safety
 * `b` must come from this library and not have been freed. NULL is ignored.
 */
void sn_basis_free(struct SnBasis *b);

/**
 * Self-interference precoder with `d_tx` effective antennas, plus its
 * residual power `‖H_self P‖_F²`. `residual` may be NULL.
 *
 * # Safety
 * `b` must be a live basis handle; `out` must be writable.
 */
enum SnStatus sn_basis_precoder(const struct SnBasis *b,
                                size_t d_tx,
                                struct SnMatrix **out,
                                double *residual);

/**
 * Mean suppression in dB for `d_tx` effective antennas; `+inf` for a
 * perfect null.
 *
 * # Safety
 * `h_self` must be a live matrix handle; `out_db` must be writable.
 */
enum SnStatus sn_suppression_db(const struct SnMatrix *h_self, size_t d_tx, double *out_db);

/**
 * `h_down · p_self`.
 *
 * # Safety
 * Both inputs must be live matrix handles; `out` must be writable.
 */
enum SnStatus sn_effective_channel(const struct SnMatrix *h_down,
                                   const struct SnMatrix *p_self,
                                   struct SnMatrix **out);

/**
 * Zero-forcing downlink precoder spending `total_power`.
 *
 * # Safety
 * `h_eff` must be a live matrix handle; `out` must be writable.
 */
enum SnStatus sn_zf_precoder(const struct SnMatrix *h_eff,
                             double total_power,
                             struct SnMatrix **out);

/**
 * Uplink decorrelator, the left pseudoinverse of `h_up`.
 *
 * # Safety
 * `h_up` must be a live matrix handle; `out` must be writable.
 */
enum SnStatus sn_decorrelator(const struct SnMatrix *h_up, struct SnMatrix **out);

/**
 * Receiver floor `received_power / 10^(d0_db/10)`, same unit as the input.
 *
 * # Safety
 * `out` must be writable.
 */
enum SnStatus sn_dynamic_noise_power(double received_power, double d0_db, double *out);

/**
 * Uplink SNR in dB from a dB-domain budget.
 *
 * # Safety
 * `out_db` must be writable.
 */
enum SnStatus sn_link_budget_snr(double tx_dbm,
                                 double path_loss_db,
                                 double suppression_db,
                                 double thermal_dbm,
                                 double d0_db,
                                 enum SnNoiseMode mode,
                                 double *out_db);

/**
 * Splits a `rows x cols` grid into `m_tx` transmit and `rows*cols - m_tx`
 * receive element indices (row-major), each written ascending. `seed` only
 * affects the random kind.
 *
 * # Safety
 * `tx` must hold `tx_len` and `rx` `rx_len` writable elements.
 */
enum SnStatus sn_partition(enum SnPartitionKind kind,
                           size_t rows,
                           size_t cols,
                           size_t m_tx,
                           uint64_t seed,
                           size_t *tx,
                           size_t tx_len,
                           size_t *rx,
                           size_t rx_len);

/**
 * # Safety
 * `path` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum SnStatus sn_trace_load(const char *path, struct SnTrace **out);

/**
 * # Safety
 * `trace` must be a live handle; `path` a NUL-terminated UTF-8 string.
 */
enum SnStatus sn_trace_save(const struct SnTrace *trace, const char *path);

/**
 * Synthetic trace for the configured scenario: one entry per trial and
 * subcarrier, first user count and path loss.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum SnStatus sn_trace_synthesize(const struct SnConfig *cfg, struct SnTrace **out);

/**
 * # Safety
 * `trace` must come from this library and not have been freed. NULL is ignored.
 */
void sn_trace_free(struct SnTrace *trace);

/**
 * # Safety
 * `trace` must be a live handle; `out` must be writable.
 */
enum SnStatus sn_trace_len(const struct SnTrace *trace, size_t *out);

/**
 * # Safety
 * `trace` must be a live handle; `out` must be writable.
 */
enum SnStatus sn_trace_dims(const struct SnTrace *trace, size_t index, struct SnTraceDims *out);

/**
 * Copies one link of entry `index` into a new matrix. An absent
 * user-to-user link comes back as zeros.
 *
 * # Safety
 * `trace` must be a live handle; `out` must be writable.
 */
enum SnStatus sn_trace_matrix(const struct SnTrace *trace,
                              size_t index,
                              enum SnLink link,
                              struct SnMatrix **out);

/**
 * Configuration with every key at its default.
 *
 * # Safety
 * `out` must be writable.
 */
enum SnStatus sn_config_default(struct SnConfig **out);

/**
 * Parses and validates a TOML configuration.
 *
 * # Safety
 * `toml` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum SnStatus sn_config_from_toml(const char *toml, struct SnConfig **out);

/**
 * # Safety
 * `cfg` must come from this library and not have been freed. NULL is ignored.
 */
void sn_config_free(struct SnConfig *cfg);

/**
 * Overrides the master seed.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
enum SnStatus sn_config_set_seed(struct SnConfig *cfg, uint64_t seed);

/**
 * Runs an experiment and returns its table as CSV or JSON text in `out`,
 * to be released with [`sn_string_free`].
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be writable.
 */
enum SnStatus sn_run_experiment(const struct SnConfig *cfg,
                                enum SnExperiment experiment,
                                enum SnFormat format,
                                char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOFTNULL_H */
