/* mmtw: mismatched-time-window spectrogram frequency super-resolution.
 *
 * C API over the C++ core. All functions return MMTW_OK on success; on
 * failure they return an error code and leave a message retrievable with
 * mmtw_last_error() (thread-local). Opaque handles are freed with their
 * matching *_free function; freeing NULL is a no-op.
 */
#ifndef MMTW_H
#define MMTW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    MMTW_OK = 0,
    MMTW_ERR_INVALID_ARGUMENT = 1,
    MMTW_ERR_RUNTIME = 2,
    MMTW_ERR_NULL_POINTER = 3
} mmtw_status;

typedef enum {
    MMTW_OFFSET_EQ3 = 0,       /* alpha = r/N       */
    MMTW_OFFSET_EXACTGRID = 1  /* alpha = r/(N-1)   */
} mmtw_offset_mode;

typedef struct mmtw_buffer mmtw_buffer;     /* complex baseband signal */
typedef struct mmtw_analysis mmtw_analysis; /* pipeline output bundle  */

const char* mmtw_version(void);
const char* mmtw_last_error(void);

/* ---- signal buffers ---------------------------------------------------- */

/* iq holds n interleaved (I, Q) float pairs. */
mmtw_status mmtw_buffer_from_interleaved(const float* iq, size_t n, double sample_rate,
                                         mmtw_buffer** out);
mmtw_status mmtw_buffer_len(const mmtw_buffer* buf, size_t* out);
mmtw_status mmtw_buffer_sample_rate(const mmtw_buffer* buf, double* out);
/* dst must hold 2*len floats. */
mmtw_status mmtw_buffer_copy_interleaved(const mmtw_buffer* buf, float* dst);
void mmtw_buffer_free(mmtw_buffer* buf);

/* ---- synthetic signal generators --------------------------------------- */

mmtw_status mmtw_gen_tone(double amp_re, double amp_im, int coarse_bin, double bin_offset,
                          int block_size, size_t total_samples, double sample_rate,
                          mmtw_buffer** out);
/* symbols: array of 0/1 bytes, cycled if the duration outruns them. */
mmtw_status mmtw_gen_fsk(double carrier_freq, double deviation, double symbol_rate,
                         const uint8_t* symbols, size_t n_symbols, double duration_s,
                         double sample_rate, mmtw_buffer** out);
mmtw_status mmtw_gen_doppler(double carrier_freq, double rotation_rate, double peak_deviation,
                             double true_doa_deg, double duration_s, double sample_rate,
                             mmtw_buffer** out);
/* sigma is the total complex noise standard deviation (sigma^2/2 per quadrature). */
mmtw_status mmtw_add_noise(const mmtw_buffer* in, double sigma, uint64_t seed, mmtw_buffer** out);
mmtw_status mmtw_upsample(const mmtw_buffer* in, int factor, mmtw_buffer** out);

/* ---- analysis pipeline -------------------------------------------------- */

typedef struct {
    double center_freq;        /* Hz, tuned to baseband before filtering */
    double passband_halfwidth; /* Hz */
    double transition_width;   /* Hz */
    int decimation;            /* >= 1 */
    double stopband_atten_db;  /* >= 40 */
    int block_size;            /* N >= 8 */
    int offset_mode;           /* mmtw_offset_mode */
    int upsample_factor;       /* 1 = none */
} mmtw_config;

typedef struct {
    double time_s;
    double coarse_freq_hz;
    double fine_freq_hz;
    int bin_centered;
    double null_depth_ratio;
} mmtw_track_entry;

mmtw_status mmtw_analyze(const mmtw_buffer* in, const mmtw_config* cfg, mmtw_analysis** out);
mmtw_status mmtw_analysis_output_rate(const mmtw_analysis* a, double* out);
mmtw_status mmtw_analysis_track_len(const mmtw_analysis* a, size_t* out);
mmtw_status mmtw_analysis_track_entry(const mmtw_analysis* a, size_t index, mmtw_track_entry* out);
mmtw_status mmtw_analysis_baseline_len(const mmtw_analysis* a, size_t* out);
mmtw_status mmtw_analysis_baseline_entry(const mmtw_analysis* a, size_t index,
                                         mmtw_track_entry* out);
/* which: 0 = rectangular spectrogram, 1 = MMTW spectrogram. */
mmtw_status mmtw_analysis_sgram_size(const mmtw_analysis* a, int which, size_t* rows,
                                     size_t* cols);
/* dst must hold rows*cols doubles; row-major, row = bin, column = block. */
mmtw_status mmtw_analysis_sgram_db(const mmtw_analysis* a, int which, double floor_db,
                                   double* dst);
void mmtw_analysis_free(mmtw_analysis* a);

/* ---- demodulation / direction finding ----------------------------------- */

/* bits must hold capacity entries; *n_bits receives the symbol count. */
mmtw_status mmtw_demod_fsk(const mmtw_analysis* a, double symbol_rate, uint8_t* bits,
                           size_t capacity, size_t* n_bits, double* level_separation_hz);
mmtw_status mmtw_estimate_doa(const mmtw_analysis* a, double rotation_rate, double* doa_deg,
                              double* residual_rms_hz);

/* ---- Cramer-Rao bounds --------------------------------------------------- */

mmtw_status mmtw_crb_unfiltered(double amplitude, double sigma, double sample_rate,
                                int block_size, double* out);
mmtw_status mmtw_processing_gain(double sample_rate, double bin_width, double* out);
mmtw_status mmtw_crb_filtered(double amplitude, double sigma, double sample_rate, int block_size,
                              double gain_constant, double* out);
mmtw_status mmtw_quantization_floor(double sample_rate, int block_size, int offset_mode,
                                    double* out);

typedef struct {
    int trials;
    double true_freq_hz;
    double rmse_hz;
    double variance_hz2;
    double crb_unfiltered_hz2;
    double crb_filtered_hz2;
    double quantization_floor_hz2;
} mmtw_mc_report;

mmtw_status mmtw_monte_carlo(double true_freq, double amplitude, double sigma, double sample_rate,
                             int block_size, double gain_constant, int trials, uint64_t seed,
                             int offset_mode, mmtw_mc_report* out);

#ifdef __cplusplus
}
#endif

#endif /* MMTW_H */
