#include "mmtw.h"

#include <cstring>
#include <string>

#include "core/bounds.hpp"
#include "core/pipeline.hpp"
#include "core/signal.hpp"

namespace {

thread_local std::string g_last_error;

struct CBuffer {
    mmtw::IqBuffer data;
};

struct CAnalysis {
    mmtw::PipelineOutput out;
};

mmtw_status fail(mmtw_status code, const char* msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
mmtw_status guarded(Fn&& fn) {
    try {
        fn();
        return MMTW_OK;
    } catch (const std::invalid_argument& e) {
        return fail(MMTW_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(MMTW_ERR_RUNTIME, e.what());
    }
}

mmtw::OffsetMode to_mode(int m) {
    return m == MMTW_OFFSET_EXACTGRID ? mmtw::OffsetMode::ExactGrid : mmtw::OffsetMode::BinRatio;
}

mmtw_track_entry to_c(const mmtw::TrackEntry& e) {
    return {e.time_s, e.coarse_freq_hz, e.fine_freq_hz, e.bin_centered ? 1 : 0,
            e.null_depth_ratio};
}

}  // namespace

extern "C" {

struct mmtw_buffer : CBuffer {};
struct mmtw_analysis : CAnalysis {};

const char* mmtw_version(void) { return "mmtw 1.0.0"; }

const char* mmtw_last_error(void) { return g_last_error.c_str(); }

mmtw_status mmtw_buffer_from_interleaved(const float* iq, size_t n, double sample_rate,
                                         mmtw_buffer** out) {
    if (!iq || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        auto* buf = new mmtw_buffer();
        buf->data.sample_rate = sample_rate;
        buf->data.samples.resize(n);
        for (size_t i = 0; i < n; ++i)
            buf->data.samples[i] = mmtw::cplx(iq[2 * i], iq[2 * i + 1]);
        mmtw::validate(buf->data);
        *out = buf;
    });
}

mmtw_status mmtw_buffer_len(const mmtw_buffer* buf, size_t* out) {
    if (!buf || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    *out = buf->data.samples.size();
    return MMTW_OK;
}

mmtw_status mmtw_buffer_sample_rate(const mmtw_buffer* buf, double* out) {
    if (!buf || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    *out = buf->data.sample_rate;
    return MMTW_OK;
}

mmtw_status mmtw_buffer_copy_interleaved(const mmtw_buffer* buf, float* dst) {
    if (!buf || !dst) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    for (size_t i = 0; i < buf->data.samples.size(); ++i) {
        dst[2 * i] = static_cast<float>(buf->data.samples[i].real());
        dst[2 * i + 1] = static_cast<float>(buf->data.samples[i].imag());
    }
    return MMTW_OK;
}

void mmtw_buffer_free(mmtw_buffer* buf) { delete buf; }

mmtw_status mmtw_gen_tone(double amp_re, double amp_im, int coarse_bin, double bin_offset,
                          int block_size, size_t total_samples, double sample_rate,
                          mmtw_buffer** out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::ToneSpec spec;
        spec.amplitude = mmtw::cplx(amp_re, amp_im);
        spec.coarse_bin = coarse_bin;
        spec.bin_offset = bin_offset;
        spec.block_size = block_size;
        auto* buf = new mmtw_buffer();
        buf->data = mmtw::gen_tone(spec, total_samples, sample_rate);
        *out = buf;
    });
}

mmtw_status mmtw_gen_fsk(double carrier_freq, double deviation, double symbol_rate,
                         const uint8_t* symbols, size_t n_symbols, double duration_s,
                         double sample_rate, mmtw_buffer** out) {
    if (!out || !symbols) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::FskSpec spec;
        spec.carrier_freq = carrier_freq;
        spec.deviation = deviation;
        spec.symbol_rate = symbol_rate;
        spec.symbols.assign(symbols, symbols + n_symbols);
        auto* buf = new mmtw_buffer();
        buf->data = mmtw::gen_fsk(spec, duration_s, sample_rate);
        *out = buf;
    });
}

mmtw_status mmtw_gen_doppler(double carrier_freq, double rotation_rate, double peak_deviation,
                             double true_doa_deg, double duration_s, double sample_rate,
                             mmtw_buffer** out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::DopplerScenario s;
        s.carrier_freq = carrier_freq;
        s.rotation_rate = rotation_rate;
        s.peak_deviation = peak_deviation;
        s.true_doa_deg = true_doa_deg;
        auto* buf = new mmtw_buffer();
        buf->data = mmtw::gen_doppler(s, duration_s, sample_rate);
        *out = buf;
    });
}

mmtw_status mmtw_add_noise(const mmtw_buffer* in, double sigma, uint64_t seed,
                           mmtw_buffer** out) {
    if (!in || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        auto* buf = new mmtw_buffer();
        buf->data = mmtw::add_noise(in->data, sigma, seed);
        *out = buf;
    });
}

mmtw_status mmtw_upsample(const mmtw_buffer* in, int factor, mmtw_buffer** out) {
    if (!in || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        auto* buf = new mmtw_buffer();
        buf->data = mmtw::upsample(in->data, factor);
        *out = buf;
    });
}

mmtw_status mmtw_analyze(const mmtw_buffer* in, const mmtw_config* cfg, mmtw_analysis** out) {
    if (!in || !cfg || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::PipelineConfig c;
        c.filter.center_freq = cfg->center_freq;
        c.filter.passband_halfwidth = cfg->passband_halfwidth;
        c.filter.transition_width = cfg->transition_width;
        c.filter.decimation = cfg->decimation;
        c.filter.stopband_atten_db = cfg->stopband_atten_db;
        c.block_size = cfg->block_size;
        c.offset_mode = to_mode(cfg->offset_mode);
        c.upsample_factor = cfg->upsample_factor;
        auto* a = new mmtw_analysis();
        a->out = mmtw::run_pipeline(in->data, c);
        *out = a;
    });
}

mmtw_status mmtw_analysis_output_rate(const mmtw_analysis* a, double* out) {
    if (!a || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    *out = a->out.output_sample_rate;
    return MMTW_OK;
}

mmtw_status mmtw_analysis_track_len(const mmtw_analysis* a, size_t* out) {
    if (!a || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    *out = a->out.track.entries.size();
    return MMTW_OK;
}

mmtw_status mmtw_analysis_track_entry(const mmtw_analysis* a, size_t index,
                                      mmtw_track_entry* out) {
    if (!a || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    if (index >= a->out.track.entries.size())
        return fail(MMTW_ERR_INVALID_ARGUMENT, "track index out of range");
    *out = to_c(a->out.track.entries[index]);
    return MMTW_OK;
}

mmtw_status mmtw_analysis_baseline_len(const mmtw_analysis* a, size_t* out) {
    if (!a || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    *out = a->out.baseline_track.entries.size();
    return MMTW_OK;
}

mmtw_status mmtw_analysis_baseline_entry(const mmtw_analysis* a, size_t index,
                                         mmtw_track_entry* out) {
    if (!a || !out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    if (index >= a->out.baseline_track.entries.size())
        return fail(MMTW_ERR_INVALID_ARGUMENT, "baseline index out of range");
    *out = to_c(a->out.baseline_track.entries[index]);
    return MMTW_OK;
}

static const mmtw::SpectrogramMatrix* pick_sgram(const mmtw_analysis* a, int which) {
    if (which == 0) return &a->out.rect_sgram;
    if (which == 1) return &a->out.mmtw_sgram;
    return nullptr;
}

mmtw_status mmtw_analysis_sgram_size(const mmtw_analysis* a, int which, size_t* rows,
                                     size_t* cols) {
    if (!a || !rows || !cols) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    const auto* sg = pick_sgram(a, which);
    if (!sg) return fail(MMTW_ERR_INVALID_ARGUMENT, "which must be 0 or 1");
    *rows = static_cast<size_t>(sg->block_size());
    *cols = sg->columns.size();
    return MMTW_OK;
}

mmtw_status mmtw_analysis_sgram_db(const mmtw_analysis* a, int which, double floor_db,
                                   double* dst) {
    if (!a || !dst) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    const auto* sg = pick_sgram(a, which);
    if (!sg) return fail(MMTW_ERR_INVALID_ARGUMENT, "which must be 0 or 1");
    return guarded([&] {
        const size_t rows = static_cast<size_t>(sg->block_size());
        const size_t cols = sg->columns.size();
        for (size_t c = 0; c < cols; ++c) {
            const std::vector<double> db = mmtw::magnitude_db(sg->columns[c], floor_db);
            for (size_t r = 0; r < rows; ++r) dst[r * cols + c] = db[r];
        }
    });
}

void mmtw_analysis_free(mmtw_analysis* a) { delete a; }

mmtw_status mmtw_demod_fsk(const mmtw_analysis* a, double symbol_rate, uint8_t* bits,
                           size_t capacity, size_t* n_bits, double* level_separation_hz) {
    if (!a || !bits || !n_bits) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        double sep = 0.0;
        const std::vector<int> decoded = mmtw::demod_fsk(a->out.track, symbol_rate, &sep);
        if (decoded.size() > capacity)
            throw std::invalid_argument("demod_fsk: bits buffer too small");
        for (size_t i = 0; i < decoded.size(); ++i) bits[i] = static_cast<uint8_t>(decoded[i]);
        *n_bits = decoded.size();
        if (level_separation_hz) *level_separation_hz = sep;
    });
}

mmtw_status mmtw_estimate_doa(const mmtw_analysis* a, double rotation_rate, double* doa_deg,
                              double* residual_rms_hz) {
    if (!a || !doa_deg) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        double res = 0.0;
        *doa_deg = mmtw::estimate_doa(a->out.track, rotation_rate, &res);
        if (residual_rms_hz) *residual_rms_hz = res;
    });
}

mmtw_status mmtw_crb_unfiltered(double amplitude, double sigma, double sample_rate,
                                int block_size, double* out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::CrbParams p{amplitude, sigma, sample_rate, block_size, 1.0};
        *out = mmtw::crb_unfiltered(p);
    });
}

mmtw_status mmtw_processing_gain(double sample_rate, double bin_width, double* out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] { *out = mmtw::processing_gain(sample_rate, bin_width); });
}

mmtw_status mmtw_crb_filtered(double amplitude, double sigma, double sample_rate, int block_size,
                              double gain_constant, double* out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::CrbParams p{amplitude, sigma, sample_rate, block_size, gain_constant};
        *out = mmtw::crb_filtered(p);
    });
}

mmtw_status mmtw_quantization_floor(double sample_rate, int block_size, int offset_mode,
                                    double* out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        *out = mmtw::quantization_floor(sample_rate, block_size, to_mode(offset_mode));
    });
}

mmtw_status mmtw_monte_carlo(double true_freq, double amplitude, double sigma, double sample_rate,
                             int block_size, double gain_constant, int trials, uint64_t seed,
                             int offset_mode, mmtw_mc_report* out) {
    if (!out) return fail(MMTW_ERR_NULL_POINTER, "null pointer argument");
    return guarded([&] {
        mmtw::CrbParams p{amplitude, sigma, sample_rate, block_size, gain_constant};
        const mmtw::MonteCarloReport r =
            mmtw::monte_carlo(true_freq, p, trials, seed, to_mode(offset_mode));
        out->trials = r.trials;
        out->true_freq_hz = r.true_freq_hz;
        out->rmse_hz = r.rmse_hz;
        out->variance_hz2 = r.variance_hz2;
        out->crb_unfiltered_hz2 = r.crb_unfiltered_hz2;
        out->crb_filtered_hz2 = r.crb_filtered_hz2;
        out->quantization_floor_hz2 = r.quantization_floor_hz2;
    });
}

}  // extern "C"
