#include "core/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/signal.hpp"

namespace mmtw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxTaps = 8192;

double bessel_i0(double x) {
    // power series; converges quickly for the beta range Kaiser designs use
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    return v[mid];
}

}  // namespace

void validate(const FilterSpec& spec, double sample_rate) {
    if (spec.decimation < 1)
        throw std::invalid_argument("FilterSpec: decimation must be >= 1");
    if (!(spec.passband_halfwidth > 0.0) || !(spec.transition_width > 0.0))
        throw std::invalid_argument("FilterSpec: passband_halfwidth and transition_width must be positive");
    if (!(spec.stopband_atten_db >= 40.0))
        throw std::invalid_argument("FilterSpec: stopband_atten_db must be >= 40");
    if ((spec.passband_halfwidth + spec.transition_width) * spec.decimation >= sample_rate / 2.0)
        throw std::invalid_argument("FilterSpec: passband + transition exceeds the decimated Nyquist");
}

std::vector<double> design_lowpass(double cutoff_hz, double transition_hz, double atten_db,
                                   double sample_rate) {
    if (!(cutoff_hz > 0.0) || cutoff_hz + transition_hz >= sample_rate / 2.0)
        throw std::invalid_argument("design_lowpass: cutoff + transition must fit below Nyquist");
    if (!(transition_hz > 0.0))
        throw std::invalid_argument("design_lowpass: transition width must be positive");

    const double a = std::max(atten_db, 21.0);
    const double beta = (a > 50.0) ? 0.1102 * (a - 8.7)
                                   : 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
    const double delta_w = kTwoPi * transition_hz / sample_rate;
    int taps = static_cast<int>(std::ceil((a - 8.0) / (2.285 * delta_w))) + 1;
    if (taps % 2 == 0) ++taps;
    if (taps > kMaxTaps)
        throw std::invalid_argument("design_lowpass: transition too narrow for the tap budget");

    // cutoff placed mid-transition so the passband edge meets the ripple spec
    const double fc = (cutoff_hz + transition_hz / 2.0) / sample_rate;
    const int half = (taps - 1) / 2;
    std::vector<double> h(static_cast<std::size_t>(taps));
    const double i0b = bessel_i0(beta);
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        const double t = static_cast<double>(i - half);
        const double sinc = (t == 0.0) ? 2.0 * fc
                                       : std::sin(kTwoPi * fc * t) / (std::numbers::pi * t);
        const double r = t / half;
        const double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        h[static_cast<std::size_t>(i)] = sinc * win;
        sum += h[static_cast<std::size_t>(i)];
    }
    for (double& v : h) v /= sum;
    return h;
}

IqBuffer tune_filter_decimate(const IqBuffer& x, const FilterSpec& spec) {
    validate(x);
    validate(spec, x.sample_rate);
    const double fs = x.sample_rate;

    // tune to baseband
    std::vector<cplx> mixed(x.samples.size());
    const double cycles = spec.center_freq / fs;
    for (std::size_t n = 0; n < mixed.size(); ++n) {
        const double turns = cycles * static_cast<double>(n);
        mixed[n] = x.samples[n] * std::polar(1.0, -kTwoPi * (turns - std::floor(turns)));
    }

    const std::vector<double> h =
        design_lowpass(spec.passband_halfwidth, spec.transition_width, spec.stopband_atten_db, fs);
    const std::size_t half = (h.size() - 1) / 2;
    if (mixed.size() <= 2 * half)
        throw std::invalid_argument("tune_filter_decimate: signal shorter than the filter transient");

    // convolve, dropping the group delay on both ends so output stays aligned
    // with input time
    const std::size_t out_full = mixed.size() - 2 * half;
    IqBuffer out;
    out.sample_rate = fs / spec.decimation;
    out.samples.reserve(out_full / static_cast<std::size_t>(spec.decimation) + 1);
    for (std::size_t n = 0; n < out_full; n += static_cast<std::size_t>(spec.decimation)) {
        cplx acc{};
        const std::size_t base = n;  // filtered[n + half] uses mixed[n .. n + 2*half]
        for (std::size_t k = 0; k < h.size(); ++k)
            acc += mixed[base + k] * h[h.size() - 1 - k];
        out.samples.push_back(acc);
    }
    return out;
}

PipelineOutput run_pipeline(const IqBuffer& x, const PipelineConfig& cfg) {
    if (cfg.block_size < 8)
        throw std::invalid_argument("run_pipeline: block_size must be >= 8");
    if (cfg.upsample_factor < 1)
        throw std::invalid_argument("run_pipeline: upsample_factor must be >= 1");

    IqBuffer y;
    try {
        y = tune_filter_decimate(x, cfg.filter);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("pipeline stage tune_filter_decimate: ") + e.what());
    }
    if (cfg.upsample_factor >= 2) {
        try {
            y = upsample(y, cfg.upsample_factor);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("pipeline stage upsample: ") + e.what());
        }
    }
    if (y.samples.size() < static_cast<std::size_t>(cfg.block_size))
        throw std::runtime_error("pipeline stage spectrogram: filtered signal shorter than one block");

    PipelineOutput out;
    out.output_sample_rate = y.sample_rate;
    try {
        out.rect_sgram = spectrogram(y, WindowSpec::rectangular(cfg.block_size));
        out.mmtw_sgram = spectrogram(y, WindowSpec::mmtw(cfg.block_size));
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("pipeline stage spectrogram: ") + e.what());
    }

    out.track = track_from_spectrograms(out.rect_sgram, out.mmtw_sgram, cfg.offset_mode);
    out.baseline_track = instantaneous_frequency_baseline(y, cfg.block_size);

    // the transient trim in tune_filter_decimate delays the filtered stream by
    // the filter group delay; shift the timestamps back onto input time
    const std::vector<double> h = design_lowpass(
        cfg.filter.passband_halfwidth, cfg.filter.transition_width,
        cfg.filter.stopband_atten_db, x.sample_rate);
    const double group_delay_s = static_cast<double>((h.size() - 1) / 2) / x.sample_rate;
    for (TrackEntry& e : out.track.entries) e.time_s += group_delay_s;
    for (TrackEntry& e : out.baseline_track.entries) e.time_s += group_delay_s;

    // re-reference to absolute Hz: fold baseband estimates to (-fs/2, fs/2]
    // and add the tuned center back
    const double fs_y = y.sample_rate;
    for (TrackEntry& e : out.track.entries) {
        e.fine_freq_hz = cfg.filter.center_freq + std::remainder(e.fine_freq_hz, fs_y);
        e.coarse_freq_hz = cfg.filter.center_freq + std::remainder(e.coarse_freq_hz, fs_y);
    }
    for (TrackEntry& e : out.baseline_track.entries) {
        e.fine_freq_hz += cfg.filter.center_freq;
        e.coarse_freq_hz += cfg.filter.center_freq;
    }
    return out;
}

std::vector<int> demod_fsk(const FrequencyTrack& track, double symbol_rate,
                           double* level_separation) {
    if (!(symbol_rate > 0.0))
        throw std::invalid_argument("demod_fsk: symbol_rate must be positive");
    if (track.entries.size() < 4)
        throw std::invalid_argument("demod_fsk: track too short");

    const double t0 = track.entries.front().time_s;
    const double t1 = track.entries.back().time_s;
    const int nsym = static_cast<int>(std::floor(t1 * symbol_rate)) -
                     static_cast<int>(std::floor(t0 * symbol_rate)) + 1;
    const int first_sym = static_cast<int>(std::floor(t0 * symbol_rate));
    if (nsym < 2)
        throw std::invalid_argument("demod_fsk: track spans fewer than 2 symbols");

    std::vector<std::vector<double>> per_symbol(static_cast<std::size_t>(nsym));
    for (const TrackEntry& e : track.entries) {
        const int s = static_cast<int>(std::floor(e.time_s * symbol_rate)) - first_sym;
        if (s >= 0 && s < nsym) per_symbol[static_cast<std::size_t>(s)].push_back(e.fine_freq_hz);
    }
    for (const auto& v : per_symbol)
        if (v.size() < 2)
            throw std::invalid_argument("demod_fsk: track too sparse for the symbol rate");

    std::vector<double> medians(per_symbol.size());
    for (std::size_t i = 0; i < per_symbol.size(); ++i) medians[i] = median_of(per_symbol[i]);

    // split the symbol medians at the midpoint of their range (a global-median
    // split breaks on unbalanced or exactly-quantized two-level data), then
    // take the decision threshold as the midpoint of the two level medians
    const auto [mn, mx] = std::minmax_element(medians.begin(), medians.end());
    const double split = (*mn + *mx) / 2.0;
    std::vector<double> lo, hi;
    for (double m : medians) (m < split ? lo : hi).push_back(m);
    const double level_lo = lo.empty() ? split : median_of(lo);
    const double level_hi = hi.empty() ? split : median_of(hi);
    if (level_separation) *level_separation = level_hi - level_lo;
    const double threshold = (level_lo + level_hi) / 2.0;

    std::vector<int> bits(medians.size());
    for (std::size_t i = 0; i < medians.size(); ++i) bits[i] = medians[i] > threshold ? 1 : 0;
    return bits;
}

double estimate_doa(const FrequencyTrack& track, double rotation_rate, double* residual_rms) {
    if (!(rotation_rate > 0.0))
        throw std::invalid_argument("estimate_doa: rotation_rate must be positive");
    if (track.entries.size() < 8)
        throw std::invalid_argument("estimate_doa: track too short");
    const double span = track.entries.back().time_s - track.entries.front().time_s;
    if (span * rotation_rate < 2.0)
        throw std::invalid_argument("estimate_doa: track spans fewer than 2 rotations");

    // normal equations for f(t) ~ a*sin(w t) + b*cos(w t) + c
    const double w = kTwoPi * rotation_rate;
    double m[3][3] = {};
    double rhs[3] = {};
    for (const TrackEntry& e : track.entries) {
        const double basis[3] = {std::sin(w * e.time_s), std::cos(w * e.time_s), 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
            rhs[i] += basis[i] * e.fine_freq_hz;
        }
    }
    // Cramer's rule
    const auto det3 = [](const double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double det = det3(m);
    if (std::abs(det) < 1e-12)
        throw std::runtime_error("estimate_doa: degenerate fit (rotation rate inconsistent with track)");
    double coeff[3];
    for (int col = 0; col < 3; ++col) {
        double mc[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) mc[i][j] = (j == col) ? rhs[i] : m[i][j];
        coeff[col] = det3(mc) / det;
    }

    if (residual_rms) {
        double acc = 0.0;
        for (const TrackEntry& e : track.entries) {
            const double fit = coeff[0] * std::sin(w * e.time_s) +
                               coeff[1] * std::cos(w * e.time_s) + coeff[2];
            acc += (e.fine_freq_hz - fit) * (e.fine_freq_hz - fit);
        }
        *residual_rms = std::sqrt(acc / static_cast<double>(track.entries.size()));
    }

    double deg = std::atan2(coeff[1], coeff[0]) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    return deg;
}

}  // namespace mmtw
