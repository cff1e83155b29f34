#include "core/bounds.hpp"

#include <cmath>
#include <numbers>

#include "core/signal.hpp"

namespace mmtw {

void validate(const CrbParams& p) {
    if (!(p.amplitude > 0.0))
        throw std::invalid_argument("CrbParams: amplitude must be positive");
    if (!(p.noise_sigma >= 0.0))
        throw std::invalid_argument("CrbParams: noise_sigma must be >= 0");
    if (!(p.sample_rate > 0.0))
        throw std::invalid_argument("CrbParams: sample_rate must be positive");
    if (p.block_size < 2)
        throw std::invalid_argument("CrbParams: block_size must be >= 2");
    if (!(p.gain_constant > 0.0) || p.gain_constant > 2.0)
        throw std::invalid_argument("CrbParams: gain_constant must be in (0, 2]");
}

double crb_unfiltered(const CrbParams& p) {
    validate(p);
    if (p.noise_sigma == 0.0) return 0.0;
    const double n = p.block_size;
    const double denom = 4.0 * std::numbers::pi * std::numbers::pi * p.amplitude * p.amplitude *
                         n * (n + 1.0) * (2.0 * n + 1.0);
    return 3.0 * p.noise_sigma * p.noise_sigma * p.sample_rate * p.sample_rate / denom;
}

double processing_gain(double sample_rate, double bin_width) {
    if (!(bin_width > 0.0) || bin_width > sample_rate)
        throw std::invalid_argument("processing_gain: bin_width must be in (0, sample_rate]");
    return std::sqrt(sample_rate / bin_width);
}

double crb_filtered(const CrbParams& p) {
    validate(p);
    return crb_unfiltered(p) / (p.gain_constant * static_cast<double>(p.block_size));
}

double quantization_floor(double sample_rate, int block_size, OffsetMode mode) {
    if (block_size < 2)
        throw std::invalid_argument("quantization_floor: block_size must be >= 2");
    const double n = block_size;
    const double step = (mode == OffsetMode::ExactGrid) ? sample_rate / (n * (n - 1.0))
                                                        : sample_rate / (n * n);
    return step * step / 12.0;
}

MonteCarloReport monte_carlo(double true_freq, const CrbParams& p, int trials, std::uint64_t seed,
                             OffsetMode mode) {
    validate(p);
    if (trials < 100)
        throw std::invalid_argument("monte_carlo: at least 100 trials required");
    const double fs = p.sample_rate;
    if (!(true_freq >= 0.0) || true_freq >= fs)
        throw std::invalid_argument("monte_carlo: true_freq must be in [0, sample_rate)");

    const int n = p.block_size;
    const double bins = true_freq / fs * n;
    ToneSpec tone;
    tone.amplitude = p.amplitude;
    tone.coarse_bin = static_cast<int>(std::floor(bins));
    tone.bin_offset = bins - std::floor(bins);
    tone.block_size = n;
    const IqBuffer clean = gen_tone(tone, static_cast<std::size_t>(n), fs);

    double sse = 0.0;
    for (int t = 0; t < trials; ++t) {
        const IqBuffer noisy = add_noise(clean, p.noise_sigma, seed + static_cast<std::uint64_t>(t));
        const SpectrumSlice rect =
            dft(noisy.samples, fs, WindowSpec::rectangular(n));
        const SpectrumSlice mm = mmtw_spectrum(noisy.samples, fs);
        const auto [fine, rep] = super_resolve(rect, mm, mode);
        const double err = freq_distance(fine, true_freq, fs);
        sse += err * err;
    }

    MonteCarloReport rep;
    rep.trials = trials;
    rep.true_freq_hz = true_freq;
    rep.variance_hz2 = sse / static_cast<double>(trials);
    rep.rmse_hz = std::sqrt(rep.variance_hz2);
    rep.crb_unfiltered_hz2 = crb_unfiltered(p);
    rep.crb_filtered_hz2 = crb_filtered(p);
    rep.quantization_floor_hz2 = quantization_floor(fs, n, mode);
    return rep;
}

}  // namespace mmtw
