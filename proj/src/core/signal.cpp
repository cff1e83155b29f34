#include "core/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mmtw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void validate(const IqBuffer& x) {
    if (x.samples.empty())
        throw std::invalid_argument("IqBuffer: samples must be non-empty");
    if (!(x.sample_rate > 0.0))
        throw std::invalid_argument("IqBuffer: sample_rate must be positive");
    for (const cplx& s : x.samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument("IqBuffer: samples must be finite");
}

void validate(const ToneSpec& spec) {
    if (spec.block_size < 2)
        throw std::invalid_argument("ToneSpec: block_size must be >= 2");
    if (spec.coarse_bin < 0 || spec.coarse_bin >= spec.block_size)
        throw std::invalid_argument("ToneSpec: coarse_bin must be in [0, block_size)");
    if (!(spec.bin_offset >= 0.0) || spec.bin_offset >= 1.0)
        throw std::invalid_argument("ToneSpec: bin_offset must be in [0, 1)");
    if (!std::isfinite(spec.amplitude.real()) || !std::isfinite(spec.amplitude.imag()))
        throw std::invalid_argument("ToneSpec: amplitude must be finite");
}

void validate(const FskSpec& spec, double sample_rate) {
    if (!(spec.symbol_rate > 0.0))
        throw std::invalid_argument("FskSpec: symbol_rate must be positive");
    if (!(spec.deviation > 0.0))
        throw std::invalid_argument("FskSpec: deviation must be positive");
    const double half = sample_rate / 2.0;
    if (spec.carrier_freq - spec.deviation <= -half || spec.carrier_freq + spec.deviation >= half)
        throw std::invalid_argument("FskSpec: carrier +/- deviation must lie inside (-fs/2, fs/2)");
    if (spec.symbols.empty())
        throw std::invalid_argument("FskSpec: symbols must be non-empty");
}

void validate(const DopplerScenario& s) {
    if (!(s.peak_deviation > 0.0))
        throw std::invalid_argument("DopplerScenario: peak_deviation must be positive");
    if (!(s.rotation_rate > 0.0))
        throw std::invalid_argument("DopplerScenario: rotation_rate must be positive");
    if (!(s.true_doa_deg >= 0.0) || s.true_doa_deg >= 360.0)
        throw std::invalid_argument("DopplerScenario: true_doa_deg must be in [0, 360)");
}

IqBuffer gen_tone(const ToneSpec& spec, std::size_t total_samples, double sample_rate) {
    validate(spec);
    if (total_samples < 1)
        throw std::invalid_argument("gen_tone: total_samples must be >= 1");
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("gen_tone: sample_rate must be positive");

    const double cycles_per_sample = (spec.coarse_bin + spec.bin_offset) / spec.block_size;
    IqBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(total_samples);
    for (std::size_t n = 0; n < total_samples; ++n) {
        // keep the phase argument small so long buffers do not lose precision
        const double turns = cycles_per_sample * static_cast<double>(n);
        const double phase = kTwoPi * (turns - std::floor(turns));
        out.samples[n] = spec.amplitude * std::polar(1.0, phase);
    }
    return out;
}

IqBuffer gen_fsk(const FskSpec& spec, double duration_s, double sample_rate) {
    if (!(duration_s > 0.0))
        throw std::invalid_argument("gen_fsk: duration must be positive");
    validate(spec, sample_rate);
    if (duration_s * spec.symbol_rate < 1.0)
        throw std::invalid_argument("gen_fsk: duration must span at least one symbol");

    const std::size_t total = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    IqBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(total);
    double phase = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
        const std::size_t sym =
            static_cast<std::size_t>(static_cast<double>(n) * spec.symbol_rate / sample_rate);
        const int bit = spec.symbols[sym % spec.symbols.size()];
        const double freq = spec.carrier_freq + (bit ? spec.deviation : -spec.deviation);
        out.samples[n] = std::polar(1.0, phase);
        phase += kTwoPi * freq / sample_rate;
        phase = std::remainder(phase, kTwoPi);
    }
    return out;
}

IqBuffer gen_doppler(const DopplerScenario& scenario, double duration_s, double sample_rate) {
    if (!(duration_s > 0.0))
        throw std::invalid_argument("gen_doppler: duration must be positive");
    validate(scenario);

    const double doa_rad = scenario.true_doa_deg * std::numbers::pi / 180.0;
    const std::size_t total = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
    IqBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(total);
    // closed-form phase integral of carrier + dev*sin(2*pi*R*t + doa)
    const double depth = scenario.peak_deviation / scenario.rotation_rate;
    for (std::size_t n = 0; n < total; ++n) {
        const double t = static_cast<double>(n) / sample_rate;
        const double carrier_turns = scenario.carrier_freq * t;
        const double turns = carrier_turns - std::floor(carrier_turns);
        const double mod = depth / kTwoPi *
                           (std::cos(doa_rad) - std::cos(kTwoPi * scenario.rotation_rate * t + doa_rad));
        out.samples[n] = std::polar(1.0, kTwoPi * (turns + mod));
    }
    return out;
}

IqBuffer add_noise(const IqBuffer& x, double sigma, std::uint64_t seed) {
    validate(x);
    if (!(sigma >= 0.0))
        throw std::invalid_argument("add_noise: sigma must be >= 0");
    if (sigma == 0.0) return x;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma / std::numbers::sqrt2);
    IqBuffer out = x;
    for (cplx& s : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        s += cplx(re, im);
    }
    return out;
}

IqBuffer upsample(const IqBuffer& x, int factor) {
    validate(x);
    if (factor < 2)
        throw std::invalid_argument("upsample: factor must be >= 2");

    // Interpolation kernel: sinc with 8 lobes per side at the input rate,
    // Blackman-tapered, then each polyphase branch normalized to unit DC gain.
    const int lobes = 8;
    const int half = lobes * factor;
    const int len = 2 * half + 1;
    std::vector<double> taps(len);
    for (int i = 0; i < len; ++i) {
        const double t = static_cast<double>(i - half) / factor;
        const double sinc = (t == 0.0) ? 1.0 : std::sin(std::numbers::pi * t) / (std::numbers::pi * t);
        const double u = static_cast<double>(i) / (len - 1);
        const double win = 0.42 - 0.5 * std::cos(kTwoPi * u) + 0.08 * std::cos(2.0 * kTwoPi * u);
        taps[i] = sinc * win;
    }
    for (int p = 0; p < factor; ++p) {
        double sum = 0.0;
        for (int i = p; i < len; i += factor) sum += taps[i];
        for (int i = p; i < len; i += factor) taps[i] /= sum;
    }

    const std::size_t n_in = x.samples.size();
    IqBuffer out;
    out.sample_rate = x.sample_rate * factor;
    out.samples.assign(n_in * static_cast<std::size_t>(factor), cplx{});
    for (std::size_t n = 0; n < out.samples.size(); ++n) {
        cplx acc{};
        // input samples m with |n - m*factor| <= half contribute
        const long long lo = (static_cast<long long>(n) - half + factor - 1) / factor;
        const long long hi = (static_cast<long long>(n) + half) / factor;
        for (long long m = std::max(0LL, lo); m <= std::min<long long>(n_in - 1, hi); ++m) {
            const long long k = static_cast<long long>(n) - m * factor + half;
            acc += x.samples[static_cast<std::size_t>(m)] * taps[static_cast<std::size_t>(k)];
        }
        out.samples[n] = acc;
    }
    return out;
}

}  // namespace mmtw
