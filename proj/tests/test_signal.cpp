#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "core/signal.hpp"
#include "core/superres.hpp"
#include "core/transform.hpp"
#include "doctest.h"

using namespace mmtw;

namespace {

// independent oracle: instantaneous frequency from successive phase
// differences, in Hz
std::vector<double> phase_derivative(const IqBuffer& x) {
    std::vector<double> f(x.samples.size() - 1);
    for (std::size_t n = 0; n + 1 < x.samples.size(); ++n)
        f[n] = x.sample_rate * std::arg(x.samples[n + 1] * std::conj(x.samples[n])) /
               (2.0 * std::numbers::pi);
    return f;
}

}  // namespace

TEST_CASE("gen_tone unit-magnitude complex exponential") {
    ToneSpec spec{1.0, 2, 0.0, 8};
    const IqBuffer x = gen_tone(spec, 8, 1.0);
    CHECK(x.samples.size() == 8);
    CHECK(x.samples[0].real() == doctest::Approx(1.0));
    CHECK(x.samples[0].imag() == doctest::Approx(0.0));
    for (const cplx& s : x.samples) CHECK(std::abs(s) == doctest::Approx(1.0));
}

TEST_CASE("gen_tone normalized frequency 0.703") {
    ToneSpec spec{1.0, 70, 0.3, 100};
    const IqBuffer x = gen_tone(spec, 1000, 1.0);
    // the phase oracle reports the alias in (-0.5, 0.5]; compare on the circle
    const std::vector<double> f = phase_derivative(x);
    for (double v : f) CHECK(freq_distance(v, 0.703, 1.0) < 1e-9);
}

TEST_CASE("gen_tone matches per-sample evaluation of the exponential") {
    ToneSpec spec{cplx(2.0, 0.0), 3, 1.0 / 3.0, 16};
    const IqBuffer x = gen_tone(spec, 16, 1.0);
    const double cycles = (3.0 + 1.0 / 3.0) / 16.0;
    const cplx expected = spec.amplitude * std::polar(1.0, 2.0 * std::numbers::pi * cycles * 5.0);
    CHECK(std::abs(x.samples[5] - expected) < 1e-12);
}

TEST_CASE("gen_tone rejects invalid specs") {
    CHECK_THROWS_AS(gen_tone(ToneSpec{1.0, 9, 0.0, 8}, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_tone(ToneSpec{1.0, 0, 1.0, 8}, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(gen_tone(ToneSpec{1.0, 0, 0.0, 1}, 8, 1.0), std::invalid_argument);
}

TEST_CASE("bin-centered tone has a single nonzero DFT bin") {
    for (int k0 : {0, 3, 7}) {
        ToneSpec spec{cplx(0.0, 2.5), k0, 0.0, 8};
        const IqBuffer x = gen_tone(spec, 8, 1.0);
        const SpectrumSlice s = dft(x.samples, 1.0, WindowSpec::rectangular(8));
        for (int k = 0; k < 8; ++k) {
            if (k == k0) continue;
            CHECK(std::abs(s.bins[static_cast<std::size_t>(k)]) < 1e-9 * 2.5 * 8);
        }
    }
}

TEST_CASE("gen_fsk single symbol is a pure tone at carrier - deviation") {
    FskSpec spec{0.1, 0.01, 1.0 / 64.0, {0}};
    const IqBuffer x = gen_fsk(spec, 128.0, 1.0);
    for (double f : phase_derivative(x)) CHECK(f == doctest::Approx(0.09).epsilon(1e-9));
}

TEST_CASE("gen_fsk is constant-envelope and phase-continuous") {
    FskSpec spec{0.2, 5e-3, 1.0 / 100.0, {0, 1, 1, 0, 1}};
    const IqBuffer x = gen_fsk(spec, 500.0, 1.0);
    for (const cplx& s : x.samples) CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-12));
    // phase continuity: no instantaneous frequency outside the two tones
    for (double f : phase_derivative(x)) {
        CHECK(f > 0.2 - 5e-3 - 1e-9);
        CHECK(f < 0.2 + 5e-3 + 1e-9);
    }
}

TEST_CASE("gen_fsk phase-derivative oracle recovers the symbol square wave") {
    const double rs = 1.0 / 200.0;
    FskSpec spec{0.0, 1e-3, rs, {0, 1, 0, 1}};
    const IqBuffer x = gen_fsk(spec, 800.0, 1.0);
    const std::vector<double> f = phase_derivative(x);
    for (std::size_t n = 0; n < f.size(); ++n) {
        const int sym = static_cast<int>(static_cast<double>(n) * rs) % 4;
        const double expect = (sym % 2) ? 1e-3 : -1e-3;
        // skip the sample straddling a symbol boundary
        if (static_cast<int>((n + 1) * rs) != static_cast<int>(n * rs)) continue;
        CHECK(f[n] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("gen_fsk modulation bandwidth 1e-4") {
    FskSpec spec{0.25, 5e-5, 1.0 / 2048.0, {0, 1}};
    const IqBuffer x = gen_fsk(spec, 4096.0, 1.0);
    const std::vector<double> f = phase_derivative(x);
    double lo = 1e9, hi = -1e9;
    for (double v : f) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi - lo == doctest::Approx(1e-4).epsilon(1e-6));
}

TEST_CASE("gen_doppler with zero deviation degenerates to a pure tone") {
    // zero deviation violates the scenario invariant; the limit is checked
    // with a vanishingly small one
    DopplerScenario s{0.1, 1e-3, 1e-15, 0.0};
    const IqBuffer x = gen_doppler(s, 1000.0, 1.0);
    for (double f : phase_derivative(x)) CHECK(f == doctest::Approx(0.1).epsilon(1e-9));
    CHECK_THROWS_AS(gen_doppler(DopplerScenario{0.1, 1e-3, 0.0, 0.0}, 10.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("gen_doppler phase derivative recovers the frequency law") {
    DopplerScenario s{0.0, 1e-3, 0.01, 0.0};
    const double fs = 1.0;
    const IqBuffer x = gen_doppler(s, 4000.0, fs);
    const std::vector<double> f = phase_derivative(x);
    double sse = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        const double t = (static_cast<double>(n) + 0.5) / fs;  // midpoint of the diff
        const double expect = 0.01 * std::sin(2.0 * std::numbers::pi * 1e-3 * t);
        sse += (f[n] - expect) * (f[n] - expect);
        if (n == 0) CHECK(std::abs(f[n]) < 1e-4);  // sine starts at phase 0
    }
    CHECK(std::sqrt(sse / static_cast<double>(f.size())) <= 1e-6 * fs);
}

TEST_CASE("gen_doppler doa=90 leads doa=0 by a quarter period") {
    const double rot = 1e-3;  // period 1000 samples
    const IqBuffer x0 = gen_doppler(DopplerScenario{0.0, rot, 0.01, 0.0}, 3000.0, 1.0);
    const IqBuffer x90 = gen_doppler(DopplerScenario{0.0, rot, 0.01, 90.0}, 3000.0, 1.0);
    const std::vector<double> f0 = phase_derivative(x0);
    const std::vector<double> f90 = phase_derivative(x90);
    for (std::size_t n = 0; n + 250 < f0.size(); ++n)
        CHECK(f90[n] == doctest::Approx(f0[n + 250]).epsilon(1e-6));
}

TEST_CASE("add_noise sigma=0 is the identity") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 1, 0.0, 8}, 64, 1.0);
    const IqBuffer y = add_noise(x, 0.0, 42);
    CHECK(y.samples == x.samples);
}

TEST_CASE("add_noise sample variance matches sigma^2") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 1, 0.0, 8}, 1000000, 1.0);
    const IqBuffer y = add_noise(x, 1.0, 7);
    double power = 0.0;
    for (std::size_t n = 0; n < x.samples.size(); ++n)
        power += std::norm(y.samples[n] - x.samples[n]);
    power /= static_cast<double>(x.samples.size());
    CHECK(power == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("add_noise is deterministic per seed") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 1, 0.0, 8}, 1024, 1.0);
    const IqBuffer a = add_noise(x, 0.5, 99);
    const IqBuffer b = add_noise(x, 0.5, 99);
    const IqBuffer c = add_noise(x, 0.5, 100);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != c.samples);
}

TEST_CASE("add_noise SNR accounting within 0.2 dB") {
    const double sigma = 0.1;  // SNR 20 dB for A=1
    const IqBuffer x = gen_tone(ToneSpec{1.0, 5, 0.25, 64}, 200000, 1.0);
    const IqBuffer y = add_noise(x, sigma, 3);
    double noise_power = 0.0;
    for (std::size_t n = 0; n < x.samples.size(); ++n)
        noise_power += std::norm(y.samples[n] - x.samples[n]);
    noise_power /= static_cast<double>(x.samples.size());
    const double snr_db = 10.0 * std::log10(1.0 / noise_power);
    CHECK(snr_db == doctest::Approx(20.0).epsilon(0.01));
    CHECK(std::abs(snr_db - 20.0) < 0.2);
}

TEST_CASE("upsample rate bookkeeping") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 10, 0.0, 100}, 1000, 2.0);
    const IqBuffer y = upsample(x, 8);
    CHECK(y.sample_rate == doctest::Approx(16.0));
    CHECK(y.samples.size() == 8000);
    // tone was at 0.1 of the old rate = 0.2 Hz; it must stay at 0.2 Hz
    for (std::size_t n = 1000; n + 1001 < y.samples.size(); ++n) {
        const double f = y.sample_rate *
                         std::arg(y.samples[n + 1] * std::conj(y.samples[n])) /
                         (2.0 * std::numbers::pi);
        // kernel image rejection is ~-60 dB, which bounds the phase ripple
        CHECK(std::abs(f - 0.2) < 1e-4);
    }
}

TEST_CASE("upsample preserves DC") {
    IqBuffer x;
    x.sample_rate = 1.0;
    x.samples.assign(256, cplx(1.0, 0.0));
    const IqBuffer y = upsample(x, 2);
    for (std::size_t n = 64; n + 64 < y.samples.size(); ++n)
        CHECK(std::abs(y.samples[n] - cplx(1.0, 0.0)) < 1e-6);
}

TEST_CASE("upsample matches analytic resampling within -60 dB") {
    ToneSpec spec{1.0, 10, 0.0, 100};  // 0.1 of the input rate, mid-band
    const IqBuffer x = gen_tone(spec, 2000, 1.0);
    const IqBuffer y = upsample(x, 8);
    const std::size_t guard = 8 * 8 * 8;  // well past the kernel transient
    for (std::size_t n = guard; n + guard < y.samples.size(); ++n) {
        const double turns = 0.1 * static_cast<double>(n) / 8.0;
        const cplx ref = std::polar(1.0, 2.0 * std::numbers::pi * (turns - std::floor(turns)));
        CHECK(std::abs(y.samples[n] - ref) < 1e-3);
    }
}

TEST_CASE("upsample passband attenuation below 0.5 dB in the central 80%") {
    for (double f : {0.05, 0.15, 0.25, 0.35, 0.395}) {
        ToneSpec spec{1.0, static_cast<int>(f * 1000), 0.0, 1000};
        const IqBuffer x = gen_tone(spec, 1000, 1.0);
        const IqBuffer y = upsample(x, 4);
        double power = 0.0;
        std::size_t count = 0;
        for (std::size_t n = 300; n + 300 < y.samples.size(); ++n, ++count)
            power += std::norm(y.samples[n]);
        const double db = 10.0 * std::log10(power / static_cast<double>(count));
        CHECK(std::abs(db) < 0.5);
    }
}

TEST_CASE("upsample rejects factor below 2") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 1, 0.0, 8}, 64, 1.0);
    CHECK_THROWS_AS(upsample(x, 1), std::invalid_argument);
    CHECK_THROWS_AS(upsample(x, 0), std::invalid_argument);
}
