#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "core/signal.hpp"
#include "core/superres.hpp"
#include "doctest.h"

using namespace mmtw;

namespace {

struct SlicePair {
    SpectrumSlice rect;
    SpectrumSlice mm;
};

SlicePair analyze_tone(double freq_norm, int n, double sigma = 0.0, std::uint64_t seed = 0) {
    const double bins = freq_norm * n;
    ToneSpec spec;
    spec.coarse_bin = static_cast<int>(std::floor(bins));
    spec.bin_offset = bins - std::floor(bins);
    spec.block_size = n;
    IqBuffer x = gen_tone(spec, static_cast<std::size_t>(n), 1.0);
    if (sigma > 0.0) x = add_noise(x, sigma, seed);
    return {dft(x.samples, 1.0, WindowSpec::rectangular(n)), mmtw_spectrum(x.samples, 1.0)};
}

}  // namespace

TEST_CASE("find_peak basics") {
    SpectrumSlice s;
    s.sample_rate = 1.0;
    s.window = WindowSpec::rectangular(4);
    s.bins = {cplx{}, cplx{}, cplx(8.0, 0.0), cplx{}};
    CHECK(find_peak(s) == 2);
    s.bins = {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx{}, cplx{}};  // tie: smallest index
    CHECK(find_peak(s) == 0);
    s.bins = {cplx{}, cplx{}, cplx{}, cplx{}};
    CHECK_THROWS_AS(find_peak(s), std::invalid_argument);
}

TEST_CASE("find_peak lands on the rounded bin of an off-grid tone") {
    const int n = 50;
    const auto [rect, mm] = analyze_tone(0.78, n);
    CHECK(find_peak(rect) == 39);  // round(0.78 * 50)
}

TEST_CASE("find_peak under noise: correct bin in at least 99% of trials") {
    const int n = 512;
    int correct = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        const auto [rect, mm] = analyze_tone(0.703, n, 0.1, 4000 + static_cast<std::uint64_t>(t));
        if (find_peak(rect) == static_cast<int>(std::lround(0.703 * n))) ++correct;
    }
    CHECK(correct >= 198);
}

TEST_CASE("find_null on the exact lattice: N=16, k0=3, r=5") {
    const auto [rect, mm] = analyze_tone((3.0 + 5.0 / 15.0) / 16.0, 16);
    const int peak = find_peak(rect);
    CHECK(peak == 3);
    const NullReport rep = find_null(mm, peak, OffsetMode::ExactGrid);
    CHECK(rep.null_bin == 14);
    CHECK_FALSE(rep.bin_centered);
    CHECK(rep.offset_alpha == doctest::Approx(5.0 / 15.0).epsilon(1e-12));
    CHECK(std::abs(mm.bins[14]) < 1e-9);
}

TEST_CASE("find_null flags bin-centered tones") {
    const auto [rect, mm] = analyze_tone(2.0 / 8.0, 8);
    const NullReport rep = find_null(mm, 2);
    CHECK(rep.bin_centered);
    CHECK(rep.offset_alpha == 0.0);
    CHECK(rep.null_bin == rep.peak_bin);
    CHECK(rep.null_depth_ratio == doctest::Approx(1.0));
}

TEST_CASE("find_null for the 0.703 worked example: peak 70, null 40") {
    const auto [rect, mm] = analyze_tone(0.703, 100);
    const int peak = find_peak(rect);
    CHECK(peak == 70);
    const NullReport rep = find_null(mm, peak);
    CHECK(rep.null_bin == 40);
}

TEST_CASE("find_null rejects non-MMTW slices") {
    const auto [rect, mm] = analyze_tone(0.3, 16);
    CHECK_THROWS_AS(find_null(rect, 5), std::invalid_argument);
}

TEST_CASE("bin_offset") {
    CHECK(bin_offset(70, 40, 100, OffsetMode::BinRatio) == doctest::Approx(0.30));
    CHECK(bin_offset(5, 5, 100, OffsetMode::BinRatio) == 0.0);
    CHECK(bin_offset(5, 5, 100, OffsetMode::ExactGrid) == 0.0);
    CHECK(bin_offset(8, 3, 16, OffsetMode::ExactGrid) == doctest::Approx(5.0 / 15.0));
    // wraparound
    CHECK(bin_offset(2, 90, 100, OffsetMode::BinRatio) == doctest::Approx(0.12));
}

TEST_CASE("worked example: offset 0.3 bins = 0.003 at bin width 0.01") {
    const auto [rect, mm] = analyze_tone(0.703, 100);
    const auto [fine, rep] = super_resolve(rect, mm, OffsetMode::BinRatio);
    CHECK(rep.offset_alpha == doctest::Approx(0.30));
    CHECK(rep.offset_alpha * rect.bin_width() == doctest::Approx(0.003));
    CHECK(fine == doctest::Approx(0.703).epsilon(5e-5));
}

TEST_CASE("super_resolve composition is a pure addition") {
    CHECK(compose_fine_freq(0.78, 0.002273) == 0.782273);
}

TEST_CASE("super_resolve of a bin-centered tone returns the bin center exactly") {
    const auto [rect, mm] = analyze_tone(5.0 / 64.0, 64);
    const auto [fine, rep] = super_resolve(rect, mm);
    CHECK(rep.bin_centered);
    CHECK(fine == 5.0 / 64.0);
}

TEST_CASE("super_resolve rejects mismatched slices") {
    const auto [rect, mm] = analyze_tone(0.3, 16);
    auto [rect2, mm2] = analyze_tone(0.3, 32);
    CHECK_THROWS_AS(super_resolve(rect, mm2), std::invalid_argument);
    CHECK_THROWS_AS(super_resolve(mm, mm), std::invalid_argument);
}

TEST_CASE("super_resolve is invariant under complex scaling of the block") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 11, 0.73, 64}, 64, 1.0);
    const auto base_rect = dft(x.samples, 1.0, WindowSpec::rectangular(64));
    const auto base_mm = mmtw_spectrum(x.samples, 1.0);
    const auto [base_fine, base_rep] = super_resolve(base_rect, base_mm);
    for (double mag : {1e-3, 0.1, 10.0, 1e3}) {
        std::vector<cplx> scaled(x.samples);
        const cplx c = std::polar(mag, 1.1);
        for (cplx& s : scaled) s *= c;
        const auto [fine, rep] = super_resolve(dft(scaled, 1.0, WindowSpec::rectangular(64)),
                                               mmtw_spectrum(scaled, 1.0));
        CHECK(fine == base_fine);
        CHECK(rep.null_bin == base_rep.null_bin);
    }
}

TEST_CASE("integer-bin modulation shifts peak and null, alpha unchanged") {
    const int n = 64, m = 9;
    const IqBuffer x = gen_tone(ToneSpec{1.0, 11, 0.29, n}, n, 1.0);
    std::vector<cplx> shifted(x.samples);
    for (int i = 0; i < n; ++i)
        shifted[static_cast<std::size_t>(i)] *=
            std::polar(1.0, 2.0 * std::numbers::pi * m * i / static_cast<double>(n));
    const auto [f0, r0] =
        super_resolve(dft(x.samples, 1.0, WindowSpec::rectangular(n)), mmtw_spectrum(x.samples, 1.0));
    const auto [f1, r1] =
        super_resolve(dft(shifted, 1.0, WindowSpec::rectangular(n)), mmtw_spectrum(shifted, 1.0));
    CHECK(r1.peak_bin == (r0.peak_bin + m) % n);
    CHECK(r1.null_bin == (r0.null_bin + m) % n);
    CHECK(r1.offset_alpha == doctest::Approx(r0.offset_alpha).epsilon(1e-12));
}

TEST_CASE("noiseless quantization bound in ExactGrid mode") {
    const int n = 64;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uf(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double f = uf(rng);
        const auto [rect, mm] = analyze_tone(f, n);
        const auto [fine, rep] = super_resolve(rect, mm, OffsetMode::ExactGrid);
        CHECK(freq_distance(fine, f, 1.0) <= 1.0 / (n * (n - 1.0)) + 1e-9);
    }
}

TEST_CASE("worst-case error scales like 1/N^2") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uf(0.05, 0.95);
    std::vector<double> logn, loge;
    for (int n : {32, 64, 128, 256, 512}) {
        double worst = 0.0;
        for (int i = 0; i < 60; ++i) {
            const double f = uf(rng);
            const auto [rect, mm] = analyze_tone(f, n);
            const auto [fine, rep] = super_resolve(rect, mm, OffsetMode::ExactGrid);
            worst = std::max(worst, freq_distance(fine, f, 1.0));
        }
        logn.push_back(std::log(static_cast<double>(n)));
        loge.push_back(std::log(worst));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(logn.size());
    for (std::size_t i = 0; i < logn.size(); ++i) {
        sx += logn[i];
        sy += loge[i];
        sxx += logn[i] * logn[i];
        sxy += logn[i] * loge[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.15));
}

TEST_CASE("fine_scale_spectrum peaks at the true frequency") {
    for (double f : {0.701, 0.702, 0.703, 0.704}) {
        const auto [rect, mm] = analyze_tone(f, 100);
        const FineScaleSpectrum fss = fine_scale_spectrum(mm, find_peak(rect));
        std::size_t argmax = 0;
        for (std::size_t i = 1; i < fss.values.size(); ++i)
            if (fss.values[i] > fss.values[argmax]) argmax = i;
        CHECK(std::abs(fss.fine_freqs_hz[argmax] - f) <= 1e-4 + 1e-12);
    }
}

TEST_CASE("fine_scale_spectrum hits the clamp at an exact null") {
    const auto [rect, mm] = analyze_tone((3.0 + 5.0 / 15.0) / 16.0, 16);
    const FineScaleSpectrum fss = fine_scale_spectrum(mm, find_peak(rect));
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < fss.values.size(); ++i)
        if (fss.values[i] > fss.values[argmax]) argmax = i;
    CHECK(argmax == 5);
    double peak_mag = 0.0;
    for (const cplx& b : mm.bins) peak_mag = std::max(peak_mag, std::abs(b));
    CHECK(fss.values[5] == doctest::Approx(1.0 / (1e-12 * peak_mag)));
}

TEST_CASE("fine_scale_spectrum of a bin-centered tone is flat") {
    const auto [rect, mm] = analyze_tone(2.0 / 8.0, 8);
    const FineScaleSpectrum fss = fine_scale_spectrum(mm, 2);
    for (std::size_t i = 1; i < fss.values.size(); ++i)
        CHECK(fss.values[i] == doctest::Approx(fss.values[1]).epsilon(1e-9));
}

TEST_CASE("track of a constant tone is constant") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 70, 0.3, 100}, 100 * 9, 1.0);
    const SpectrogramMatrix rect = spectrogram(x, WindowSpec::rectangular(100));
    const SpectrogramMatrix mm = spectrogram(x, WindowSpec::mmtw(100));
    const FrequencyTrack track = track_from_spectrograms(rect, mm);
    CHECK(track.entries.size() == 17);  // (900 - 100)/50 + 1 half-overlapped blocks
    for (std::size_t i = 0; i < track.entries.size(); ++i) {
        CHECK(track.entries[i].fine_freq_hz == doctest::Approx(0.703).epsilon(5e-5));
        if (i > 0)
            CHECK(track.entries[i].time_s - track.entries[i - 1].time_s ==
                  doctest::Approx(50.0));
    }
}

TEST_CASE("track of noiseless FSK is a two-level square wave") {
    FskSpec spec{0.25, 5e-4, 1.0 / 1024.0, {0, 1, 0, 1, 1, 0}};
    const IqBuffer x = gen_fsk(spec, 6144.0, 1.0);
    const SpectrogramMatrix rect = spectrogram(x, WindowSpec::rectangular(256));
    const SpectrogramMatrix mm = spectrogram(x, WindowSpec::mmtw(256));
    const FrequencyTrack track = track_from_spectrograms(rect, mm);
    int lo = 0, hi = 0;
    for (const TrackEntry& e : track.entries) {
        if (std::abs(e.fine_freq_hz - (0.25 - 5e-4)) < 1e-4) ++lo;
        if (std::abs(e.fine_freq_hz - (0.25 + 5e-4)) < 1e-4) ++hi;
    }
    // all but the transition-straddling blocks sit on one of the two levels
    CHECK(lo + hi >= static_cast<int>(track.entries.size()) - 6);
    CHECK(lo > 0);
    CHECK(hi > 0);
}

TEST_CASE("noise-only blocks are flagged by a shallow null, not invented nulls") {
    IqBuffer noise;
    noise.sample_rate = 1.0;
    noise.samples.assign(64 * 9, cplx{});
    noise = add_noise(noise, 1.0, 77);
    const FrequencyTrack noisy = track_from_spectrograms(
        spectrogram(noise, WindowSpec::rectangular(64)), spectrogram(noise, WindowSpec::mmtw(64)));

    const IqBuffer tone = gen_tone(ToneSpec{1.0, 11, 0.4, 64}, 64 * 9, 1.0);
    const FrequencyTrack clean = track_from_spectrograms(
        spectrogram(tone, WindowSpec::rectangular(64)), spectrogram(tone, WindowSpec::mmtw(64)));

    double noise_ratio = 0.0, clean_ratio = 0.0;
    for (const TrackEntry& e : noisy.entries) noise_ratio += e.null_depth_ratio;
    for (const TrackEntry& e : clean.entries) clean_ratio += e.null_depth_ratio;
    noise_ratio /= static_cast<double>(noisy.entries.size());
    clean_ratio /= static_cast<double>(clean.entries.size());
    CHECK(clean_ratio < 0.05);      // real tone: deep null
    CHECK(noise_ratio > 5.0 * clean_ratio);
}

TEST_CASE("instantaneous-frequency baseline on a pure tone") {
    const IqBuffer x = gen_tone(ToneSpec{1.0, 10, 0.25, 64}, 640, 1.0);
    const FrequencyTrack track = instantaneous_frequency_baseline(x, 64);
    const double expect = 10.25 / 64.0;
    for (const TrackEntry& e : track.entries)
        CHECK(std::abs(e.fine_freq_hz - expect) <= 1e-9);
}

TEST_CASE("instantaneous-frequency baseline recovers the FSK square wave") {
    FskSpec spec{0.0, 1e-3, 1.0 / 512.0, {1, 0, 1, 0}};
    const IqBuffer x = gen_fsk(spec, 2048.0, 1.0);
    const FrequencyTrack track = instantaneous_frequency_baseline(x, 128);
    for (const TrackEntry& e : track.entries) {
        // away from symbol boundaries the block average sits on +-deviation
        const double frac = std::fmod(e.time_s, 512.0) / 512.0;
        if (frac < 0.2 || frac > 0.8) continue;
        CHECK(std::abs(std::abs(e.fine_freq_hz) - 1e-3) < 1e-9);
    }
}

TEST_CASE("MMTW track and baseline agree on noiseless narrowband FM") {
    DopplerScenario s{0.25, 1.0 / 16384.0, 3e-4, 45.0};
    const IqBuffer x = gen_doppler(s, 49152.0, 1.0);
    const int n = 512;
    const FrequencyTrack mm_track = track_from_spectrograms(
        spectrogram(x, WindowSpec::rectangular(n)), spectrogram(x, WindowSpec::mmtw(n)));
    const FrequencyTrack base = instantaneous_frequency_baseline(x, n);
    REQUIRE(mm_track.entries.size() == base.entries.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < mm_track.entries.size(); ++i) {
        const double d =
            freq_distance(mm_track.entries[i].fine_freq_hz, base.entries[i].fine_freq_hz, 1.0);
        sse += d * d;
    }
    const double rms = std::sqrt(sse / static_cast<double>(mm_track.entries.size()));
    CHECK(rms <= 2.0 / (n * static_cast<double>(n)));  // 2 fine-grid steps
}
