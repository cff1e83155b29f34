#include "core/superres.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmtw {

int find_peak(const SpectrumSlice& slice) {
    if (slice.bins.empty())
        throw std::invalid_argument("find_peak: empty slice");
    int best = -1;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < slice.bins.size(); ++k) {
        const double mag = std::abs(slice.bins[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = static_cast<int>(k);
        }
    }
    if (best_mag == 0.0)
        throw std::invalid_argument("find_peak: all-zero slice");
    return best;
}

double bin_offset(int peak_bin, int null_bin, int block_size, OffsetMode mode) {
    if (block_size < 2)
        throw std::invalid_argument("bin_offset: block_size must be >= 2");
    if (peak_bin == null_bin) return 0.0;
    const int r = ((peak_bin - null_bin) % block_size + block_size) % block_size;
    const double denom = (mode == OffsetMode::ExactGrid) ? block_size - 1 : block_size;
    return static_cast<double>(r) / denom;
}

NullReport find_null(const SpectrumSlice& mmtw_slice, int peak_bin, OffsetMode mode,
                     double bin_centered_threshold) {
    if (!mmtw_slice.window.is_standard_mmtw())
        throw std::invalid_argument("find_null: slice was not produced with the standard MMTW window");
    const int n = mmtw_slice.block_size();
    if (peak_bin < 0 || peak_bin >= n)
        throw std::invalid_argument("find_null: peak_bin out of range");

    std::vector<double> off_peak;
    off_peak.reserve(static_cast<std::size_t>(n) - 1);
    int null_bin = -1;
    double min_mag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        if (k == peak_bin) continue;
        const double mag = std::abs(mmtw_slice.bins[static_cast<std::size_t>(k)]);
        off_peak.push_back(mag);
        if (mag < min_mag) {
            min_mag = mag;
            null_bin = k;
        }
    }
    std::nth_element(off_peak.begin(), off_peak.begin() + off_peak.size() / 2, off_peak.end());
    const double median = off_peak[off_peak.size() / 2];

    NullReport rep;
    rep.peak_bin = peak_bin;
    rep.mode = mode;
    rep.null_depth_ratio = (median > 0.0) ? min_mag / median : 1.0;
    rep.bin_centered = rep.null_depth_ratio > bin_centered_threshold;
    if (rep.bin_centered) {
        rep.null_bin = peak_bin;
        rep.coarse_bin = peak_bin;
        rep.offset_alpha = 0.0;
        return rep;
    }
    rep.null_bin = null_bin;
    const int m = ((peak_bin - null_bin) % n + n) % n;
    // When the tone sits in the upper half of a bin the spectral peak rounds
    // up to the next bin and the measured distance grows by one; reference the
    // offset to the bin below so the composed frequency stays within half a
    // bin of the truth.
    int r = m;
    rep.coarse_bin = peak_bin;
    if (2 * m > n) {
        r = m - 1;
        rep.coarse_bin = (peak_bin - 1 + n) % n;
    }
    const double denom = (mode == OffsetMode::ExactGrid) ? n - 1 : n;
    rep.offset_alpha = static_cast<double>(r) / denom;
    return rep;
}

double compose_fine_freq(double coarse_freq_hz, double offset_hz) {
    return coarse_freq_hz + offset_hz;
}

std::pair<double, NullReport> super_resolve(const SpectrumSlice& rect_slice,
                                            const SpectrumSlice& mmtw_slice, OffsetMode mode,
                                            double bin_centered_threshold) {
    if (rect_slice.block_size() != mmtw_slice.block_size() ||
        rect_slice.sample_rate != mmtw_slice.sample_rate ||
        rect_slice.block_index != mmtw_slice.block_index)
        throw std::invalid_argument("super_resolve: slices do not describe the same block");
    if (rect_slice.window.kind != WindowSpec::Kind::Rectangular)
        throw std::invalid_argument("super_resolve: first slice must be rectangular-windowed");

    const int peak = find_peak(rect_slice);
    const NullReport rep = find_null(mmtw_slice, peak, mode, bin_centered_threshold);
    const double bw = rect_slice.bin_width();
    const double fine = rep.bin_centered
                            ? static_cast<double>(peak) * bw
                            : compose_fine_freq(static_cast<double>(rep.coarse_bin) * bw,
                                                rep.offset_alpha * bw);
    return {fine, rep};
}

FineScaleSpectrum fine_scale_spectrum(const SpectrumSlice& mmtw_slice, int peak_bin) {
    if (!mmtw_slice.window.is_standard_mmtw())
        throw std::invalid_argument("fine_scale_spectrum: standard MMTW slice required");
    const int n = mmtw_slice.block_size();
    double peak_mag = 0.0;
    for (const cplx& b : mmtw_slice.bins) peak_mag = std::max(peak_mag, std::abs(b));
    const double clamp = 1e-12 * peak_mag;

    FineScaleSpectrum fs;
    fs.coarse_center_hz = static_cast<double>(peak_bin) * mmtw_slice.bin_width();
    fs.fine_freqs_hz.resize(static_cast<std::size_t>(n));
    fs.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int k = ((peak_bin - i) % n + n) % n;
        const double mag = std::abs(mmtw_slice.bins[static_cast<std::size_t>(k)]);
        fs.fine_freqs_hz[static_cast<std::size_t>(i)] =
            fs.coarse_center_hz + static_cast<double>(i) / n * mmtw_slice.bin_width();
        fs.values[static_cast<std::size_t>(i)] = 1.0 / std::max(mag, clamp);
    }
    return fs;
}

FrequencyTrack track_from_spectrograms(const SpectrogramMatrix& rect,
                                       const SpectrogramMatrix& mmtw, OffsetMode mode,
                                       double bin_centered_threshold) {
    if (rect.block_size() != mmtw.block_size() || rect.sample_rate != mmtw.sample_rate ||
        rect.columns.size() != mmtw.columns.size())
        throw std::invalid_argument("track_from_spectrograms: misaligned spectrograms");

    const double n = rect.block_size();
    const double fs = rect.sample_rate;
    FrequencyTrack track;
    track.entries.reserve(rect.columns.size());
    for (std::size_t c = 0; c < rect.columns.size(); ++c) {
        auto [fine, rep] = super_resolve(rect.columns[c], mmtw.columns[c], mode,
                                         bin_centered_threshold);
        TrackEntry e;
        e.time_s = (static_cast<double>(c) * n / 2.0 + n / 2.0) / fs;
        e.coarse_freq_hz = static_cast<double>(rep.peak_bin) * fs / n;
        e.fine_freq_hz = fine;
        e.bin_centered = rep.bin_centered;
        e.null_depth_ratio = rep.null_depth_ratio;
        track.entries.push_back(e);
    }
    return track;
}

FrequencyTrack instantaneous_frequency_baseline(const IqBuffer& x, int block_size) {
    validate(x);
    if (x.samples.size() < 2)
        throw std::invalid_argument("instantaneous_frequency_baseline: need at least 2 samples");
    if (block_size < 2)
        throw std::invalid_argument("instantaneous_frequency_baseline: block_size must be >= 2");

    const double fs = x.sample_rate;
    std::vector<double> inst(x.samples.size() - 1);
    for (std::size_t n = 0; n + 1 < x.samples.size(); ++n) {
        const double dphi = std::arg(x.samples[n + 1] * std::conj(x.samples[n]));
        inst[n] = fs * dphi / (2.0 * std::numbers::pi);
    }

    const std::size_t n = static_cast<std::size_t>(block_size);
    const std::size_t hop = n / 2;
    FrequencyTrack track;
    if (x.samples.size() < n) return track;
    const std::size_t cols = (x.samples.size() - n) / hop + 1;
    for (std::size_t c = 0; c < cols; ++c) {
        double acc = 0.0;
        std::size_t count = 0;
        for (std::size_t i = c * hop; i < c * hop + n && i < inst.size(); ++i) {
            acc += inst[i];
            ++count;
        }
        TrackEntry e;
        e.time_s = (static_cast<double>(c) * static_cast<double>(hop) +
                    static_cast<double>(n) / 2.0) / fs;
        e.fine_freq_hz = count ? acc / static_cast<double>(count) : 0.0;
        e.coarse_freq_hz = e.fine_freq_hz;
        e.null_depth_ratio = 0.0;
        track.entries.push_back(e);
    }
    return track;
}

double freq_distance(double a_hz, double b_hz, double sample_rate) {
    return std::abs(std::remainder(a_hz - b_hz, sample_rate));
}

}  // namespace mmtw
