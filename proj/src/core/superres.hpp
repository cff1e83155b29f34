#pragma once

#include "core/transform.hpp"

namespace mmtw {

/// How the peak-null separation maps to a bin offset.
///   BinRatio:  alpha = r/N, the proportionality of the worked examples.
///   ExactGrid: alpha = r/(N-1), the lattice on which the null is exactly zero.
enum class OffsetMode { BinRatio, ExactGrid };

/// Default null-depth threshold above which a slice is declared bin-centered
/// (the off-peak magnitude profile is flat, so there is no meaningful null).
inline constexpr double kBinCenteredThreshold = 0.8;

/// Peak/null geometry of one MMTW slice.
struct NullReport {
    int peak_bin = 0;               // argmax |rect bins|
    int null_bin = 0;               // argmin off-peak |mmtw bins|; == peak_bin when bin_centered
    int coarse_bin = 0;             // k0 the offset is referenced to (peak, or peak-1 mod N
                                    // when the tone sits in the upper half of its bin)
    double null_depth_ratio = 1.0;  // min off-peak magnitude / median off-peak magnitude
    double offset_alpha = 0.0;      // alpha in [0, 1)
    bool bin_centered = false;
    OffsetMode mode = OffsetMode::BinRatio;
};

struct TrackEntry {
    double time_s = 0.0;
    double coarse_freq_hz = 0.0;
    double fine_freq_hz = 0.0;
    bool bin_centered = false;
    double null_depth_ratio = 1.0;
};

/// Per-block super-resolved frequency estimates over time.
struct FrequencyTrack {
    std::vector<TrackEntry> entries;
};

/// Inverse-magnitude curve 1/|X(k) - x[0]| laid out on the fine frequency
/// axis spanning one bin width above the peak bin center.
struct FineScaleSpectrum {
    std::vector<double> fine_freqs_hz;  // index i = bin (peak - i) mod N
    std::vector<double> values;
    double coarse_center_hz = 0.0;
};

/// argmax_k |bins[k]|, smallest index on ties.
int find_peak(const SpectrumSlice& slice);

/// Locates the MMTW null and converts its circular distance from the peak to
/// a bin offset. Requires a standard-MMTW slice.
NullReport find_null(const SpectrumSlice& mmtw_slice, int peak_bin,
                     OffsetMode mode = OffsetMode::BinRatio,
                     double bin_centered_threshold = kBinCenteredThreshold);

/// alpha from the raw circular peak-null distance r = (peak - null) mod N.
/// No upper-half-of-bin correction; see find_null for the full estimator.
double bin_offset(int peak_bin, int null_bin, int block_size, OffsetMode mode);

/// Coarse bin center plus offset; pure addition of the two frequency terms.
double compose_fine_freq(double coarse_freq_hz, double offset_hz);

/// Full single-block estimate: peak from the rectangular slice, null from the
/// MMTW slice, fine frequency in [0, sample_rate).
std::pair<double, NullReport> super_resolve(const SpectrumSlice& rect_slice,
                                            const SpectrumSlice& mmtw_slice,
                                            OffsetMode mode = OffsetMode::BinRatio,
                                            double bin_centered_threshold = kBinCenteredThreshold);

FineScaleSpectrum fine_scale_spectrum(const SpectrumSlice& mmtw_slice, int peak_bin);

/// Applies super_resolve column by column; timestamps at block centers.
FrequencyTrack track_from_spectrograms(const SpectrogramMatrix& rect,
                                       const SpectrogramMatrix& mmtw,
                                       OffsetMode mode = OffsetMode::BinRatio,
                                       double bin_centered_threshold = kBinCenteredThreshold);

/// Textbook cross-check: differentiate the unwrapped phase, then block-average
/// onto the same time grid as track_from_spectrograms. Frequencies are signed,
/// in (-fs/2, fs/2].
FrequencyTrack instantaneous_frequency_baseline(const IqBuffer& x, int block_size);

/// Circular distance between two frequencies on a ring of circumference fs.
double freq_distance(double a_hz, double b_hz, double sample_rate);

}  // namespace mmtw
