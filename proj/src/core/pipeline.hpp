#pragma once

#include "core/superres.hpp"
#include "core/types.hpp"

namespace mmtw {

/// Digital down-conversion stage: tune center_freq to baseband, low-pass,
/// decimate.
struct FilterSpec {
    double center_freq = 0.0;         // Hz
    double passband_halfwidth = 0.0;  // Hz
    double transition_width = 0.0;    // Hz
    int decimation = 1;
    double stopband_atten_db = 60.0;
};

void validate(const FilterSpec& spec, double sample_rate);

struct PipelineConfig {
    FilterSpec filter;
    int block_size = 512;
    OffsetMode offset_mode = OffsetMode::BinRatio;
    int upsample_factor = 1;  // 1 = no upsampling
};

struct PipelineOutput {
    FrequencyTrack track;           // fine frequencies in absolute Hz
    FrequencyTrack baseline_track;  // unwrapped-phase cross-check, absolute Hz
    SpectrogramMatrix rect_sgram;
    SpectrogramMatrix mmtw_sgram;
    double output_sample_rate = 1.0;  // rate the spectrograms were computed at
};

/// Linear-phase windowed-sinc low-pass (Kaiser taper sized from atten_db and
/// the transition width); odd tap count, unit DC gain, at most 8192 taps.
std::vector<double> design_lowpass(double cutoff_hz, double transition_hz, double atten_db,
                                   double sample_rate);

/// Mix center_freq down to DC, low-pass at passband_halfwidth, keep every
/// decimation-th sample. The filter transient is trimmed from both ends, so
/// output sample n is the filtered value centered on input sample
/// n*decimation + group_delay (half the tap count). run_pipeline compensates
/// its track timestamps for that delay.
IqBuffer tune_filter_decimate(const IqBuffer& x, const FilterSpec& spec);

/// The full chain: down-convert, optionally upsample, run rectangular and
/// standard-MMTW spectrograms over the same blocks, extract the super-resolved
/// track and the unwrapped-phase baseline. Fine frequencies are re-referenced
/// to absolute Hz by adding back center_freq.
PipelineOutput run_pipeline(const IqBuffer& x, const PipelineConfig& cfg);

/// Per-symbol decision on the track: median fine frequency inside each symbol
/// window against the midpoint of the two track levels. Returns bits, and the
/// measured level separation in Hz through *level_separation when non-null.
std::vector<int> demod_fsk(const FrequencyTrack& track, double symbol_rate,
                           double* level_separation = nullptr);

/// Least-squares fit of a*sin(2*pi*R*t) + b*cos(2*pi*R*t) + c to the track's
/// fine frequencies; the DOA is the phase of the fitted sinusoid in degrees,
/// in [0, 360). Residual RMS is returned through *residual_rms when non-null.
double estimate_doa(const FrequencyTrack& track, double rotation_rate,
                    double* residual_rms = nullptr);

}  // namespace mmtw
