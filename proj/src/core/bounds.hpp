#pragma once

#include <cstdint>

#include "core/superres.hpp"

namespace mmtw {

struct CrbParams {
    double amplitude = 1.0;    // A > 0
    double noise_sigma = 1.0;  // total complex noise std, >= 0
    double sample_rate = 1.0;  // Hz
    int block_size = 2;        // N
    double gain_constant = 1.0;  // C in (0, 2]
};

void validate(const CrbParams& p);

struct MonteCarloReport {
    int trials = 0;
    double true_freq_hz = 0.0;
    double rmse_hz = 0.0;
    double variance_hz2 = 0.0;  // mean squared error about true_freq
    double crb_unfiltered_hz2 = 0.0;
    double crb_filtered_hz2 = 0.0;
    double quantization_floor_hz2 = 0.0;
};

/// 3*sigma^2*fs^2 / (4*pi^2*A^2*N(N+1)(2N+1)); the variance floor for any
/// unbiased single-tone frequency estimator on N IQ samples.
double crb_unfiltered(const CrbParams& p);

/// sqrt(sample_rate / bin_width): linear SNR gain from narrowing to bin_width.
double processing_gain(double sample_rate, double bin_width);

/// crb_unfiltered divided by the C*N processing gain in power.
double crb_filtered(const CrbParams& p);

/// (fine-grid step)^2 / 12 for the given offset mode; the variance of a
/// uniformly dithered grid-quantized estimate.
double quantization_floor(double sample_rate, int block_size, OffsetMode mode);

/// Synthesizes noisy tones at true_freq, runs the single-block super-resolved
/// estimator per trial, and reports empirical error against both bounds.
/// Deterministic per seed; trial t uses seed + t.
MonteCarloReport monte_carlo(double true_freq, const CrbParams& p, int trials,
                             std::uint64_t seed, OffsetMode mode);

}  // namespace mmtw
