#pragma once

#include <cstdint>

#include "core/types.hpp"

namespace mmtw {

/// Tone sample n is amplitude * exp(j*2*pi*(k0 + alpha)*n/N).
IqBuffer gen_tone(const ToneSpec& spec, std::size_t total_samples, double sample_rate);

/// Continuous-phase binary FSK: instantaneous frequency is
/// carrier - deviation for bit 0, carrier + deviation for bit 1.
IqBuffer gen_fsk(const FskSpec& spec, double duration_s, double sample_rate);

/// Constant-envelope tone whose instantaneous frequency is
/// carrier + peak_deviation * sin(2*pi*rotation_rate*t + doa); the phase is
/// the running integral of that frequency.
IqBuffer gen_doppler(const DopplerScenario& scenario, double duration_s, double sample_rate);

/// Adds circularly-symmetric complex Gaussian noise. sigma is the total
/// per-sample complex standard deviation (sigma^2/2 per quadrature), the
/// Rife-Boorstyn convention. Deterministic for a fixed seed.
IqBuffer add_noise(const IqBuffer& x, double sigma, std::uint64_t seed);

/// Band-limited interpolation by an integer factor: zero-stuff then low-pass
/// at the original Nyquist (windowed sinc, 8 lobes per side, Blackman taper,
/// per-phase normalized). A tone at f Hz stays at f Hz.
IqBuffer upsample(const IqBuffer& x, int factor);

}  // namespace mmtw
