#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmtw {

using cplx = std::complex<double>;

/// Uniformly sampled complex baseband signal. The universal signal currency:
/// every generator produces one, every analysis stage consumes one.
struct IqBuffer {
    std::vector<cplx> samples;
    double sample_rate = 1.0;  // Hz; 1.0 for normalized-frequency work

    std::size_t size() const { return samples.size(); }
};

void validate(const IqBuffer& x);

/// Single complex tone A*exp(j*2*pi*(k0 + alpha)*n/N).
struct ToneSpec {
    cplx amplitude = 1.0;
    int coarse_bin = 0;        // k0 in [0, N)
    double bin_offset = 0.0;   // alpha in [0, 1)
    int block_size = 2;        // N >= 2
};

void validate(const ToneSpec& spec);

/// Binary FSK, tones at carrier +/- deviation, continuous phase.
struct FskSpec {
    double carrier_freq = 0.0;  // Hz
    double deviation = 0.0;     // Hz; tone spacing is 2*deviation
    double symbol_rate = 0.0;   // Hz
    std::vector<int> symbols;   // bits; cycled if the duration outruns them
};

void validate(const FskSpec& spec, double sample_rate);

/// Rotating-antenna Doppler scene: instantaneous frequency
/// carrier + peak_deviation*sin(2*pi*rotation_rate*t + doa).
struct DopplerScenario {
    double carrier_freq = 0.0;    // Hz
    double rotation_rate = 0.0;   // revolutions per second
    double peak_deviation = 0.0;  // Hz
    double true_doa_deg = 0.0;    // [0, 360)
};

void validate(const DopplerScenario& s);

}  // namespace mmtw
