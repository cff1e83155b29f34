#pragma once

#include <span>
#include <vector>

#include "core/types.hpp"

namespace mmtw {

/// Analysis window applied to each DFT block. The mismatched time window
/// (Mmtw) is a rectangular window with selected samples zeroed; the standard
/// one zeroes sample 0 only.
struct WindowSpec {
    enum class Kind { Rectangular, Mmtw, Taper };

    Kind kind = Kind::Rectangular;
    int block_size = 2;                // N
    std::vector<int> zeroed;           // Mmtw only, indices in [0, N)
    std::vector<double> coefficients;  // Taper only, length N

    static WindowSpec rectangular(int block_size);
    static WindowSpec mmtw(int block_size, std::vector<int> zeroed = {0});
    static WindowSpec taper(std::vector<double> coefficients);

    /// True for the standard MMTW (exactly sample 0 zeroed).
    bool is_standard_mmtw() const;

    bool operator==(const WindowSpec&) const = default;
};

void validate(const WindowSpec& w);

/// One N-point complex DFT of one time block. No 1/N normalization.
struct SpectrumSlice {
    std::vector<cplx> bins;
    int block_index = 0;
    double sample_rate = 1.0;
    WindowSpec window;

    int block_size() const { return static_cast<int>(bins.size()); }
    double bin_width() const { return sample_rate / static_cast<double>(bins.size()); }
};

/// Columns of windowed DFTs at 50% overlap (hop N/2).
struct SpectrogramMatrix {
    std::vector<SpectrumSlice> columns;
    WindowSpec window;
    double sample_rate = 1.0;

    int block_size() const { return window.block_size; }
};

/// bins[k] = sum_n block[n] * w[n] * exp(-j*2*pi*k*n/N).
/// Radix-2 FFT when N is a power of two, direct sum otherwise.
SpectrumSlice dft(std::span<const cplx> block, double sample_rate, const WindowSpec& window,
                  int block_index = 0);

/// Standard-MMTW slice via the shortcut: rectangular DFT minus block[0] at
/// every bin. Identical to dft() with the Mmtw{0} window up to accumulation
/// epsilon.
SpectrumSlice mmtw_spectrum(std::span<const cplx> block, double sample_rate,
                            int block_index = 0);

/// 50%-overlap spectrogram; trailing samples that do not fill a block are
/// dropped. Column count = floor((Ns - N)/(N/2)) + 1.
SpectrogramMatrix spectrogram(const IqBuffer& x, const WindowSpec& window);

/// 20*log10(|bins|/max|bins|) clamped below at floor_db. All-zero slices map
/// to floor_db everywhere.
std::vector<double> magnitude_db(const SpectrumSlice& slice, double floor_db);

}  // namespace mmtw
