#include "core/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmtw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 forward DFT (negative exponent).
void fft_pow2(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<cplx> dft_direct(const std::vector<cplx>& a) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t m = 0; m < n; ++m) {
            const double frac =
                std::fmod(static_cast<double>(k) * static_cast<double>(m), static_cast<double>(n));
            acc += a[m] * std::polar(1.0, -kTwoPi * frac / static_cast<double>(n));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> transform(std::vector<cplx> a) {
    if (is_pow2(a.size())) {
        fft_pow2(a);
        return a;
    }
    return dft_direct(a);
}

}  // namespace

WindowSpec WindowSpec::rectangular(int block_size) {
    WindowSpec w;
    w.kind = Kind::Rectangular;
    w.block_size = block_size;
    validate(w);
    return w;
}

WindowSpec WindowSpec::mmtw(int block_size, std::vector<int> zeroed) {
    WindowSpec w;
    w.kind = Kind::Mmtw;
    w.block_size = block_size;
    w.zeroed = std::move(zeroed);
    std::sort(w.zeroed.begin(), w.zeroed.end());
    validate(w);
    return w;
}

WindowSpec WindowSpec::taper(std::vector<double> coefficients) {
    WindowSpec w;
    w.kind = Kind::Taper;
    w.block_size = static_cast<int>(coefficients.size());
    w.coefficients = std::move(coefficients);
    validate(w);
    return w;
}

bool WindowSpec::is_standard_mmtw() const {
    return kind == Kind::Mmtw && zeroed.size() == 1 && zeroed[0] == 0;
}

void validate(const WindowSpec& w) {
    if (w.block_size < 2)
        throw std::invalid_argument("WindowSpec: block_size must be >= 2");
    switch (w.kind) {
        case WindowSpec::Kind::Rectangular:
            break;
        case WindowSpec::Kind::Mmtw:
            if (w.zeroed.empty())
                throw std::invalid_argument("WindowSpec: Mmtw zeroed set must be non-empty");
            for (int i : w.zeroed)
                if (i < 0 || i >= w.block_size)
                    throw std::invalid_argument("WindowSpec: Mmtw zeroed index out of range");
            break;
        case WindowSpec::Kind::Taper:
            if (static_cast<int>(w.coefficients.size()) != w.block_size)
                throw std::invalid_argument("WindowSpec: taper length must equal block_size");
            for (double c : w.coefficients)
                if (!std::isfinite(c))
                    throw std::invalid_argument("WindowSpec: taper coefficients must be finite");
            break;
    }
}

SpectrumSlice dft(std::span<const cplx> block, double sample_rate, const WindowSpec& window,
                  int block_index) {
    validate(window);
    if (static_cast<int>(block.size()) != window.block_size)
        throw std::invalid_argument("dft: block length does not match window block_size");
    if (!(sample_rate > 0.0))
        throw std::invalid_argument("dft: sample_rate must be positive");

    std::vector<cplx> windowed(block.begin(), block.end());
    switch (window.kind) {
        case WindowSpec::Kind::Rectangular:
            break;
        case WindowSpec::Kind::Mmtw:
            for (int i : window.zeroed) windowed[static_cast<std::size_t>(i)] = 0.0;
            break;
        case WindowSpec::Kind::Taper:
            for (std::size_t n = 0; n < windowed.size(); ++n)
                windowed[n] *= window.coefficients[n];
            break;
    }

    SpectrumSlice slice;
    slice.bins = transform(std::move(windowed));
    slice.block_index = block_index;
    slice.sample_rate = sample_rate;
    slice.window = window;
    return slice;
}

SpectrumSlice mmtw_spectrum(std::span<const cplx> block, double sample_rate, int block_index) {
    if (block.size() < 2)
        throw std::invalid_argument("mmtw_spectrum: block must have at least 2 samples");
    SpectrumSlice slice =
        dft(block, sample_rate, WindowSpec::rectangular(static_cast<int>(block.size())), block_index);
    const cplx x0 = block[0];
    for (cplx& b : slice.bins) b -= x0;
    slice.window = WindowSpec::mmtw(static_cast<int>(block.size()));
    return slice;
}

SpectrogramMatrix spectrogram(const IqBuffer& x, const WindowSpec& window) {
    validate(x);
    validate(window);
    const std::size_t n = static_cast<std::size_t>(window.block_size);
    if (x.samples.size() < n)
        throw std::invalid_argument("spectrogram: buffer shorter than one block");

    const std::size_t hop = n / 2;
    const std::size_t cols = (x.samples.size() - n) / hop + 1;
    SpectrogramMatrix m;
    m.window = window;
    m.sample_rate = x.sample_rate;
    m.columns.reserve(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        std::span<const cplx> block(x.samples.data() + c * hop, n);
        m.columns.push_back(dft(block, x.sample_rate, window, static_cast<int>(c)));
    }
    return m;
}

std::vector<double> magnitude_db(const SpectrumSlice& slice, double floor_db) {
    if (!(floor_db < 0.0))
        throw std::invalid_argument("magnitude_db: floor_db must be negative");
    double peak = 0.0;
    for (const cplx& b : slice.bins) peak = std::max(peak, std::abs(b));
    std::vector<double> out(slice.bins.size(), floor_db);
    if (peak == 0.0) return out;
    for (std::size_t k = 0; k < slice.bins.size(); ++k) {
        const double mag = std::abs(slice.bins[k]);
        if (mag > 0.0) out[k] = std::max(floor_db, 20.0 * std::log10(mag / peak));
    }
    return out;
}

}  // namespace mmtw
