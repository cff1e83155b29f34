// mmtw command-line tool: synthetic signal generation, MMTW spectrogram
// analysis, FSK demodulation, Doppler direction finding, and Cramer-Rao
// bound tables. Wire formats:
//   .iq   little-endian interleaved float32 (I, Q), no header
//   .wav  mono PCM16 input only
//   .pgm  binary P5, 8-bit, row 0 = bin 0, one column per block
//   .csv  header row: time_s,coarse_freq_hz,fine_freq_hz,bin_centered,null_depth_ratio
// Every output file gets a key=value manifest sufficient to reproduce it.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmtw.h"

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------- helpers

[[noreturn]] void die(const std::string& msg) { throw std::runtime_error(msg); }

void check(mmtw_status st, const char* what) {
    if (st != MMTW_OK) die(std::string(what) + ": " + mmtw_last_error());
}

struct BufferDeleter {
    void operator()(mmtw_buffer* b) const { mmtw_buffer_free(b); }
};
struct AnalysisDeleter {
    void operator()(mmtw_analysis* a) const { mmtw_analysis_free(a); }
};
using BufferPtr = std::unique_ptr<mmtw_buffer, BufferDeleter>;
using AnalysisPtr = std::unique_ptr<mmtw_analysis, AnalysisDeleter>;

// Files written by the running command; removed if the command fails.
std::vector<fs::path> g_written;

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) die("cannot open for writing: " + p.string());
    g_written.push_back(p);
    return f;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) die("cannot read: " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string digest_of(const fs::path& p) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a64(read_file(p)));
    return buf;
}

void write_kv(const fs::path& p, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream f = open_out(p);
    for (const auto& [k, v] : kv) f << k << "=" << v << "\n";
}

std::vector<std::pair<std::string, std::string>> read_kv(const fs::path& p) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::ifstream f(p);
    std::string line;
    while (std::getline(f, line)) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return kv;
}

std::string kv_get(const std::vector<std::pair<std::string, std::string>>& kv,
                   const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    return {};
}

// --------------------------------------------------------------- IQ / WAV

void write_iq(const fs::path& p, const mmtw_buffer* buf) {
    size_t n = 0;
    check(mmtw_buffer_len(buf, &n), "buffer_len");
    std::vector<float> iq(2 * n);
    check(mmtw_buffer_copy_interleaved(buf, iq.data()), "buffer_copy");
    std::ofstream f = open_out(p);
    f.write(reinterpret_cast<const char*>(iq.data()),
            static_cast<std::streamsize>(iq.size() * sizeof(float)));
}

BufferPtr read_iq(const fs::path& p, double sample_rate) {
    const std::string bytes = read_file(p);
    if (bytes.size() % 8 != 0) die("iq file size is not a multiple of 8 bytes: " + p.string());
    const size_t n = bytes.size() / 8;
    if (n == 0) die("iq file is empty: " + p.string());
    std::vector<float> iq(2 * n);
    std::memcpy(iq.data(), bytes.data(), bytes.size());
    mmtw_buffer* raw = nullptr;
    check(mmtw_buffer_from_interleaved(iq.data(), n, sample_rate, &raw), "buffer_from_interleaved");
    return BufferPtr(raw);
}

BufferPtr read_wav(const fs::path& p, double* sample_rate_out) {
    const std::string b = read_file(p);
    const auto u16 = [&](size_t off) {
        return static_cast<uint16_t>(static_cast<unsigned char>(b[off]) |
                                     (static_cast<unsigned char>(b[off + 1]) << 8));
    };
    const auto u32 = [&](size_t off) {
        return static_cast<uint32_t>(u16(off)) | (static_cast<uint32_t>(u16(off + 2)) << 16);
    };
    if (b.size() < 44 || b.compare(0, 4, "RIFF") != 0 || b.compare(8, 4, "WAVE") != 0)
        die("not a RIFF/WAVE file: " + p.string());
    uint32_t rate = 0;
    uint16_t channels = 0, bits = 0, format = 0;
    size_t data_off = 0, data_len = 0;
    for (size_t off = 12; off + 8 <= b.size();) {
        const std::string id = b.substr(off, 4);
        const uint32_t len = u32(off + 4);
        if (id == "fmt ") {
            format = u16(off + 8);
            channels = u16(off + 10);
            rate = u32(off + 12);
            bits = u16(off + 22);
        } else if (id == "data") {
            data_off = off + 8;
            data_len = len;
        }
        off += 8 + len + (len & 1);
    }
    if (format != 1 || channels != 1 || bits != 16)
        die("unsupported WAV (need mono PCM16): " + p.string());
    if (data_off == 0 || data_off + data_len > b.size()) die("WAV data chunk missing or truncated");
    const size_t n = data_len / 2;
    if (n == 0) die("WAV has no samples");
    // real audio -> complex with zero imaginary part; offset-only analysis
    std::vector<float> iq(2 * n, 0.0f);
    for (size_t i = 0; i < n; ++i) {
        const int16_t s = static_cast<int16_t>(u16(data_off + 2 * i));
        iq[2 * i] = static_cast<float>(s) / 32768.0f;
    }
    mmtw_buffer* raw = nullptr;
    check(mmtw_buffer_from_interleaved(iq.data(), n, rate, &raw), "buffer_from_interleaved");
    *sample_rate_out = rate;
    return BufferPtr(raw);
}

// ------------------------------------------------------------- PGM / CSV

void write_pgm(const fs::path& p, const mmtw_analysis* a, int which, double floor_db) {
    size_t rows = 0, cols = 0;
    check(mmtw_analysis_sgram_size(a, which, &rows, &cols), "sgram_size");
    std::vector<double> db(rows * cols);
    check(mmtw_analysis_sgram_db(a, which, floor_db, db.data()), "sgram_db");
    std::ofstream f = open_out(p);
    f << "P5\n" << cols << " " << rows << "\n255\n";
    std::vector<unsigned char> row(cols);
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            const double v = (db[r * cols + c] - floor_db) / (0.0 - floor_db);  // 0..1
            row[c] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
        }
        f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(cols));
    }
}

void write_track_csv(const fs::path& p, const mmtw_analysis* a, bool baseline) {
    size_t n = 0;
    check(baseline ? mmtw_analysis_baseline_len(a, &n) : mmtw_analysis_track_len(a, &n),
          "track_len");
    std::ofstream f = open_out(p);
    f << "time_s,coarse_freq_hz,fine_freq_hz,bin_centered,null_depth_ratio\n";
    for (size_t i = 0; i < n; ++i) {
        mmtw_track_entry e{};
        check(baseline ? mmtw_analysis_baseline_entry(a, i, &e)
                       : mmtw_analysis_track_entry(a, i, &e),
              "track_entry");
        f << fmt(e.time_s) << "," << fmt(e.coarse_freq_hz) << "," << fmt(e.fine_freq_hz) << ","
          << (e.bin_centered ? 1 : 0) << "," << fmt(e.null_depth_ratio) << "\n";
    }
}

// --------------------------------------------------------------- commands

struct PipelineFlags {
    double sample_rate = 1.0;  // for headerless .iq input
    double center = 0.0;
    double passband = 0.0;    // 0 = auto: 4 MMTW bin widths
    double transition = 0.0;  // 0 = auto: same as passband
    int decimation = 1;
    double atten = 60.0;
    int block_size = 512;
    std::string offset_mode = "eq3";
    int upsample_factor = 1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--sample-rate", sample_rate, "sample rate for .iq input (Hz)");
        cmd->add_option("--center", center, "tune target frequency (Hz)");
        cmd->add_option("--passband", passband,
                        "low-pass passband halfwidth (Hz); default 4 bin widths");
        cmd->add_option("--transition", transition, "filter transition width (Hz)");
        cmd->add_option("--decimation", decimation, "decimation factor");
        cmd->add_option("--atten", atten, "stopband attenuation (dB)");
        cmd->add_option("--block-size", block_size, "DFT block size N");
        cmd->add_option("--offset-mode", offset_mode, "eq3 | exactgrid")
            ->check(CLI::IsMember({"eq3", "exactgrid"}));
        cmd->add_option("--upsample-factor", upsample_factor, "interpolate before analysis");
    }

    mmtw_config resolve(double input_rate) const {
        mmtw_config cfg{};
        cfg.center_freq = center;
        const double out_rate = input_rate / decimation;
        const double bin_width = out_rate / block_size;
        cfg.passband_halfwidth = passband > 0.0 ? passband : 4.0 * bin_width;
        cfg.transition_width = transition > 0.0 ? transition : cfg.passband_halfwidth;
        cfg.decimation = decimation;
        cfg.stopband_atten_db = atten;
        cfg.block_size = block_size;
        cfg.offset_mode = offset_mode == "exactgrid" ? MMTW_OFFSET_EXACTGRID : MMTW_OFFSET_EQ3;
        cfg.upsample_factor = upsample_factor;
        return cfg;
    }
};

struct LoadedInput {
    BufferPtr buf;
    double sample_rate = 1.0;
    bool is_wav = false;
};

LoadedInput load_input(const std::string& in_path, double iq_rate) {
    LoadedInput li;
    const fs::path p(in_path);
    if (p.extension() == ".wav") {
        li.buf = read_wav(p, &li.sample_rate);
        li.is_wav = true;
    } else {
        li.buf = read_iq(p, iq_rate);
        li.sample_rate = iq_rate;
    }
    return li;
}

void write_manifest(const fs::path& path, const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>& config,
                    const std::string& input_digest) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("command", command);
    kv.emplace_back("tool_version", mmtw_version());
    kv.emplace_back("input_digest", input_digest.empty() ? "-" : input_digest);
    for (const auto& c : config) kv.push_back(c);
    write_kv(path, kv);
}

int cmd_synth(const std::string& kind, CLI::App* sub) {
    const double fs = sub->get_option("--sample-rate")->as<double>();
    const double sigma = sub->get_option("--sigma")->as<double>();
    const std::uint64_t seed = sub->get_option("--seed")->as<std::uint64_t>();
    const std::string out = sub->get_option("--out")->as<std::string>();

    BufferPtr buf;
    std::vector<std::pair<std::string, std::string>> truth;
    std::vector<std::pair<std::string, std::string>> config;
    truth.emplace_back("kind", kind);

    if (kind == "tone") {
        const double amp_re = sub->get_option("--amp-re")->as<double>();
        const double amp_im = sub->get_option("--amp-im")->as<double>();
        const int k0 = sub->get_option("--k0")->as<int>();
        const double alpha = sub->get_option("--alpha")->as<double>();
        const int n = sub->get_option("--block-size")->as<int>();
        const std::size_t total = sub->get_option("--total-samples")->as<std::size_t>();
        mmtw_buffer* raw = nullptr;
        check(mmtw_gen_tone(amp_re, amp_im, k0, alpha, n, total, fs, &raw), "gen_tone");
        buf.reset(raw);
        const double f = (k0 + alpha) * fs / n;
        truth.emplace_back("true_freq_hz", fmt(f));
        config = {{"amp_re", fmt(amp_re)}, {"amp_im", fmt(amp_im)}, {"k0", std::to_string(k0)},
                  {"alpha", fmt(alpha)},   {"block_size", std::to_string(n)},
                  {"total_samples", std::to_string(total)}};
    } else if (kind == "fsk") {
        const double carrier = sub->get_option("--carrier")->as<double>();
        const double dev = sub->get_option("--deviation")->as<double>();
        const double rate = sub->get_option("--symbol-rate")->as<double>();
        const double duration = sub->get_option("--duration")->as<double>();
        std::string symbols = sub->get_option("--symbols")->as<std::string>();
        const int nsym = sub->get_option("--num-symbols")->as<int>();
        if (symbols.empty()) {
            if (nsym <= 0) die("fsk: give --symbols or --num-symbols");
            std::mt19937_64 rng(seed);
            for (int i = 0; i < nsym; ++i) symbols.push_back((rng() & 1) ? '1' : '0');
        }
        std::vector<uint8_t> bits;
        for (char c : symbols) {
            if (c != '0' && c != '1') die("fsk: --symbols must be a 0/1 string");
            bits.push_back(c == '1');
        }
        mmtw_buffer* raw = nullptr;
        check(mmtw_gen_fsk(carrier, dev, rate, bits.data(), bits.size(), duration, fs, &raw),
              "gen_fsk");
        buf.reset(raw);
        truth.emplace_back("symbols", symbols);
        truth.emplace_back("carrier_hz", fmt(carrier));
        truth.emplace_back("deviation_hz", fmt(dev));
        truth.emplace_back("symbol_rate_hz", fmt(rate));
        config = {{"carrier", fmt(carrier)},  {"deviation", fmt(dev)},
                  {"symbol_rate", fmt(rate)}, {"duration", fmt(duration)},
                  {"symbols", symbols}};
    } else if (kind == "doppler") {
        const double carrier = sub->get_option("--carrier")->as<double>();
        const double rot = sub->get_option("--rotation-rate")->as<double>();
        const double dev = sub->get_option("--peak-deviation")->as<double>();
        const double doa = sub->get_option("--doa")->as<double>();
        const double duration = sub->get_option("--duration")->as<double>();
        mmtw_buffer* raw = nullptr;
        check(mmtw_gen_doppler(carrier, rot, dev, doa, duration, fs, &raw), "gen_doppler");
        buf.reset(raw);
        truth.emplace_back("doa_deg", fmt(doa));
        truth.emplace_back("carrier_hz", fmt(carrier));
        truth.emplace_back("rotation_rate_hz", fmt(rot));
        truth.emplace_back("peak_deviation_hz", fmt(dev));
        config = {{"carrier", fmt(carrier)}, {"rotation_rate", fmt(rot)},
                  {"peak_deviation", fmt(dev)}, {"doa", fmt(doa)}, {"duration", fmt(duration)}};
    } else {
        die("unknown synth kind: " + kind);
    }

    if (sigma > 0.0) {
        mmtw_buffer* noisy = nullptr;
        check(mmtw_add_noise(buf.get(), sigma, seed, &noisy), "add_noise");
        buf.reset(noisy);
    }
    config.emplace_back("sample_rate", fmt(fs));
    config.emplace_back("sigma", fmt(sigma));
    config.emplace_back("seed", std::to_string(seed));

    const fs::path out_path(out);
    write_iq(out_path, buf.get());
    write_kv(fs::path(out + ".truth"), truth);
    write_manifest(fs::path(out + ".manifest"), "synth " + kind, config, digest_of(out_path));
    std::printf("wrote %s (%s)\n", out.c_str(), kv_get(truth, truth[1].first).c_str());
    for (const auto& [k, v] : truth) std::printf("%s=%s\n", k.c_str(), v.c_str());
    return 0;
}

int cmd_analyze(const std::string& in, const PipelineFlags& pf, const std::string& out_dir) {
    LoadedInput li = load_input(in, pf.sample_rate);
    const mmtw_config cfg = pf.resolve(li.sample_rate);
    mmtw_analysis* raw = nullptr;
    check(mmtw_analyze(li.buf.get(), &cfg, &raw), "analyze");
    AnalysisPtr a(raw);

    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_track_csv(dir / "track.csv", a.get(), false);
    write_track_csv(dir / "baseline_track.csv", a.get(), true);
    const double floor_db = -60.0;
    write_pgm(dir / "rect_sgram.pgm", a.get(), 0, floor_db);
    write_pgm(dir / "mmtw_sgram.pgm", a.get(), 1, floor_db);

    size_t track_len = 0, rows = 0, cols = 0;
    double out_rate = 0.0;
    check(mmtw_analysis_track_len(a.get(), &track_len), "track_len");
    check(mmtw_analysis_sgram_size(a.get(), 0, &rows, &cols), "sgram_size");
    check(mmtw_analysis_output_rate(a.get(), &out_rate), "output_rate");
    std::vector<std::pair<std::string, std::string>> report;
    report.emplace_back("input", in);
    report.emplace_back("input_kind", li.is_wav ? "wav" : "iq");
    // real WAV input carries no quadrature, so fine frequencies are bin
    // offsets only, not absolute
    report.emplace_back("freq_axis", li.is_wav ? "offset_only" : "absolute");
    report.emplace_back("input_sample_rate_hz", fmt(li.sample_rate));
    report.emplace_back("output_sample_rate_hz", fmt(out_rate));
    report.emplace_back("block_size", std::to_string(cfg.block_size));
    report.emplace_back("bin_width_hz", fmt(out_rate / cfg.block_size));
    report.emplace_back("columns", std::to_string(cols));
    report.emplace_back("track_entries", std::to_string(track_len));
    write_kv(dir / "report.txt", report);

    std::vector<std::pair<std::string, std::string>> config = {
        {"center", fmt(cfg.center_freq)},
        {"passband_halfwidth", fmt(cfg.passband_halfwidth)},
        {"transition_width", fmt(cfg.transition_width)},
        {"decimation", std::to_string(cfg.decimation)},
        {"stopband_atten_db", fmt(cfg.stopband_atten_db)},
        {"block_size", std::to_string(cfg.block_size)},
        {"offset_mode", pf.offset_mode},
        {"upsample_factor", std::to_string(cfg.upsample_factor)},
        {"sample_rate", fmt(li.sample_rate)},
    };
    write_manifest(dir / "manifest", "analyze", config, digest_of(in));
    std::printf("analyzed %s: %zu blocks, bin width %s Hz\n", in.c_str(), cols,
                fmt(out_rate / cfg.block_size).c_str());
    return 0;
}

int cmd_crb(double amplitude, double sigma, double fs, double gain_constant,
            const std::vector<int>& block_sizes, const std::string& offset_mode) {
    const int mode = offset_mode == "exactgrid" ? MMTW_OFFSET_EXACTGRID : MMTW_OFFSET_EQ3;
    std::printf("%8s %16s %16s %16s %16s\n", "N", "crb_unfiltered", "processing_gain",
                "crb_filtered", "quant_floor");
    for (int n : block_sizes) {
        double unf = 0.0, gain = 0.0, filt = 0.0, qf = 0.0;
        check(mmtw_crb_unfiltered(amplitude, sigma, fs, n, &unf), "crb_unfiltered");
        check(mmtw_processing_gain(fs, fs / (gain_constant * n), &gain), "processing_gain");
        check(mmtw_crb_filtered(amplitude, sigma, fs, n, gain_constant, &filt), "crb_filtered");
        check(mmtw_quantization_floor(fs, n, mode, &qf), "quantization_floor");
        std::printf("%8d %16.6e %16.6e %16.6e %16.6e\n", n, unf, gain, filt, qf);
    }
    return 0;
}

int cmd_doa(const std::string& in, double rotation_rate, const PipelineFlags& pf) {
    LoadedInput li = load_input(in, pf.sample_rate);
    const mmtw_config cfg = pf.resolve(li.sample_rate);
    mmtw_analysis* raw = nullptr;
    check(mmtw_analyze(li.buf.get(), &cfg, &raw), "analyze");
    AnalysisPtr a(raw);

    double doa = 0.0, residual = 0.0;
    check(mmtw_estimate_doa(a.get(), rotation_rate, &doa, &residual), "estimate_doa");
    std::printf("doa_deg=%s\n", fmt(doa).c_str());
    std::printf("fit_residual_rms_hz=%s\n", fmt(residual).c_str());

    const fs::path sidecar(in + ".truth");
    if (fs::exists(sidecar)) {
        const auto truth = read_kv(sidecar);
        const std::string t = kv_get(truth, "doa_deg");
        if (!t.empty()) {
            const double true_doa = std::stod(t);
            double err = std::fmod(std::abs(doa - true_doa), 360.0);
            if (err > 180.0) err = 360.0 - err;
            std::printf("doa_error_deg=%s\n", fmt(err).c_str());
        }
    }
    return 0;
}

int cmd_fsk(const std::string& in, double symbol_rate, const PipelineFlags& pf,
            const std::string& out_dir) {
    LoadedInput li = load_input(in, pf.sample_rate);
    const mmtw_config cfg = pf.resolve(li.sample_rate);
    mmtw_analysis* raw = nullptr;
    check(mmtw_analyze(li.buf.get(), &cfg, &raw), "analyze");
    AnalysisPtr a(raw);

    size_t track_len = 0;
    check(mmtw_analysis_track_len(a.get(), &track_len), "track_len");
    std::vector<uint8_t> bits(track_len + 16);
    size_t n_bits = 0;
    double separation = 0.0;
    check(mmtw_demod_fsk(a.get(), symbol_rate, bits.data(), bits.size(), &n_bits, &separation),
          "demod_fsk");
    bits.resize(n_bits);

    std::string decoded;
    for (uint8_t b : bits) decoded.push_back(b ? '1' : '0');
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    {
        std::ofstream f = open_out(dir / "bits.txt");
        f << decoded << "\n";
    }
    std::printf("bits=%s\n", decoded.c_str());
    std::printf("level_separation_hz=%s\n", fmt(separation).c_str());
    if (separation == 0.0) std::fprintf(stderr, "warning: zero level separation\n");

    const fs::path sidecar(in + ".truth");
    if (fs::exists(sidecar)) {
        const std::string truth = kv_get(read_kv(sidecar), "symbols");
        if (!truth.empty()) {
            size_t errors = 0;
            const size_t n = std::min(truth.size(), decoded.size());
            for (size_t i = 0; i < n; ++i) errors += truth[i] != decoded[i];
            errors += (truth.size() > decoded.size() ? truth.size() : decoded.size()) - n;
            std::printf("bit_errors=%zu of %zu\n", errors, truth.size());
        }
    }
    write_manifest(dir / "manifest", "fsk",
                   {{"symbol_rate", fmt(symbol_rate)},
                    {"block_size", std::to_string(cfg.block_size)},
                    {"offset_mode", pf.offset_mode}},
                   digest_of(in));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MMTW spectrogram frequency super-resolution"};
    app.require_subcommand(1);

    // synth
    CLI::App* synth = app.add_subcommand("synth", "generate synthetic IQ recordings");
    synth->require_subcommand(1);
    std::vector<CLI::App*> synth_kinds;
    for (const char* kind : {"tone", "fsk", "doppler"}) {
        CLI::App* k = synth->add_subcommand(kind);
        k->add_option("--sample-rate", "sample rate (Hz)")->default_val(1.0);
        k->add_option("--sigma", "complex noise standard deviation")->default_val(0.0);
        k->add_option("--seed", "noise seed")->default_val(std::uint64_t{1});
        k->add_option("--out", "output IQ path")->required();
        synth_kinds.push_back(k);
    }
    synth_kinds[0]->add_option("--amp-re")->default_val(1.0);
    synth_kinds[0]->add_option("--amp-im")->default_val(0.0);
    synth_kinds[0]->add_option("--k0", "coarse bin")->required();
    synth_kinds[0]->add_option("--alpha", "bin offset in [0,1)")->default_val(0.0);
    synth_kinds[0]->add_option("--block-size", "N the tone is specified against")->required();
    synth_kinds[0]->add_option("--total-samples")->required();
    synth_kinds[1]->add_option("--carrier")->required();
    synth_kinds[1]->add_option("--deviation")->required();
    synth_kinds[1]->add_option("--symbol-rate")->required();
    synth_kinds[1]->add_option("--duration")->required();
    synth_kinds[1]->add_option("--symbols", "explicit 0/1 string")->default_val(std::string{});
    synth_kinds[1]->add_option("--num-symbols", "random symbols from --seed")->default_val(0);
    synth_kinds[2]->add_option("--carrier")->required();
    synth_kinds[2]->add_option("--rotation-rate")->required();
    synth_kinds[2]->add_option("--peak-deviation")->required();
    synth_kinds[2]->add_option("--doa")->required();
    synth_kinds[2]->add_option("--duration")->required();

    // analyze
    CLI::App* analyze = app.add_subcommand("analyze", "run the MMTW spectrogram pipeline");
    std::string an_in, an_out = "mmtw_out";
    PipelineFlags an_pf;
    analyze->add_option("--in", an_in, "input .iq or .wav")->required();
    analyze->add_option("--out-dir", an_out, "output directory");
    an_pf.add_to(analyze);

    // crb
    CLI::App* crb = app.add_subcommand("crb", "Cramer-Rao bound table");
    double crb_a = 1.0, crb_sigma = 1.0, crb_fs = 1.0, crb_c = 1.0;
    std::vector<int> crb_n = {64, 128, 256, 512};
    std::string crb_mode = "eq3";
    crb->add_option("--amplitude", crb_a);
    crb->add_option("--sigma", crb_sigma);
    crb->add_option("--sample-rate", crb_fs);
    crb->add_option("--gain-constant", crb_c);
    crb->add_option("--block-size", crb_n, "N values for the table rows");
    crb->add_option("--offset-mode", crb_mode)->check(CLI::IsMember({"eq3", "exactgrid"}));

    // doa
    CLI::App* doa = app.add_subcommand("doa", "estimate direction of arrival");
    std::string doa_in;
    double doa_rot = 0.0;
    PipelineFlags doa_pf;
    doa->add_option("--in", doa_in)->required();
    doa->add_option("--rotation-rate", doa_rot, "antenna revolutions per second")->required();
    doa_pf.add_to(doa);

    // fsk
    CLI::App* fsk = app.add_subcommand("fsk", "demodulate FSK from the super-resolved track");
    std::string fsk_in, fsk_out = "mmtw_out";
    double fsk_rate = 0.0;
    PipelineFlags fsk_pf;
    fsk->add_option("--in", fsk_in)->required();
    fsk->add_option("--symbol-rate", fsk_rate)->required();
    fsk->add_option("--out-dir", fsk_out);
    fsk_pf.add_to(fsk);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            for (size_t i = 0; i < synth_kinds.size(); ++i)
                if (synth_kinds[i]->parsed())
                    return cmd_synth(std::array{"tone", "fsk", "doppler"}[i], synth_kinds[i]);
        }
        if (analyze->parsed()) return cmd_analyze(an_in, an_pf, an_out);
        if (crb->parsed()) return cmd_crb(crb_a, crb_sigma, crb_fs, crb_c, crb_n, crb_mode);
        if (doa->parsed()) return cmd_doa(doa_in, doa_rot, doa_pf);
        if (fsk->parsed()) return cmd_fsk(fsk_in, fsk_rate, fsk_pf, fsk_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        std::error_code ec;
        for (const fs::path& p : g_written) fs::remove(p, ec);
        return 1;
    }
    return 0;
}
