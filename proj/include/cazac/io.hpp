// File formats: sequence CSV/binary, range profile CSV, RDM binary/CSV, ROC CSV, scenario JSON.
#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cazac/correlation.hpp"
#include "cazac/radar.hpp"
#include "cazac/types.hpp"

namespace cazac::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

/// Shortest decimal that parses back to the same double.
inline std::string format_double(double value)
{
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return {buf.data(), end};
}

inline double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline std::ofstream open_output(const std::filesystem::path& path, bool binary = false)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

inline std::ifstream open_input(const std::filesystem::path& path, bool binary = false)
{
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

// ---- sequences ----

inline void write_sequence_csv(std::ostream& out, const ComplexSequence& seq)
{
    out << "index,re,im\n";
    for (std::size_t n = 0; n < seq.length(); ++n) {
        out << n << ',' << format_double(seq[n].real()) << ',' << format_double(seq[n].imag()) << '\n';
    }
}

inline ComplexSequence read_sequence_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "index,re,im")
        throw std::invalid_argument("sequence CSV: expected header 'index,re,im'");
    std::vector<cplx> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw std::invalid_argument("sequence CSV: expected 3 columns");
        if (parse_double(fields[0]) != static_cast<double>(samples.size()))
            throw std::invalid_argument("sequence CSV: indices must run 0, 1, 2, ...");
        samples.emplace_back(parse_double(fields[1]), parse_double(fields[2]));
    }
    return ComplexSequence(std::move(samples), SequenceKind::custom, "csv");
}

inline constexpr std::array<char, 4> sequence_magic{'C', 'A', 'Z', '1'};
inline constexpr std::array<char, 4> rdm_magic{'R', 'D', 'M', '1'};

namespace detail {
template <typename T>
void put(std::ostream& out, T value)
{
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in)
{
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::invalid_argument("binary input truncated");
    return value;
}

inline void put_complex(std::ostream& out, std::span<const cplx> values)
{
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(cplx)));
}

inline std::vector<cplx> get_complex(std::istream& in, std::size_t count)
{
    std::vector<cplx> values(count);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(cplx)));
    if (!in) throw std::invalid_argument("binary input truncated");
    return values;
}

inline void expect_magic(std::istream& in, const std::array<char, 4>& magic)
{
    std::array<char, 4> got{};
    in.read(got.data(), 4);
    if (!in || got != magic)
        throw std::invalid_argument("bad magic, expected '" + std::string(magic.data(), 4) + "'");
}
} // namespace detail

/// 16-byte header (magic "CAZ1", u32 length, u32 kind, u32 reserved = 0), then interleaved re/im f64.
inline void write_sequence_binary(std::ostream& out, const ComplexSequence& seq)
{
    out.write(sequence_magic.data(), 4);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(seq.length()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(seq.kind()));
    detail::put<std::uint32_t>(out, 0);
    detail::put_complex(out, seq.samples());
}

inline ComplexSequence read_sequence_binary(std::istream& in)
{
    detail::expect_magic(in, sequence_magic);
    const auto length = detail::get<std::uint32_t>(in);
    const auto kind = detail::get<std::uint32_t>(in);
    if (kind > static_cast<std::uint32_t>(SequenceKind::differential_zc))
        throw std::invalid_argument("sequence binary: unknown kind tag " + std::to_string(kind));
    (void)detail::get<std::uint32_t>(in);
    auto samples = detail::get_complex(in, length);
    return ComplexSequence(std::move(samples), static_cast<SequenceKind>(kind), "binary");
}

// ---- range profiles ----

inline void write_profile_csv(std::ostream& out, const RangeProfile& profile)
{
    out << "lag,magnitude,magnitude_db\n";
    const auto mags = profile.magnitudes();
    for (std::size_t n = 0; n < mags.size(); ++n) {
        out << n << ',' << format_double(mags[n]) << ',' << format_double(amplitude_db(mags[n])) << '\n';
    }
}

// ---- range-Doppler maps ----

/// Header: magic "RDM1", u32 N, u32 K0; then N*K0 complex doubles, row-major over (n, q).
inline void write_rdm_binary(std::ostream& out, const Rdm& rdm)
{
    out.write(rdm_magic.data(), 4);
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(rdm.lags()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(rdm.bins()));
    detail::put_complex(out, rdm.values());
}

inline Rdm read_rdm_binary(std::istream& in)
{
    detail::expect_magic(in, rdm_magic);
    const auto lags = detail::get<std::uint32_t>(in);
    const auto bins = detail::get<std::uint32_t>(in);
    auto values = detail::get_complex(in, static_cast<std::size_t>(lags) * bins);
    return Rdm(lags, bins, std::move(values));
}

/// Per-lag summary: strongest bin, its signed Doppler and |E| in dB.
inline void write_rdm_summary_csv(std::ostream& out, const Rdm& rdm)
{
    out << "lag,peak_bin,peak_doppler,peak_magnitude,peak_magnitude_db\n";
    for (std::size_t n = 0; n < rdm.lags(); ++n) {
        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t q = 0; q < rdm.bins(); ++q) {
            const double mag = std::abs(rdm.at(n, q));
            if (mag > best_mag) {
                best_mag = mag;
                best = q;
            }
        }
        out << n << ',' << best << ',' << format_double(bin_doppler(best, rdm.lags(), rdm.bins())) << ','
            << format_double(best_mag) << ',' << format_double(amplitude_db(best_mag)) << '\n';
    }
}

// ---- ROC ----

inline void write_roc_csv(std::ostream& out, const RocCurve& curve)
{
    out << "# waveform: " << curve.label << '\n'
        << "# false_alarm_rate = false cells / cells tested per scan (RoI lags x Doppler bins within v_limit)\n"
        << "# detection_rate = matched targets / targets per trial; both averaged over trials\n"
        << "# target draws are shared across waveforms run with the same seed\n"
        << "gamma,false_alarm_rate,detection_rate,trials,seed\n";
    for (const auto& p : curve.points) {
        out << format_double(p.gamma) << ',' << format_double(p.false_alarm_rate) << ','
            << format_double(p.detection_rate) << ',' << curve.trials << ',' << curve.seed << '\n';
    }
}

inline RocCurve read_roc_csv(std::istream& in)
{
    RocCurve curve;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            constexpr std::string_view tag = "# waveform: ";
            if (line.starts_with(tag)) curve.label = line.substr(tag.size());
            continue;
        }
        if (!header) {
            if (line != "gamma,false_alarm_rate,detection_rate,trials,seed")
                throw std::invalid_argument("ROC CSV: unexpected header");
            header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 5) throw std::invalid_argument("ROC CSV: expected 5 columns");
        curve.points.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
        curve.trials = static_cast<int>(parse_double(f[3]));
        curve.seed = std::stoull(std::string(f[4]));
    }
    if (!header) throw std::invalid_argument("ROC CSV: missing header");
    return curve;
}

// ---- scenario JSON ----

using json = nlohmann::ordered_json;

inline json requirements_to_json(const SensingRequirements& req)
{
    return json{{"carrier_hz", req.carrier_hz},
                {"sampling_period_s", req.sampling_period_s},
                {"sensing_range_m", req.sensing_range_m},
                {"speed_limit_mps", req.speed_limit_mps},
                {"pslr_threshold_db", amplitude_db(req.pslr_threshold)},
                {"propagation_speed_mps", req.propagation_speed}};
}

/// Rejects unknown keys so a typo never silently falls back to a default.
inline void check_keys(const json& object, std::initializer_list<std::string_view> allowed, std::string_view where)
{
    if (!object.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, value] : object.items()) {
        bool known = false;
        for (auto name : allowed) known = known || key == name;
        if (!known) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_field(const json& object, std::string_view key, T& target)
{
    const auto it = object.find(std::string(key));
    if (it == object.end()) return;
    try {
        target = it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("field '" + std::string(key) + "': " + e.what());
    }
}

inline SensingRequirements requirements_from_json(const json& j)
{
    check_keys(j, {"carrier_hz", "sampling_period_s", "sensing_range_m", "speed_limit_mps", "pslr_threshold_db",
                   "propagation_speed_mps"},
               "physical");
    SensingRequirements req;
    read_field(j, "carrier_hz", req.carrier_hz);
    read_field(j, "sampling_period_s", req.sampling_period_s);
    read_field(j, "sensing_range_m", req.sensing_range_m);
    read_field(j, "speed_limit_mps", req.speed_limit_mps);
    read_field(j, "propagation_speed_mps", req.propagation_speed);
    double pr_db = amplitude_db(req.pslr_threshold);
    read_field(j, "pslr_threshold_db", pr_db);
    req.pslr_threshold = amplitude_from_db(pr_db);
    try {
        req.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return req;
}

inline json scenario_to_json(const Scenario& s)
{
    json targets = json::array();
    for (const auto& t : s.targets) {
        targets.push_back({{"distance_m", t.distance_m},
                           {"velocity_mps", t.velocity_mps},
                           {"gain_re", t.gain.real()},
                           {"gain_im", t.gain.imag()}});
    }
    return json{{"units",
                 {{"distance_m", "meters"},
                  {"velocity_mps", "meters per second, positive = approaching"},
                  {"gain", "complex round-trip path gain, dimensionless"},
                  {"snr_db", "dB, 10*log10 of unit sequence power over noise variance"},
                  {"carrier_hz", "hertz"},
                  {"sampling_period_s", "seconds"},
                  {"pslr_threshold_db", "dB, 20*log10 amplitude ratio"}}},
                {"length", s.length},
                {"repetitions", s.repetitions},
                {"fft_factor", s.fft_factor},
                {"snr_db", s.snr_db},
                {"noiseless", s.noiseless},
                {"seed", s.seed},
                {"physical", requirements_to_json(s.physical)},
                {"targets", targets}};
}

inline Scenario scenario_from_json(const json& j)
{
    check_keys(j, {"units", "length", "repetitions", "fft_factor", "snr_db", "noiseless", "seed", "physical", "targets"},
               "scenario");
    Scenario s;
    read_field(j, "length", s.length);
    read_field(j, "repetitions", s.repetitions);
    read_field(j, "fft_factor", s.fft_factor);
    read_field(j, "snr_db", s.snr_db);
    read_field(j, "noiseless", s.noiseless);
    read_field(j, "seed", s.seed);
    if (j.contains("physical")) s.physical = requirements_from_json(j.at("physical"));
    if (j.contains("targets")) {
        if (!j.at("targets").is_array()) throw ConfigError("scenario: 'targets' must be an array");
        for (const auto& t : j.at("targets")) {
            check_keys(t, {"distance_m", "velocity_mps", "gain_re", "gain_im"}, "target");
            Target target;
            double re = 1.0;
            double im = 0.0;
            read_field(t, "distance_m", target.distance_m);
            read_field(t, "velocity_mps", target.velocity_mps);
            read_field(t, "gain_re", re);
            read_field(t, "gain_im", im);
            target.gain = {re, im};
            s.targets.push_back(target);
        }
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

inline json read_json_file(const std::filesystem::path& path)
{
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace cazac::io
