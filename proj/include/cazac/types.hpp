// Core value types shared by every cazac module.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cazac {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// Raised for malformed user configuration (CLI maps it to exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tag stored alongside a sequence; also the `kind` field of the binary format.
enum class SequenceKind : std::uint32_t {
    custom = 0,
    zadoff_chu = 1,
    general_cazac = 2,
    differential_zc = 3,
};

inline std::string_view to_string(SequenceKind kind)
{
    switch (kind) {
    case SequenceKind::zadoff_chu: return "zadoff_chu";
    case SequenceKind::general_cazac: return "general_cazac";
    case SequenceKind::differential_zc: return "differential_zc";
    case SequenceKind::custom: break;
    }
    return "custom";
}

/// Immutable block of complex samples plus a note on how it was generated.
class ComplexSequence {
public:
    ComplexSequence() = default;

    explicit ComplexSequence(std::vector<cplx> samples,
                             SequenceKind kind = SequenceKind::custom,
                             std::string provenance = {})
        : samples_(std::move(samples)), kind_(kind), provenance_(std::move(provenance))
    {
    }

    [[nodiscard]] std::span<const cplx> samples() const noexcept { return samples_; }
    [[nodiscard]] std::size_t length() const noexcept { return samples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }
    [[nodiscard]] SequenceKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& provenance() const noexcept { return provenance_; }

    const cplx& operator[](std::size_t i) const { return samples_[i]; }

    [[nodiscard]] auto begin() const noexcept { return samples_.begin(); }
    [[nodiscard]] auto end() const noexcept { return samples_.end(); }

    /// Releases the sample buffer (used when a derived sequence is built from this one).
    [[nodiscard]] std::vector<cplx> release() && { return std::move(samples_); }

private:
    std::vector<cplx> samples_;
    SequenceKind kind_ = SequenceKind::custom;
    std::string provenance_;
};

inline double amplitude_db(double ratio) { return 20.0 * std::log10(ratio); }
inline double power_db(double ratio) { return 10.0 * std::log10(ratio); }
inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }
inline double power_from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace cazac
