#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ultraspec {

// Every failure raised by the library carries one of these codes.
enum class errc {
    zero_division,
    imprecise_zero,
    dependent_input,
    zero_direction,
    dimension_mismatch,
    dimension_too_small,
    unknown_tail,
    family_mismatch,
    family_too_small,
    invalid_family,
    non_symmetric,
    irrational_spectrum,
    degenerate_gram,
    invalid_partition,
    spectral_point,
    not_idempotent,
    unknown_eigenvalue,
    missing_value,
    parse_error,
};

inline std::string_view errc_name(errc code) noexcept {
    switch (code) {
    case errc::zero_division: return "ZeroDivision";
    case errc::imprecise_zero: return "ImpreciseZero";
    case errc::dependent_input: return "DependentInput";
    case errc::zero_direction: return "ZeroDirection";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::dimension_too_small: return "DimensionTooSmall";
    case errc::unknown_tail: return "UnknownTail";
    case errc::family_mismatch: return "FamilyMismatch";
    case errc::family_too_small: return "FamilyTooSmall";
    case errc::invalid_family: return "InvalidFamily";
    case errc::non_symmetric: return "NonSymmetric";
    case errc::irrational_spectrum: return "IrrationalSpectrum";
    case errc::degenerate_gram: return "DegenerateGram";
    case errc::invalid_partition: return "InvalidPartition";
    case errc::spectral_point: return "SpectralPoint";
    case errc::not_idempotent: return "NotIdempotent";
    case errc::unknown_eigenvalue: return "UnknownEigenvalue";
    case errc::missing_value: return "MissingValue";
    case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

// Mathematical failures (as opposed to malformed or inconsistent input).
inline bool is_math_error(errc code) noexcept {
    switch (code) {
    case errc::zero_division:
    case errc::imprecise_zero:
    case errc::dependent_input:
    case errc::zero_direction:
    case errc::unknown_tail:
    case errc::irrational_spectrum:
    case errc::degenerate_gram:
    case errc::spectral_point:
    case errc::not_idempotent:
        return true;
    default:
        return false;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}

    errc code() const noexcept { return code_; }

    // The text without the error name.
    const std::string& message() const noexcept { return message_; }

private:
    errc code_;
    std::string message_;
};

} // namespace ultraspec
