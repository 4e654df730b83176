#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mfh {

using cf64 = std::complex<double>;
using ComplexVec = std::vector<cf64>;

enum class Errc {
    ZeroOrNonInvertible,
    NotPrime,
    BadRoot,
    SizeMismatch,
    DataOutOfRange,
    InconsistentPeaks,
    NotDetected,
    PayloadTooLarge,
    SyncFieldInvalid,
    PowerMismatch,
    MalformedFile,
    MetadataMismatch,
    ConfigInvalid,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported through this exception; `code()` is
// stable and machine-readable, `what()` carries the human context.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace mfh
