#include "mfh/types.hpp"

namespace mfh {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::ZeroOrNonInvertible: return "ZeroOrNonInvertible";
        case Errc::NotPrime: return "NotPrime";
        case Errc::BadRoot: return "BadRoot";
        case Errc::SizeMismatch: return "SizeMismatch";
        case Errc::DataOutOfRange: return "DataOutOfRange";
        case Errc::InconsistentPeaks: return "InconsistentPeaks";
        case Errc::NotDetected: return "NotDetected";
        case Errc::PayloadTooLarge: return "PayloadTooLarge";
        case Errc::SyncFieldInvalid: return "SyncFieldInvalid";
        case Errc::PowerMismatch: return "PowerMismatch";
        case Errc::MalformedFile: return "MalformedFile";
        case Errc::MetadataMismatch: return "MetadataMismatch";
        case Errc::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace mfh
