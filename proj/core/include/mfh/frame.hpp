#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mfh/hopping.hpp"
#include "mfh/sync.hpp"
#include "mfh/types.hpp"

namespace mfh::frame {

/// Frame parameters. Data symbols use prime P > 2^SF, the preamble uses
/// prime P1 > 2^(SF+1); both are the smallest such primes.
class FrameConfig {
public:
    /// Throws BadRoot when root is outside [1, min(P, P1) - 1],
    /// SizeMismatch when the key length differs from P.
    FrameConfig(int sf, std::int64_t root, std::optional<hop::HoppingPattern> key = std::nullopt,
                std::vector<std::int64_t> key_order_roots = {});

    int sf() const noexcept { return sf_; }
    std::int64_t p() const noexcept { return p_; }
    std::int64_t p1() const noexcept { return p1_; }
    std::int64_t root() const noexcept { return root_; }
    const std::optional<hop::HoppingPattern>& key() const noexcept { return key_; }
    std::span<const std::int64_t> key_order_roots() const noexcept { return key_order_roots_; }

    sync::PilotConfig pilot() const { return {p1_, root_}; }

    /// Largest payload symbol count the sync field can signal.
    std::int64_t max_payload_symbols() const noexcept { return (std::int64_t{1} << (sf_ + 1)) - 1; }

    /// Secondary pattern applied to data symbol `index` (nullopt without key).
    std::optional<hop::HoppingPattern> key_for_symbol(std::size_t index) const;

    std::size_t frame_length(std::size_t payload_symbols) const noexcept {
        return 3 * static_cast<std::size_t>(p1_) + payload_symbols * static_cast<std::size_t>(p_);
    }

private:
    int sf_;
    std::int64_t p_;
    std::int64_t p1_;
    std::int64_t root_;
    std::optional<hop::HoppingPattern> key_;
    std::vector<std::int64_t> key_order_roots_;
};

using Bits = std::vector<std::uint8_t>;

/// Big-endian groups of `sf` bits; the tail is zero padded.
std::vector<std::int64_t> pack_bits(std::span<const std::uint8_t> bits, int sf);
Bits unpack_bits(std::span<const std::int64_t> values, int sf);

/// pilot(R) | pilot(P1-R) | sync | data...
/// Throws PayloadTooLarge when the symbol count exceeds the sync field.
ComplexVec build_frame(const FrameConfig& cfg, std::span<const std::uint8_t> bits);

struct SymbolDiagnostics {
    std::int64_t value = 0;
    double peak_magnitude = 0.0;
    double peak_to_mean = 0.0;
};

struct ParsedFrame {
    Bits bits;  // padded to a multiple of SF
    std::vector<std::int64_t> values;
    std::int64_t sync_value = 0;
    SymbolDiagnostics sync;
    std::vector<SymbolDiagnostics> symbols;
    sync::StreamEstimate estimate;
};

/// Throws NotDetected, SyncFieldInvalid.
ParsedFrame parse_frame(std::span<const cf64> stream, const FrameConfig& cfg);

/// Receiver sensitivity in dBm:
/// -174 + NF + 10*log10(BW) + EbN0 + 10*log10(SF/P).
double sensitivity_dbm(double noise_figure_db, double bandwidth_hz, double ebn0_db, int sf,
                       std::int64_t p);

}  // namespace mfh::frame
