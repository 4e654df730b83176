#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mfh/rng.hpp"
#include "mfh/types.hpp"

// Channel impairments, always applied in the order
// delay -> CFO -> gain -> noise.
namespace mfh::channel {

enum class DelayMode { Linear, Circular };

struct ChannelSpec {
    std::size_t delay_samples = 0;
    double cfo_cycles_per_sample = 0.0;
    std::optional<double> esn0_db;  // nullopt: noiseless
    double gain_db = 0.0;
    std::uint64_t seed = 0;
};

/// Linear: prepend `d` zeros. Circular: rotate each `window`-sample block by
/// `d` (window 0 means the whole vector).
ComplexVec apply_delay(std::span<const cf64> x, std::size_t d, DelayMode mode,
                       std::size_t window = 0);

/// y[n] = x[n] * exp(2*pi*i*nu*n), n counted from the start of `x`.
ComplexVec apply_cfo(std::span<const cf64> x, double nu);

ComplexVec apply_gain(std::span<const cf64> x, double gain_db);

/// Per-sample complex noise variance for a unit-energy sample.
double noise_variance(double esn0_db);

/// Adds circular complex Gaussian noise of variance 10^(-esn0/10).
/// The input is expected to be unit power over its nonzero samples;
/// throws PowerMismatch if that is off by more than 1%.
ComplexVec add_awgn(std::span<const cf64> x, double esn0_db, std::uint64_t seed);

/// Noise without the power precondition (variance is absolute).
void add_noise(std::span<cf64> x, double variance, Xoshiro256& rng);

/// All impairments of `spec` in the fixed order. Linear delay.
ComplexVec impair(std::span<const cf64> x, const ChannelSpec& spec);

/// Sum of individually impaired streams, zero padded to the longest.
ComplexVec mix(const std::vector<std::pair<ComplexVec, ChannelSpec>>& users);

/// Eb/N0 = Es/N0 + 10*log10(P/SF) for one symbol of P samples carrying SF bits.
double ebn0_from_esn0(double esn0_db, std::int64_t p, int sf);
double esn0_from_ebn0(double ebn0_db, std::int64_t p, int sf);

void to_json(nlohmann::json& j, const ChannelSpec& spec);
void from_json(const nlohmann::json& j, ChannelSpec& spec);

}  // namespace mfh::channel
