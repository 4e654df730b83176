#pragma once

#include <cstdint>
#include <span>

#include "mfh/hopping.hpp"
#include "mfh/spectral.hpp"
#include "mfh/types.hpp"

namespace mfh::modem {

/// peak_to_mean at or above this counts as a detection.
inline constexpr double kDetectionThreshold = 4.0;

struct DemodResult {
    std::int64_t data = 0;
    double peak_magnitude = 0.0;
    double peak_to_mean = 0.0;

    bool detected(double threshold = kDetectionThreshold) const noexcept {
        return peak_to_mean >= threshold;
    }
};

/// Cyclic frequency shift: every frequency point moves up by `data` mod M.
/// Throws DataOutOfRange unless 0 <= data < M.
hop::Symbol modulate_cfs(const hop::HoppingPattern& pattern, std::int64_t data);

/// Unreduced form exp(2*pi*i*cumsum(pattern + data)/M); identical samples to
/// modulate_cfs by periodicity of the exponential.
hop::Symbol modulate_cfs_unreduced(const hop::HoppingPattern& pattern, std::int64_t data);

/// Cyclic time shift: the primary symbol rotated circularly by `data` samples.
/// For odd M this equals re-accumulating the circularly delayed pattern up to
/// a constant phase; for even M that re-accumulation flips sign across the
/// wrap, so the rotated symbol is what gets transmitted.
hop::Symbol modulate_cts(const hop::HoppingPattern& pattern, std::int64_t data);

/// Peak bin of dft(rx .* conj(ref)).
DemodResult demodulate_cfs(std::span<const cf64> rx, const hop::Symbol& ref);

/// Peak lag of the circular cross-correlation of rx against ref.
DemodResult demodulate_cts(std::span<const cf64> rx, const hop::Symbol& ref);

/// Phase scrambling by a unit-modulus key symbol and its inverse.
ComplexVec scramble(std::span<const cf64> x, const hop::Symbol& key);
ComplexVec descramble(std::span<const cf64> x, const hop::Symbol& key);

/// exp(2*pi*i*cumsum(R*n + data + key[n])/P): linear symbol with data and a
/// secondary (key) hopping pattern folded into the phase accumulation.
hop::Symbol modulate_secure(std::int64_t p, std::int64_t root, std::int64_t data,
                            const hop::HoppingPattern& key);

/// Receiver reference cancelling both the linear chirp and the key, so that
/// modulate_secure(..., data, key) .* conj(ref) is a pure tone at bin `data`.
hop::Symbol make_sum_reference(std::int64_t p, std::int64_t root, const hop::HoppingPattern& key);

/// 10*log10(m / bits_per_symbol).
double spreading_gain_db(double m, double bits_per_symbol);

}  // namespace mfh::modem
