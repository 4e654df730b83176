#pragma once

#include <cstddef>
#include <span>

#include "mfh/types.hpp"

// Exact-length transforms and correlations. Symbol lengths are prime, so the
// fast path is Bluestein's chirp transform over a power-of-two FFT; the
// direct O(N^2) transform is kept as the reference both must match.
namespace mfh::dsp {

/// Forward DFT, X[k] = sum_n x[n] exp(-2*pi*i*k*n/N), unnormalised. Any N >= 1.
ComplexVec dft(std::span<const cf64> x);

/// Inverse DFT with 1/N normalisation.
ComplexVec idft(std::span<const cf64> spectrum);

ComplexVec dft_direct(std::span<const cf64> x);
ComplexVec idft_direct(std::span<const cf64> spectrum);

/// dft(rx .* conj(ref)). Throws SizeMismatch.
ComplexVec freq_correlation(std::span<const cf64> rx, std::span<const cf64> ref);

/// c[tau] = sum_n x[n] * conj(y[(n - tau) mod N]), computed through the
/// transform domain. Throws SizeMismatch.
ComplexVec circular_cross_correlation(std::span<const cf64> x, std::span<const cf64> y);

/// O(N^2) definition of circular_cross_correlation; test oracle and fallback.
ComplexVec circular_cross_correlation_direct(std::span<const cf64> x, std::span<const cf64> y);

struct Peak {
    std::size_t index = 0;
    double magnitude = 0.0;
    /// peak magnitude / mean magnitude of the remaining bins (+inf when they are all zero).
    double peak_to_mean = 0.0;
};

/// Strict maximum of |v|; ties resolve to the lowest index. Requires N >= 1.
Peak peak_search(std::span<const cf64> v);

}  // namespace mfh::dsp
