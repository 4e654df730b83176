#pragma once

#include <cstdint>

// Exact integer helpers for pattern generation and the delay/offset solver.
// Moduli in scope are small (<= ~1e6) so every product fits in int64_t.
namespace mfh::nt {

/// Mathematical modulo: result in [0, m) for any sign of `a`.
std::int64_t mod_reduce(std::int64_t a, std::int64_t m);

/// Multiplicative inverse of `a` modulo `m` via extended Euclid.
/// Throws Errc::ZeroOrNonInvertible when gcd(a, m) != 1.
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

bool is_prime(std::int64_t n);

/// Smallest prime strictly greater than `n`.
std::int64_t smallest_prime_above(std::int64_t n);

/// Maps a residue of an odd modulus onto [-(m-1)/2, (m-1)/2].
std::int64_t center_signed(std::int64_t v, std::int64_t m);

}  // namespace mfh::nt
