#pragma once

// Brute-force reference computations used to freeze expected values. They
// deliberately avoid the library's code paths (no transforms, no modular
// helpers) so they can check it independently.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline bool is_prime_scan(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d < n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

inline std::int64_t inverse_scan(std::int64_t a, std::int64_t m) {
    for (std::int64_t x = 1; x < m; ++x) {
        if (((a % m + m) % m) * x % m == 1) return x;
    }
    return -1;
}

// Naive DFT straight from the definition, long double accumulation.
inline std::vector<cd> dft(const std::vector<cd>& x) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<long double> acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const long double angle = -2.0L * 3.14159265358979323846264338327950288L *
                                      static_cast<long double>((k * t) % n) / static_cast<long double>(n);
            acc += std::complex<long double>(x[t].real(), x[t].imag()) *
                   std::complex<long double>(std::cos(angle), std::sin(angle));
        }
        out[k] = cd(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return out;
}

// Circular cross-correlation from its definition.
inline std::vector<cd> xcorr(const std::vector<cd>& x, const std::vector<cd>& y) {
    const std::size_t n = x.size();
    std::vector<cd> out(n);
    for (std::size_t lag = 0; lag < n; ++lag) {
        cd acc{};
        for (std::size_t t = 0; t < n; ++t) acc += x[t] * std::conj(y[(t + n - lag) % n]);
        out[lag] = acc;
    }
    return out;
}

// exp(i*pi*R*n*(n+1)/P) evaluated in long double without reduction.
inline std::vector<cd> zc(std::int64_t p, std::int64_t r) {
    std::vector<cd> out(static_cast<std::size_t>(p));
    for (std::int64_t n = 0; n < p; ++n) {
        const long double angle = 3.14159265358979323846264338327950288L * r * n * (n + 1) / p;
        out[static_cast<std::size_t>(n)] = cd(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
    }
    return out;
}

inline std::size_t argmax_abs(const std::vector<cd>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (std::abs(v[k]) > std::abs(v[best])) best = k;
    }
    return best;
}

}  // namespace oracle
