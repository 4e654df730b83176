#include "mfh/rng.hpp"

#include <cmath>

#include "mfh/types.hpp"

namespace mfh {

std::uint64_t Xoshiro256::below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    // Reject the final partial block so every residue is equally likely.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r = (*this)();
    while (r >= limit) r = (*this)();
    return r % bound;
}

double Xoshiro256::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
}

}  // namespace mfh
