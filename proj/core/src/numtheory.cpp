#include "mfh/numtheory.hpp"

#include <string>

#include "mfh/types.hpp"

namespace mfh::nt {

std::int64_t mod_reduce(std::int64_t a, std::int64_t m) {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r0 = m, r1 = mod_reduce(a, m);
    std::int64_t t0 = 0, t1 = 1;
    if (r1 == 0) {
        throw Error(Errc::ZeroOrNonInvertible,
                    std::to_string(a) + " is zero modulo " + std::to_string(m));
    }
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 != 1) {
        throw Error(Errc::ZeroOrNonInvertible, std::to_string(a) + " shares factor " +
                                                   std::to_string(r0) + " with modulus " +
                                                   std::to_string(m));
    }
    return mod_reduce(t0, m);
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (std::int64_t f = 5; f * f <= n; f += 6) {
        if (n % f == 0 || n % (f + 2) == 0) return false;
    }
    return true;
}

std::int64_t smallest_prime_above(std::int64_t n) {
    std::int64_t candidate = n < 2 ? 2 : n + 1;
    while (!is_prime(candidate)) ++candidate;
    return candidate;
}

std::int64_t center_signed(std::int64_t v, std::int64_t m) {
    return v > (m - 1) / 2 ? v - m : v;
}

}  // namespace mfh::nt
