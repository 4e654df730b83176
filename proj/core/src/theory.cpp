#include "mfh/theory.hpp"

#include <cmath>

namespace mfh::theory {

double noncoherent_orthogonal_ser(std::int64_t m, double es_n0) {
    // Envelopes normalised to unit noise variance per dimension: the correct
    // bin is Rician with nu = sqrt(2*Es/N0), the m-1 others are Rayleigh.
    const double nu = std::sqrt(2.0 * es_n0);
    const double upper = nu + 40.0;
    const int steps = 20000;
    const double h = upper / steps;
    double correct = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double r = i * h;
        // exp(-(r^2 + nu^2)/2) * I0(r*nu) = exp(-(r - nu)^2/2) * I0e(r*nu)
        const double x = r * nu;
        const double i0e = x < 700.0 ? std::cyl_bessel_i(0.0, x) * std::exp(-x)
                                     : 1.0 / std::sqrt(2.0 * M_PI * x);
        const double pdf = r * std::exp(-0.5 * (r - nu) * (r - nu)) * i0e;
        const double others = std::pow(-std::expm1(-0.5 * r * r), static_cast<double>(m - 1));
        const double weight = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        correct += weight * pdf * others;
    }
    correct *= h / 3.0;
    const double ser = 1.0 - correct;
    return ser < 0.0 ? 0.0 : ser;
}

double esn0_db_at_ser(std::int64_t p, double target_ser) {
    double lo = -40.0, hi = 20.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double ser =
            noncoherent_orthogonal_ser(p, static_cast<double>(p) * std::pow(10.0, mid / 10.0));
        if (ser > target_ser) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace mfh::theory
