#include "mfh/spectral.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>

#include "mfh/numtheory.hpp"

namespace mfh::dsp {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

cf64 twiddle(std::int64_t numerator, std::int64_t denominator) {
    const double angle = -kTwoPi * static_cast<double>(nt::mod_reduce(numerator, denominator)) /
                         static_cast<double>(denominator);
    return {std::cos(angle), std::sin(angle)};
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(Errc::SizeMismatch,
                    "length " + std::to_string(a) + " != length " + std::to_string(b));
    }
}

// In-place iterative radix-2 forward FFT.
class Radix2 {
public:
    explicit Radix2(std::size_t n) : n_(n), roots_(n / 2) {
        for (std::size_t k = 0; k < n / 2; ++k) {
            roots_[k] = twiddle(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n));
        }
    }

    void forward(std::span<cf64> a) const {
        for (std::size_t i = 1, j = 0; i < n_; ++i) {
            std::size_t bit = n_ >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t stride = n_ / len;
            for (std::size_t start = 0; start < n_; start += len) {
                for (std::size_t k = 0; k < len / 2; ++k) {
                    const cf64 u = a[start + k];
                    const cf64 v = a[start + k + len / 2] * roots_[k * stride];
                    a[start + k] = u + v;
                    a[start + k + len / 2] = u - v;
                }
            }
        }
    }

    void inverse(std::span<cf64> a) const {
        for (auto& v : a) v = std::conj(v);
        forward(a);
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& v : a) v = std::conj(v) * scale;
    }

private:
    std::size_t n_;
    ComplexVec roots_;
};

// Bluestein chirp transform: an N-point DFT as a circular convolution of
// power-of-two length >= 2N-1.
class Bluestein {
public:
    explicit Bluestein(std::size_t n) : n_(n), m_(1), chirp_(n) {
        while (m_ < 2 * n - 1) m_ <<= 1;
        fft_ = std::make_unique<Radix2>(m_);
        const auto two_n = static_cast<std::int64_t>(2 * n);
        for (std::size_t k = 0; k < n; ++k) {
            // exp(-i*pi*k^2/N) with k^2 reduced mod 2N
            const auto k64 = static_cast<std::int64_t>(k);
            chirp_[k] = twiddle((k64 * k64) % two_n, two_n);
        }
        kernel_.assign(m_, cf64{});
        kernel_[0] = std::conj(chirp_[0]);
        for (std::size_t k = 1; k < n; ++k) {
            kernel_[k] = kernel_[m_ - k] = std::conj(chirp_[k]);
        }
        fft_->forward(kernel_);
    }

    ComplexVec forward(std::span<const cf64> x) const {
        ComplexVec work(m_, cf64{});
        for (std::size_t k = 0; k < n_; ++k) work[k] = x[k] * chirp_[k];
        fft_->forward(work);
        for (std::size_t k = 0; k < m_; ++k) work[k] *= kernel_[k];
        fft_->inverse(work);
        ComplexVec out(n_);
        for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * chirp_[k];
        return out;
    }

private:
    std::size_t n_;
    std::size_t m_;
    ComplexVec chirp_;
    ComplexVec kernel_;
    std::unique_ptr<Radix2> fft_;
};

constexpr std::size_t kDirectCutoff = 16;

class Plan {
public:
    explicit Plan(std::size_t n) : n_(n) {
        if (is_power_of_two(n)) {
            radix2_ = std::make_unique<Radix2>(n);
        } else {
            bluestein_ = std::make_unique<Bluestein>(n);
        }
    }

    ComplexVec forward(std::span<const cf64> x) const {
        if (radix2_) {
            ComplexVec out(x.begin(), x.end());
            radix2_->forward(out);
            return out;
        }
        return bluestein_->forward(x);
    }

private:
    std::size_t n_;
    std::unique_ptr<Radix2> radix2_;
    std::unique_ptr<Bluestein> bluestein_;
};

const Plan& plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<Plan>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Plan>(n);
    return *slot;
}

}  // namespace

ComplexVec dft_direct(std::span<const cf64> x) {
    const auto n = static_cast<std::int64_t>(x.size());
    ComplexVec roots(x.size());
    for (std::int64_t k = 0; k < n; ++k) roots[static_cast<std::size_t>(k)] = twiddle(k, n);
    ComplexVec out(x.size());
    for (std::int64_t k = 0; k < n; ++k) {
        cf64 acc{};
        std::int64_t index = 0;
        for (std::int64_t t = 0; t < n; ++t) {
            acc += x[static_cast<std::size_t>(t)] * roots[static_cast<std::size_t>(index)];
            index += k;
            if (index >= n) index -= n;
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return out;
}

ComplexVec idft_direct(std::span<const cf64> spectrum) {
    ComplexVec conj_in(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) conj_in[k] = std::conj(spectrum[k]);
    auto out = dft_direct(conj_in);
    const double scale = 1.0 / static_cast<double>(spectrum.size());
    for (auto& v : out) v = std::conj(v) * scale;
    return out;
}

ComplexVec dft(std::span<const cf64> x) {
    if (x.size() <= kDirectCutoff) return dft_direct(x);
    return plan_for(x.size()).forward(x);
}

ComplexVec idft(std::span<const cf64> spectrum) {
    ComplexVec conj_in(spectrum.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k) conj_in[k] = std::conj(spectrum[k]);
    auto out = dft(conj_in);
    const double scale = 1.0 / static_cast<double>(spectrum.size());
    for (auto& v : out) v = std::conj(v) * scale;
    return out;
}

ComplexVec freq_correlation(std::span<const cf64> rx, std::span<const cf64> ref) {
    require_same_size(rx.size(), ref.size());
    ComplexVec product(rx.size());
    for (std::size_t n = 0; n < rx.size(); ++n) product[n] = rx[n] * std::conj(ref[n]);
    return dft(product);
}

ComplexVec circular_cross_correlation(std::span<const cf64> x, std::span<const cf64> y) {
    require_same_size(x.size(), y.size());
    auto spectrum = dft(x);
    const auto ref = dft(y);
    for (std::size_t k = 0; k < spectrum.size(); ++k) spectrum[k] *= std::conj(ref[k]);
    return idft(spectrum);
}

ComplexVec circular_cross_correlation_direct(std::span<const cf64> x, std::span<const cf64> y) {
    require_same_size(x.size(), y.size());
    const std::size_t n = x.size();
    ComplexVec out(n);
    for (std::size_t lag = 0; lag < n; ++lag) {
        cf64 acc{};
        for (std::size_t t = 0; t < n; ++t) acc += x[t] * std::conj(y[(t + n - lag) % n]);
        out[lag] = acc;
    }
    return out;
}

Peak peak_search(std::span<const cf64> v) {
    Peak peak;
    if (v.empty()) return peak;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]);
        if (k == 0 || mag > peak.magnitude) {
            peak.index = k;
            peak.magnitude = mag;
        }
    }
    double rest = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k != peak.index) rest += std::abs(v[k]);
    }
    const double mean = v.size() > 1 ? rest / static_cast<double>(v.size() - 1) : 0.0;
    if (mean > 0.0) {
        peak.peak_to_mean = peak.magnitude / mean;
    } else {
        peak.peak_to_mean = peak.magnitude > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return peak;
}

}  // namespace mfh::dsp
