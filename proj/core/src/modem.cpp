#include "mfh/modem.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "mfh/numtheory.hpp"

namespace mfh::modem {

namespace {

void require_data(std::int64_t data, std::int64_t m) {
    if (data < 0 || data >= m) {
        throw Error(Errc::DataOutOfRange,
                    "data " + std::to_string(data) + " outside [0, " + std::to_string(m) + ")");
    }
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) {
        throw Error(Errc::SizeMismatch,
                    "length " + std::to_string(a) + " != length " + std::to_string(b));
    }
}

DemodResult to_result(const dsp::Peak& peak) {
    return {static_cast<std::int64_t>(peak.index), peak.magnitude, peak.peak_to_mean};
}

}  // namespace

hop::Symbol modulate_cfs(const hop::HoppingPattern& pattern, std::int64_t data) {
    const auto m = pattern.modulus();
    require_data(data, m);
    std::vector<std::int64_t> shifted(pattern.size());
    for (std::size_t n = 0; n < pattern.size(); ++n) shifted[n] = (pattern[n] + data) % m;
    auto symbol = hop::synthesize(hop::HoppingPattern(std::move(shifted), m));
    symbol.origin = {pattern.kind(), m, pattern.root()};
    return symbol;
}

hop::Symbol modulate_cfs_unreduced(const hop::HoppingPattern& pattern, std::int64_t data) {
    const auto m = pattern.modulus();
    require_data(data, m);
    hop::PhaseSeq phases;
    phases.denominator = m;
    phases.numerators.resize(pattern.size());
    std::int64_t acc = 0;
    for (std::size_t n = 0; n < pattern.size(); ++n) {
        acc += pattern[n] + data;
        phases.numerators[n] = acc;
    }
    return hop::synthesize(phases, {pattern.kind(), m, pattern.root()});
}

hop::Symbol modulate_cts(const hop::HoppingPattern& pattern, std::int64_t data) {
    const auto m = pattern.modulus();
    require_data(data, m);
    const auto primary = hop::synthesize(pattern);
    hop::Symbol symbol;
    symbol.origin = primary.origin;
    symbol.samples.resize(primary.size());
    const auto len = primary.size();
    const auto shift = static_cast<std::size_t>(data);
    for (std::size_t n = 0; n < len; ++n) symbol.samples[n] = primary.samples[(n + len - shift) % len];
    return symbol;
}

DemodResult demodulate_cfs(std::span<const cf64> rx, const hop::Symbol& ref) {
    return to_result(dsp::peak_search(dsp::freq_correlation(rx, ref.samples)));
}

DemodResult demodulate_cts(std::span<const cf64> rx, const hop::Symbol& ref) {
    return to_result(dsp::peak_search(dsp::circular_cross_correlation(rx, ref.samples)));
}

ComplexVec scramble(std::span<const cf64> x, const hop::Symbol& key) {
    require_same_size(x.size(), key.size());
    ComplexVec out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] * key.samples[n];
    return out;
}

ComplexVec descramble(std::span<const cf64> x, const hop::Symbol& key) {
    require_same_size(x.size(), key.size());
    ComplexVec out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) out[n] = x[n] * std::conj(key.samples[n]);
    return out;
}

hop::Symbol modulate_secure(std::int64_t p, std::int64_t root, std::int64_t data,
                            const hop::HoppingPattern& key) {
    require_data(data, p);
    const auto linear = hop::linear_pattern(p, root);
    require_same_size(key.size(), linear.size());
    hop::PhaseSeq phases;
    phases.denominator = p;
    phases.numerators.resize(linear.size());
    std::int64_t acc = 0;
    for (std::size_t n = 0; n < linear.size(); ++n) {
        acc = nt::mod_reduce(acc + linear[n] + data + key[n], p);
        phases.numerators[n] = acc;
    }
    return hop::synthesize(phases, {hop::PatternKind::Sum, p, root});
}

hop::Symbol make_sum_reference(std::int64_t p, std::int64_t root, const hop::HoppingPattern& key) {
    const auto linear = hop::linear_pattern(p, root);
    require_same_size(key.size(), linear.size());
    return hop::synthesize(hop::sum_pattern(linear, key));
}

double spreading_gain_db(double m, double bits_per_symbol) {
    return 10.0 * std::log10(m / bits_per_symbol);
}

}  // namespace mfh::modem
