#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mfh/types.hpp"

namespace mfh::hop {

enum class PatternKind { Random, Linear, Sum, KeyPermuted, Custom };

std::string_view kind_name(PatternKind kind) noexcept;

/// Per-sample frequency-point plan: points[n] in [0, M), one point per sample.
class HoppingPattern {
public:
    /// Validates length == M and every point in [0, M).
    HoppingPattern(std::vector<std::int64_t> points, std::int64_t modulus,
                   PatternKind kind = PatternKind::Custom,
                   std::optional<std::int64_t> root = std::nullopt,
                   std::optional<std::uint64_t> seed = std::nullopt);

    std::int64_t modulus() const noexcept { return modulus_; }
    std::size_t size() const noexcept { return points_.size(); }
    std::span<const std::int64_t> points() const noexcept { return points_; }
    std::int64_t operator[](std::size_t n) const { return points_[n]; }

    PatternKind kind() const noexcept { return kind_; }
    std::optional<std::int64_t> root() const noexcept { return root_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }

    /// Same frequency plan delayed circularly by `shift` samples.
    HoppingPattern circular_shift(std::int64_t shift) const;

    bool operator==(const HoppingPattern& other) const noexcept {
        return modulus_ == other.modulus_ && points_ == other.points_;
    }

private:
    std::vector<std::int64_t> points_;
    std::int64_t modulus_;
    PatternKind kind_;
    std::optional<std::int64_t> root_;
    std::optional<std::uint64_t> seed_;
};

/// Exact accumulated phase in cycles: numerators[n] / denominator.
struct PhaseSeq {
    std::vector<std::int64_t> numerators;
    std::int64_t denominator = 1;
};

struct SymbolOrigin {
    PatternKind kind = PatternKind::Custom;
    std::int64_t modulus = 0;
    std::optional<std::int64_t> root;
};

/// One hopping symbol: M unit-modulus baseband samples.
struct Symbol {
    ComplexVec samples;
    SymbolOrigin origin;

    std::size_t size() const noexcept { return samples.size(); }
};

/// Fisher-Yates permutation of 0..M-1 driven by xoshiro256** seeded with `seed`.
HoppingPattern random_pattern(std::int64_t m, std::uint64_t seed);

/// points[n] = mod(root * n, p). Throws NotPrime / BadRoot.
HoppingPattern linear_pattern(std::int64_t p, std::int64_t root);

/// Inclusive running sum of the pattern over M (kept exact).
PhaseSeq phase_accumulate(const HoppingPattern& pattern);

/// samples[n] = exp(2*pi*i*phases[n]); the numerator is reduced mod the
/// denominator before the trig call.
Symbol synthesize(const PhaseSeq& phases, SymbolOrigin origin = {});

/// Convenience: synthesize(phase_accumulate(pattern)) with origin filled in.
Symbol synthesize(const HoppingPattern& pattern);

/// Zadoff-Chu closed form exp(i*pi*R*n*(n+1)/P).
Symbol zc_closed_form(std::int64_t p, std::int64_t root);

/// points[n] = mod(a[n] + b[n], M). Throws SizeMismatch.
HoppingPattern sum_pattern(const HoppingPattern& a, const HoppingPattern& b);

/// Keyed read order: out[addr] = key[inv(k*addr mod P)] for addr in 1..P-1,
/// out[0] = key[0] (zero has no inverse, so address 0 stays put).
HoppingPattern key_permuted_pattern(const HoppingPattern& key, std::int64_t k, std::int64_t p);

void to_json(nlohmann::json& j, const HoppingPattern& pattern);
HoppingPattern pattern_from_json(const nlohmann::json& j);

}  // namespace mfh::hop
