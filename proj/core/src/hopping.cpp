#include "mfh/hopping.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "mfh/numtheory.hpp"
#include "mfh/rng.hpp"

namespace mfh::hop {

namespace {

void require_prime_root(std::int64_t p, std::int64_t root) {
    if (!nt::is_prime(p)) throw Error(Errc::NotPrime, std::to_string(p) + " is not prime");
    if (root < 1 || root > p - 1) {
        throw Error(Errc::BadRoot,
                    "root " + std::to_string(root) + " outside [1, " + std::to_string(p - 1) + "]");
    }
}

cf64 unit_phasor(std::int64_t numerator, std::int64_t denominator) {
    const double angle = kTwoPi * static_cast<double>(nt::mod_reduce(numerator, denominator)) /
                         static_cast<double>(denominator);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::string_view kind_name(PatternKind kind) noexcept {
    switch (kind) {
        case PatternKind::Random: return "random";
        case PatternKind::Linear: return "linear";
        case PatternKind::Sum: return "sum";
        case PatternKind::KeyPermuted: return "key_permuted";
        case PatternKind::Custom: return "custom";
    }
    return "custom";
}

HoppingPattern::HoppingPattern(std::vector<std::int64_t> points, std::int64_t modulus,
                               PatternKind kind, std::optional<std::int64_t> root,
                               std::optional<std::uint64_t> seed)
    : points_(std::move(points)), modulus_(modulus), kind_(kind), root_(root), seed_(seed) {
    if (modulus_ < 2) throw Error(Errc::SizeMismatch, "pattern modulus must be at least 2");
    if (points_.size() != static_cast<std::size_t>(modulus_)) {
        throw Error(Errc::SizeMismatch, "pattern length " + std::to_string(points_.size()) +
                                            " != modulus " + std::to_string(modulus_));
    }
    for (const auto point : points_) {
        if (point < 0 || point >= modulus_) {
            throw Error(Errc::DataOutOfRange, "frequency point " + std::to_string(point) +
                                                  " outside [0, " + std::to_string(modulus_) + ")");
        }
    }
}

HoppingPattern HoppingPattern::circular_shift(std::int64_t shift) const {
    std::vector<std::int64_t> shifted(points_.size());
    for (std::size_t n = 0; n < points_.size(); ++n) {
        const auto src = nt::mod_reduce(static_cast<std::int64_t>(n) - shift, modulus_);
        shifted[n] = points_[static_cast<std::size_t>(src)];
    }
    return {std::move(shifted), modulus_, PatternKind::Custom};
}

HoppingPattern random_pattern(std::int64_t m, std::uint64_t seed) {
    if (m < 2) throw Error(Errc::SizeMismatch, "pattern size must be at least 2");
    std::vector<std::int64_t> points(static_cast<std::size_t>(m));
    std::iota(points.begin(), points.end(), std::int64_t{0});
    Xoshiro256 rng(seed);
    for (std::size_t i = points.size() - 1; i > 0; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(points[i], points[j]);
    }
    return {std::move(points), m, PatternKind::Random, std::nullopt, seed};
}

HoppingPattern linear_pattern(std::int64_t p, std::int64_t root) {
    require_prime_root(p, root);
    std::vector<std::int64_t> points(static_cast<std::size_t>(p));
    for (std::int64_t n = 0; n < p; ++n) points[static_cast<std::size_t>(n)] = (root * n) % p;
    return {std::move(points), p, PatternKind::Linear, root};
}

PhaseSeq phase_accumulate(const HoppingPattern& pattern) {
    PhaseSeq phases;
    phases.denominator = pattern.modulus();
    phases.numerators.resize(pattern.size());
    std::inclusive_scan(pattern.points().begin(), pattern.points().end(),
                        phases.numerators.begin());
    return phases;
}

Symbol synthesize(const PhaseSeq& phases, SymbolOrigin origin) {
    Symbol symbol;
    symbol.origin = origin;
    symbol.samples.reserve(phases.numerators.size());
    for (const auto numerator : phases.numerators) {
        symbol.samples.push_back(unit_phasor(numerator, phases.denominator));
    }
    return symbol;
}

Symbol synthesize(const HoppingPattern& pattern) {
    return synthesize(phase_accumulate(pattern),
                      SymbolOrigin{pattern.kind(), pattern.modulus(), pattern.root()});
}

Symbol zc_closed_form(std::int64_t p, std::int64_t root) {
    require_prime_root(p, root);
    Symbol symbol;
    symbol.origin = {PatternKind::Linear, p, root};
    symbol.samples.reserve(static_cast<std::size_t>(p));
    for (std::int64_t n = 0; n < p; ++n) {
        // exp(i*pi*R*n*(n+1)/P), argument reduced mod 2P half-cycles
        const std::int64_t half_cycles = nt::mod_reduce(root * (n * (n + 1) % (2 * p)), 2 * p);
        const double angle = kTwoPi * 0.5 * static_cast<double>(half_cycles) / static_cast<double>(p);
        symbol.samples.emplace_back(std::cos(angle), std::sin(angle));
    }
    return symbol;
}

HoppingPattern sum_pattern(const HoppingPattern& a, const HoppingPattern& b) {
    if (a.modulus() != b.modulus()) {
        throw Error(Errc::SizeMismatch, "cannot add patterns of size " +
                                            std::to_string(a.modulus()) + " and " +
                                            std::to_string(b.modulus()));
    }
    std::vector<std::int64_t> points(a.size());
    for (std::size_t n = 0; n < a.size(); ++n) points[n] = (a[n] + b[n]) % a.modulus();
    std::optional<std::int64_t> root;
    if (a.kind() == PatternKind::Linear && b.kind() == PatternKind::Linear) {
        root = (*a.root() + *b.root()) % a.modulus();
    }
    const auto kind = root && *root != 0 ? PatternKind::Linear : PatternKind::Sum;
    return {std::move(points), a.modulus(), kind, kind == PatternKind::Linear ? root : std::nullopt};
}

HoppingPattern key_permuted_pattern(const HoppingPattern& key, std::int64_t k, std::int64_t p) {
    require_prime_root(p, k);
    if (key.modulus() != p) {
        throw Error(Errc::SizeMismatch, "key length " + std::to_string(key.modulus()) +
                                            " != " + std::to_string(p));
    }
    std::vector<std::int64_t> points(key.size());
    points[0] = key[0];
    for (std::int64_t addr = 1; addr < p; ++addr) {
        const auto read_addr = nt::inv_mod(k * addr, p);
        points[static_cast<std::size_t>(addr)] = key[static_cast<std::size_t>(read_addr)];
    }
    return {std::move(points), p, PatternKind::KeyPermuted, k};
}

void to_json(nlohmann::json& j, const HoppingPattern& pattern) {
    j = nlohmann::json{{"m", pattern.modulus()},
                       {"kind", std::string(kind_name(pattern.kind()))},
                       {"points", std::vector<std::int64_t>(pattern.points().begin(),
                                                            pattern.points().end())}};
    if (pattern.root()) j["root"] = *pattern.root();
    if (pattern.seed()) j["seed"] = *pattern.seed();
}

HoppingPattern pattern_from_json(const nlohmann::json& j) {
    static constexpr PatternKind kinds[] = {PatternKind::Random, PatternKind::Linear,
                                            PatternKind::Sum, PatternKind::KeyPermuted,
                                            PatternKind::Custom};
    const auto name = j.at("kind").get<std::string>();
    PatternKind kind = PatternKind::Custom;
    for (const auto candidate : kinds) {
        if (kind_name(candidate) == name) kind = candidate;
    }
    std::optional<std::int64_t> root;
    std::optional<std::uint64_t> seed;
    if (j.contains("root")) root = j.at("root").get<std::int64_t>();
    if (j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
    return {j.at("points").get<std::vector<std::int64_t>>(), j.at("m").get<std::int64_t>(), kind,
            root, seed};
}

}  // namespace mfh::hop
