#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "mfh/hopping.hpp"
#include "mfh/numtheory.hpp"
#include "mfh/rng.hpp"

using namespace mfh;

namespace {

std::vector<std::int64_t> to_vec(const hop::HoppingPattern& p) {
    return {p.points().begin(), p.points().end()};
}

std::vector<std::int64_t> iota_vec(std::int64_t m) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(m));
    std::iota(v.begin(), v.end(), std::int64_t{0});
    return v;
}

double max_diff(const ComplexVec& a, const std::vector<std::complex<double>>& b) {
    double worst = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) worst = std::max(worst, std::abs(a[n] - b[n]));
    return worst;
}

}  // namespace

TEST_CASE("xoshiro256** matches an independent reference implementation") {
    // values from a separate Python port of splitmix64 + xoshiro256**
    Xoshiro256 rng(12345);
    CHECK(rng() == 0xbe6a36374160d49bull);
    CHECK(rng() == 0x214aaa0637a688c6ull);
    CHECK(rng() == 0xf69d16de9954d388ull);
}

TEST_CASE("random_pattern is a reproducible Fisher-Yates permutation") {
    CHECK(to_vec(hop::random_pattern(8, 1)) == std::vector<std::int64_t>{7, 0, 1, 4, 3, 2, 6, 5});
    CHECK(to_vec(hop::random_pattern(17, 2024)) ==
          std::vector<std::int64_t>{10, 12, 15, 14, 9, 3, 0, 4, 7, 6, 16, 13, 2, 1, 11, 5, 8});

    const auto two = to_vec(hop::random_pattern(2, 99));
    CHECK((two == std::vector<std::int64_t>{0, 1} || two == std::vector<std::int64_t>{1, 0}));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (std::int64_t m : {2, 8, 17, 131}) {
            auto v = to_vec(hop::random_pattern(m, seed));
            std::sort(v.begin(), v.end());
            REQUIRE(v == iota_vec(m));
        }
    }
    CHECK(hop::random_pattern(131, 5) == hop::random_pattern(131, 5));
    CHECK_FALSE(hop::random_pattern(131, 5) == hop::random_pattern(131, 6));
    CHECK(hop::random_pattern(131, 5).seed() == 5u);
}

TEST_CASE("linear_pattern") {
    CHECK(to_vec(hop::linear_pattern(17, 3)) ==
          std::vector<std::int64_t>{0, 3, 6, 9, 12, 15, 1, 4, 7, 10, 13, 16, 2, 5, 8, 11, 14});
    CHECK(to_vec(hop::linear_pattern(31, 1)) == iota_vec(31));
    CHECK(hop::linear_pattern(17, 3).root() == 3);

    for (std::int64_t p : {5, 7, 17, 31, 131}) {
        for (std::int64_t r = 1; r < p; ++r) {
            auto v = to_vec(hop::linear_pattern(p, r));
            std::sort(v.begin(), v.end());
            REQUIRE(v == iota_vec(p));
        }
    }

    CHECK_THROWS_AS(hop::linear_pattern(15, 2), Error);
    CHECK_THROWS_AS(hop::linear_pattern(17, 0), Error);
    CHECK_THROWS_AS(hop::linear_pattern(17, 17), Error);
    try {
        hop::linear_pattern(17, 0);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadRoot);
    }
    try {
        hop::linear_pattern(16, 3);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotPrime);
    }
}

TEST_CASE("pattern validation") {
    CHECK_THROWS_AS(hop::HoppingPattern({0, 1, 2}, 4), Error);
    CHECK_THROWS_AS(hop::HoppingPattern({0, 1, 4, 2}, 4), Error);
    CHECK_NOTHROW(hop::HoppingPattern({0, 0, 0, 0}, 4));
}

TEST_CASE("phase_accumulate keeps exact cumulative sums") {
    const hop::HoppingPattern zeros(std::vector<std::int64_t>(8, 0), 8);
    const auto z = hop::phase_accumulate(zeros);
    CHECK(z.numerators == std::vector<std::int64_t>(8, 0));
    CHECK(z.denominator == 8);

    const auto fig = hop::random_pattern(8, 1);  // {7,0,1,4,3,2,6,5}
    CHECK(hop::phase_accumulate(fig).numerators == std::vector<std::int64_t>{7, 7, 8, 12, 15, 17, 23, 28});

    const auto lin = hop::phase_accumulate(hop::linear_pattern(17, 3));
    REQUIRE(lin.denominator == 17);
    for (std::int64_t n = 0; n < 17; ++n) {
        // sum_{k<=n} mod(3k, 17) == 3n(n+1)/2 (mod 17)
        CHECK(nt::mod_reduce(lin.numerators[static_cast<std::size_t>(n)] - 3 * n * (n + 1) / 2, 17) == 0);
    }
}

TEST_CASE("synthesize") {
    const auto ones = hop::synthesize(hop::HoppingPattern(std::vector<std::int64_t>(8, 0), 8));
    for (const auto s : ones.samples) CHECK(std::abs(s - cf64{1.0, 0.0}) < 1e-15);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const auto s : hop::synthesize(hop::random_pattern(257, seed)).samples) {
            REQUIRE(std::abs(std::abs(s) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("cumulative-sum linear symbol equals the Zadoff-Chu closed form") {
    const auto zc = hop::zc_closed_form(17, 3);
    CHECK(std::abs(zc.samples[0] - cf64{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(zc.samples[1] - std::polar(1.0, M_PI * 6.0 / 17.0)) < 1e-12);

    for (std::int64_t p = 5; p <= 257; ++p) {
        if (!oracle::is_prime_scan(p)) continue;
        for (std::int64_t r : {std::int64_t{1}, std::int64_t{2}, (p - 1) / 2, p - 1}) {
            const auto via_cumsum = hop::synthesize(hop::linear_pattern(p, r));
            const auto closed = hop::zc_closed_form(p, r);
            REQUIRE(max_diff(via_cumsum.samples, {closed.samples.begin(), closed.samples.end()}) < 1e-9);
            REQUIRE(max_diff(closed.samples, oracle::zc(p, r)) < 1e-9);
        }
    }
}

TEST_CASE("sum_pattern") {
    const auto a = hop::random_pattern(17, 4);
    const hop::HoppingPattern zeros(std::vector<std::int64_t>(17, 0), 17);
    CHECK(hop::sum_pattern(a, zeros) == a);
    CHECK(hop::sum_pattern(hop::linear_pattern(17, 3), hop::linear_pattern(17, 5)) ==
          hop::linear_pattern(17, 8));
    const auto b = hop::random_pattern(17, 9);
    CHECK(hop::sum_pattern(a, b) == hop::sum_pattern(b, a));
    CHECK_THROWS_AS(hop::sum_pattern(a, hop::random_pattern(8, 1)), Error);
}

TEST_CASE("key_permuted_pattern reads the key in inverse-address order") {
    const auto key = hop::random_pattern(17, 77);
    const auto identity = hop::key_permuted_pattern(key, 1, 17);
    CHECK(identity[1] == key[1]);  // inv(1) = 1

    const auto permuted = hop::key_permuted_pattern(key, 3, 17);
    CHECK(permuted[0] == key[0]);
    CHECK(permuted[2] == key[3]);  // 3*2 = 6, inv(6) = 3 mod 17
    for (std::int64_t addr = 1; addr < 17; ++addr) {
        CHECK(permuted[static_cast<std::size_t>(addr)] ==
              key[static_cast<std::size_t>(oracle::inverse_scan(3 * addr, 17))]);
    }

    auto a = std::vector<std::int64_t>(permuted.points().begin() + 1, permuted.points().end());
    auto b = std::vector<std::int64_t>(key.points().begin() + 1, key.points().end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);

    CHECK_THROWS_AS(hop::key_permuted_pattern(key, 0, 17), Error);
    CHECK_THROWS_AS(hop::key_permuted_pattern(key, 3, 19), Error);
}

TEST_CASE("key permutation is an involution") {
    for (std::int64_t p : {17, 131}) {
        const auto key = hop::random_pattern(p, static_cast<std::uint64_t>(p));
        for (std::int64_t k = 1; k < p; ++k) {
            const auto once = hop::key_permuted_pattern(key, k, p);
            const auto twice = hop::key_permuted_pattern(once, k, p);
            REQUIRE(twice == key);
        }
    }
}

TEST_CASE("pattern JSON round trip") {
    const auto lin = hop::linear_pattern(17, 3);
    const nlohmann::json j = lin;
    CHECK(j.at("m") == 17);
    CHECK(j.at("kind") == "linear");
    CHECK(j.at("root") == 3);
    CHECK_FALSE(j.contains("seed"));
    const auto back = hop::pattern_from_json(j);
    CHECK(back == lin);
    CHECK(back.kind() == hop::PatternKind::Linear);

    const auto rnd = hop::random_pattern(8, 42);
    const nlohmann::json jr = rnd;
    CHECK(jr.at("seed") == 42);
    CHECK(hop::pattern_from_json(nlohmann::json::parse(jr.dump())) == rnd);
}
