#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "mfh/channel.hpp"
#include "mfh/hopping.hpp"
#include "mfh/modem.hpp"
#include "mfh/rng.hpp"
#include "mfh/spectral.hpp"

using namespace mfh;

namespace {

ComplexVec unit_stream(std::size_t n, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    ComplexVec out(n);
    for (auto& v : out) v = std::polar(1.0, kTwoPi * rng.uniform());
    return out;
}

bool same(const ComplexVec& a, const ComplexVec& b, double tol = 0.0) {
    if (a.size() != b.size()) return false;
    for (std::size_t n = 0; n < a.size(); ++n) {
        if (std::abs(a[n] - b[n]) > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("delay") {
    const auto x = unit_stream(34, 1);
    CHECK(same(channel::apply_delay(x, 0, channel::DelayMode::Linear), x));
    CHECK(same(channel::apply_delay(x, 0, channel::DelayMode::Circular), x));

    const auto lin = channel::apply_delay(x, 5, channel::DelayMode::Linear);
    REQUIRE(lin.size() == 39);
    for (std::size_t n = 0; n < 5; ++n) CHECK(lin[n] == cf64{});
    CHECK(lin[5] == x[0]);

    CHECK(same(channel::apply_delay(x, 17, channel::DelayMode::Circular, 17), x));
    const auto circ = channel::apply_delay(x, 3, channel::DelayMode::Circular, 17);
    REQUIRE(circ.size() == 34);
    CHECK(circ[3] == x[0]);
    CHECK(circ[0] == x[14]);
    CHECK(circ[17 + 3] == x[17]);
    CHECK(circ[17] == x[31]);
}

TEST_CASE("frequency offset") {
    const auto x = unit_stream(64, 2);
    CHECK(same(channel::apply_cfo(x, 0.0), x));
    const auto y = channel::apply_cfo(x, 0.137);
    for (std::size_t n = 0; n < x.size(); ++n) CHECK(std::abs(y[n]) == doctest::Approx(std::abs(x[n])));
    CHECK(y[0] == x[0]);

    // nu = k / P1 moves the pilot peak by k bins
    const auto pilot = oracle::zc(31, 3);
    for (int k = 0; k < 31; ++k) {
        const auto shifted = channel::apply_cfo(pilot, static_cast<double>(k) / 31.0);
        const auto corr = dsp::freq_correlation(shifted, pilot);
        REQUIRE(dsp::peak_search(corr).index == static_cast<std::size_t>(k));
    }
}

TEST_CASE("delay and offset commute up to a constant phase") {
    const auto x = unit_stream(31 * 3, 3);
    const double nu = 5.0 / 31.0;
    const auto a = channel::apply_cfo(channel::apply_delay(x, 7, channel::DelayMode::Linear), nu);
    const auto b = channel::apply_delay(channel::apply_cfo(x, nu), 7, channel::DelayMode::Linear);
    const cf64 phase = a[7] / b[7];
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-12);
    for (std::size_t n = 0; n < a.size(); ++n) REQUIRE(std::abs(a[n] - phase * b[n]) < 1e-9);

    const auto ref = oracle::zc(31, 3);
    const std::span<const cf64> sa(a.data() + 31, 31), sb(b.data() + 31, 31);
    const auto ca = dsp::freq_correlation(sa, ref);
    const auto cb = dsp::freq_correlation(sb, ref);
    for (std::size_t k = 0; k < 31; ++k) REQUIRE(std::abs(std::abs(ca[k]) - std::abs(cb[k])) < 1e-9);
}

TEST_CASE("gain") {
    const auto x = unit_stream(8, 4);
    const auto y = channel::apply_gain(x, 6.0);
    CHECK(std::abs(y[3]) == doctest::Approx(std::pow(10.0, 6.0 / 20.0)));
    CHECK(same(channel::apply_gain(x, 0.0), x));
}

TEST_CASE("noise level and reproducibility") {
    CHECK(channel::noise_variance(0.0) == doctest::Approx(1.0));
    CHECK(channel::noise_variance(10.0) == doctest::Approx(0.1));

    const std::size_t n = 100000;
    const auto x = unit_stream(n, 5);
    for (double esn0 : {-10.0, 0.0, 7.0}) {
        const auto y = channel::add_awgn(x, esn0, 42);
        double power = 0.0;
        cf64 mean{};
        for (std::size_t i = 0; i < n; ++i) {
            power += std::norm(y[i] - x[i]);
            mean += y[i] - x[i];
        }
        const double var = power / static_cast<double>(n);
        CHECK(std::abs(var / channel::noise_variance(esn0) - 1.0) < 0.03);
        CHECK(std::abs(mean) / static_cast<double>(n) < 0.02 * std::sqrt(channel::noise_variance(esn0)));
    }
    CHECK(same(channel::add_awgn(x, 3.0, 9), channel::add_awgn(x, 3.0, 9)));
    CHECK_FALSE(same(channel::add_awgn(x, 3.0, 9), channel::add_awgn(x, 3.0, 10)));
    CHECK(same(channel::add_awgn(x, std::numeric_limits<double>::infinity(), 9), x));
}

TEST_CASE("power precondition") {
    auto x = unit_stream(1000, 6);
    for (auto& v : x) v *= 1.1;
    try {
        channel::add_awgn(x, 0.0, 1);
        FAIL("expected a power mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PowerMismatch);
    }
    // zero padding does not count against the power
    auto padded = unit_stream(1000, 7);
    padded.resize(1500, cf64{});
    CHECK_NOTHROW(channel::add_awgn(padded, 0.0, 1));
}

TEST_CASE("impair applies the documented order") {
    const auto x = unit_stream(62, 8);
    channel::ChannelSpec spec;
    spec.delay_samples = 4;
    spec.cfo_cycles_per_sample = 0.01;
    spec.gain_db = -3.0;
    const auto expected =
        channel::apply_gain(channel::apply_cfo(channel::apply_delay(x, 4, channel::DelayMode::Linear), 0.01), -3.0);
    CHECK(same(channel::impair(x, spec), expected, 1e-15));

    spec.esn0_db = 5.0;
    spec.seed = 3;
    CHECK(same(channel::impair(x, spec), channel::impair(x, spec)));
    CHECK(channel::impair(x, spec).size() == 66);
}

TEST_CASE("mix") {
    const auto a = unit_stream(40, 9);
    const auto b = unit_stream(30, 10);
    channel::ChannelSpec spec_a;
    spec_a.delay_samples = 2;
    channel::ChannelSpec spec_b;
    spec_b.cfo_cycles_per_sample = 0.2;

    CHECK(same(channel::mix({{a, spec_a}}), channel::impair(a, spec_a)));
    const auto both = channel::mix({{a, spec_a}, {b, spec_b}});
    const auto ia = channel::impair(a, spec_a);
    const auto ib = channel::impair(b, spec_b);
    REQUIRE(both.size() == 42);
    for (std::size_t n = 0; n < both.size(); ++n) {
        const cf64 expect = (n < ia.size() ? ia[n] : cf64{}) + (n < ib.size() ? ib[n] : cf64{});
        REQUIRE(std::abs(both[n] - expect) < 1e-15);
    }
}

TEST_CASE("two roots share the band") {
    const std::int64_t p = 257;
    const auto u1 = hop::linear_pattern(p, 3);
    const auto u2 = hop::linear_pattern(p, 5);
    const auto r1 = hop::synthesize(u1);
    const auto r2 = hop::synthesize(u2);
    Xoshiro256 rng(12);
    int errors = 0;
    for (int t = 0; t < 200; ++t) {
        const auto d1 = static_cast<std::int64_t>(rng.below(p));
        const auto d2 = static_cast<std::int64_t>(rng.below(p));
        const auto rx = channel::mix({{modem::modulate_cfs(u1, d1).samples, {}}, {modem::modulate_cfs(u2, d2).samples, {}}});
        errors += modem::demodulate_cfs(rx, r1).data != d1;
        errors += modem::demodulate_cfs(rx, r2).data != d2;
    }
    CHECK(errors == 0);
}

TEST_CASE("Eb/N0 bookkeeping") {
    CHECK(channel::ebn0_from_esn0(0.0, 131, 7) == doctest::Approx(10.0 * std::log10(131.0 / 7.0)));
    CHECK(channel::esn0_from_ebn0(channel::ebn0_from_esn0(-4.0, 131, 7), 131, 7) == doctest::Approx(-4.0));
}

TEST_CASE("channel spec json") {
    channel::ChannelSpec spec;
    spec.delay_samples = 12;
    spec.cfo_cycles_per_sample = 0.25;
    spec.esn0_db = -3.5;
    spec.gain_db = 2.0;
    spec.seed = 99;
    const nlohmann::json j = spec;
    const auto back = j.get<channel::ChannelSpec>();
    CHECK(back.delay_samples == 12);
    CHECK(back.cfo_cycles_per_sample == 0.25);
    REQUIRE(back.esn0_db.has_value());
    CHECK(*back.esn0_db == -3.5);
    CHECK(back.gain_db == 2.0);
    CHECK(back.seed == 99);

    const auto quiet = nlohmann::json::parse(R"({"esn0_db": "noiseless"})").get<channel::ChannelSpec>();
    CHECK_FALSE(quiet.esn0_db.has_value());
    CHECK_THROWS(nlohmann::json::parse(R"({"esn0_db": "loud"})").get<channel::ChannelSpec>());
}
