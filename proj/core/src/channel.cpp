#include "mfh/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

namespace mfh::channel {

ComplexVec apply_delay(std::span<const cf64> x, std::size_t d, DelayMode mode, std::size_t window) {
    if (mode == DelayMode::Linear) {
        ComplexVec out(d, cf64{});
        out.insert(out.end(), x.begin(), x.end());
        return out;
    }
    const std::size_t block = window == 0 ? x.size() : window;
    ComplexVec out(x.begin(), x.end());
    if (block == 0) return out;
    for (std::size_t start = 0; start + block <= x.size(); start += block) {
        for (std::size_t n = 0; n < block; ++n) out[start + (n + d) % block] = x[start + n];
    }
    return out;
}

ComplexVec apply_cfo(std::span<const cf64> x, double nu) {
    ComplexVec out(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        // fractional cycles only, so long streams keep full phase precision
        const double cycles = nu * static_cast<double>(n);
        const double angle = kTwoPi * (cycles - std::floor(cycles));
        out[n] = x[n] * cf64{std::cos(angle), std::sin(angle)};
    }
    return out;
}

ComplexVec apply_gain(std::span<const cf64> x, double gain_db) {
    const double amplitude = std::pow(10.0, gain_db / 20.0);
    ComplexVec out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [amplitude](cf64 v) { return v * amplitude; });
    return out;
}

double noise_variance(double esn0_db) { return std::pow(10.0, -esn0_db / 10.0); }

void add_noise(std::span<cf64> x, double variance, Xoshiro256& rng) {
    const double sigma = std::sqrt(variance / 2.0);
    for (auto& v : x) {
        const double re = rng.normal();
        const double im = rng.normal();
        v += cf64{sigma * re, sigma * im};
    }
}

namespace {

void require_unit_power(std::span<const cf64> x) {
    double power = 0.0;
    std::size_t active = 0;
    for (const auto v : x) {
        const double p = std::norm(v);
        if (p == 0.0) continue;
        power += p;
        ++active;
    }
    if (active == 0) return;
    power /= static_cast<double>(active);
    if (std::abs(power - 1.0) > 0.01) {
        throw Error(Errc::PowerMismatch,
                    "input power " + std::to_string(power) + " is not unit within 1%");
    }
}

}  // namespace

ComplexVec add_awgn(std::span<const cf64> x, double esn0_db, std::uint64_t seed) {
    require_unit_power(x);
    ComplexVec out(x.begin(), x.end());
    if (std::isinf(esn0_db) && esn0_db > 0) return out;
    Xoshiro256 rng(seed);
    add_noise(out, noise_variance(esn0_db), rng);
    return out;
}

ComplexVec impair(std::span<const cf64> x, const ChannelSpec& spec) {
    if (spec.esn0_db) require_unit_power(x);
    auto out = apply_delay(x, spec.delay_samples, DelayMode::Linear);
    if (spec.cfo_cycles_per_sample != 0.0) out = apply_cfo(out, spec.cfo_cycles_per_sample);
    if (spec.gain_db != 0.0) out = apply_gain(out, spec.gain_db);
    if (spec.esn0_db && !(std::isinf(*spec.esn0_db) && *spec.esn0_db > 0)) {
        Xoshiro256 rng(spec.seed);
        add_noise(out, noise_variance(*spec.esn0_db), rng);
    }
    return out;
}

ComplexVec mix(const std::vector<std::pair<ComplexVec, ChannelSpec>>& users) {
    std::vector<ComplexVec> impaired;
    impaired.reserve(users.size());
    std::size_t length = 0;
    for (const auto& [stream, spec] : users) {
        impaired.push_back(impair(stream, spec));
        length = std::max(length, impaired.back().size());
    }
    ComplexVec out(length, cf64{});
    for (const auto& stream : impaired) {
        for (std::size_t n = 0; n < stream.size(); ++n) out[n] += stream[n];
    }
    return out;
}

double ebn0_from_esn0(double esn0_db, std::int64_t p, int sf) {
    return esn0_db + 10.0 * std::log10(static_cast<double>(p) / sf);
}

double esn0_from_ebn0(double ebn0_db, std::int64_t p, int sf) {
    return ebn0_db - 10.0 * std::log10(static_cast<double>(p) / sf);
}

void to_json(nlohmann::json& j, const ChannelSpec& spec) {
    j = nlohmann::json{{"delay_samples", spec.delay_samples},
                       {"cfo_cycles_per_sample", spec.cfo_cycles_per_sample},
                       {"gain_db", spec.gain_db},
                       {"seed", spec.seed}};
    if (spec.esn0_db) {
        j["esn0_db"] = *spec.esn0_db;
    } else {
        j["esn0_db"] = "noiseless";
    }
}

void from_json(const nlohmann::json& j, ChannelSpec& spec) {
    spec = ChannelSpec{};
    spec.delay_samples = j.value("delay_samples", std::size_t{0});
    spec.cfo_cycles_per_sample = j.value("cfo_cycles_per_sample", 0.0);
    spec.gain_db = j.value("gain_db", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("esn0_db") && j.at("esn0_db").is_string()) {
        if (j.at("esn0_db").get<std::string>() != "noiseless") {
            throw Error(Errc::ConfigInvalid, "esn0_db must be a number or \"noiseless\"");
        }
    } else if (j.contains("esn0_db")) {
        spec.esn0_db = j.at("esn0_db").get<double>();
        if (!std::isfinite(*spec.esn0_db)) {
            throw Error(Errc::ConfigInvalid, "esn0_db must be finite or \"noiseless\"");
        }
    }
}

}  // namespace mfh::channel
