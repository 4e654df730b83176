#include "mfh/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "mfh/channel.hpp"
#include "mfh/frame.hpp"
#include "mfh/hopping.hpp"
#include "mfh/modem.hpp"
#include "mfh/numtheory.hpp"
#include "mfh/parallel.hpp"
#include "mfh/rng.hpp"
#include "mfh/spectral.hpp"
#include "mfh/sync.hpp"
#include "mfh/theory.hpp"

namespace mfh::exp {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

template <typename T>
std::string fmt_int(T v) {
    return std::to_string(v);
}

class Params {
public:
    Params& add(const std::string& key, const std::string& value) {
        if (!text_.empty()) text_ += ';';
        text_ += key + '=' + value;
        return *this;
    }
    Params& add(const std::string& key, std::int64_t value) { return add(key, std::to_string(value)); }
    Params& add_real(const std::string& key, double value) { return add(key, fmt(value)); }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error(Errc::ConfigInvalid, "field '" + field + "': " + why);
}

template <typename T>
T field(const json& j, const std::string& name, T fallback) {
    if (!j.contains(name)) return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        invalid(name, e.what());
    }
}

std::vector<double> esn0_list(const json& j) {
    if (!j.contains("esn0_db")) return {};
    const auto& v = j.at("esn0_db");
    try {
        if (v.is_number()) return {v.get<double>()};
        if (v.is_array()) return v.get<std::vector<double>>();
        if (v.is_object()) {
            const double start = v.at("start").get<double>();
            const double stop = v.at("stop").get<double>();
            const double step = v.at("step").get<double>();
            if (step <= 0.0) invalid("esn0_db.step", "must be positive");
            std::vector<double> out;
            for (int i = 0; start + i * step <= stop + 1e-9; ++i) out.push_back(start + i * step);
            return out;
        }
    } catch (const json::exception& e) {
        invalid("esn0_db", e.what());
    }
    invalid("esn0_db", "expected number, array or {start, stop, step}");
}

std::int64_t data_prime(const ExperimentConfig& cfg) {
    return cfg.p != 0 ? cfg.p : nt::smallest_prime_above(std::int64_t{1} << cfg.sf);
}

std::int64_t pilot_prime(const ExperimentConfig& cfg) {
    return cfg.p1 != 0 ? cfg.p1 : nt::smallest_prime_above(std::int64_t{1} << (cfg.sf + 1));
}

// Uniform data value below 2^SF (or below M when M is smaller).
std::int64_t draw_data(Xoshiro256& rng, std::int64_t m, int sf) {
    const std::int64_t limit = std::min<std::int64_t>(m, std::int64_t{1} << sf);
    return static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(limit)));
}

std::vector<Row> run_correlation(const ExperimentConfig& cfg) {
    const auto p = data_prime(cfg);
    const auto ra = cfg.roots.at(0);
    const auto rb = cfg.roots.at(1);
    const auto a = hop::zc_closed_form(p, ra);
    const auto b = hop::zc_closed_form(p, rb);
    const auto auto_time = dsp::circular_cross_correlation(a.samples, a.samples);
    const auto cross_time = dsp::circular_cross_correlation(a.samples, b.samples);
    const auto auto_freq = dsp::freq_correlation(a.samples, a.samples);
    const auto cross_freq = dsp::freq_correlation(a.samples, b.samples);

    std::vector<Row> rows;
    const std::string name = kind_name(Kind::Correlation);
    const auto base = Params().add("p", p).add("root_a", ra).add("root_b", rb);
    double auto_side = 0.0, cross_min = INFINITY, cross_max = 0.0, freq_side = 0.0, freq_cross = 0.0;
    for (std::size_t lag = 0; lag < auto_time.size(); ++lag) {
        auto params = base;
        params.add("lag", static_cast<std::int64_t>(lag));
        rows.push_back({name, params.str(), "auto_mag", fmt(std::abs(auto_time[lag]))});
        rows.push_back({name, params.str(), "cross_mag", fmt(std::abs(cross_time[lag]))});
        if (lag != 0) auto_side = std::max(auto_side, std::abs(auto_time[lag]));
        if (lag != 0) freq_side = std::max(freq_side, std::abs(auto_freq[lag]));
        cross_min = std::min(cross_min, std::abs(cross_time[lag]));
        cross_max = std::max(cross_max, std::abs(cross_time[lag]));
        freq_cross = std::max(freq_cross, std::abs(cross_freq[lag]));
    }
    rows.push_back({name, base.str(), "auto_peak", fmt(std::abs(auto_time[0]))});
    rows.push_back({name, base.str(), "auto_sidelobe_max", fmt(auto_side)});
    rows.push_back({name, base.str(), "cross_min", fmt(cross_min)});
    rows.push_back({name, base.str(), "cross_max", fmt(cross_max)});
    rows.push_back({name, base.str(), "freq_auto_peak", fmt(std::abs(auto_freq[0]))});
    rows.push_back({name, base.str(), "freq_auto_sidelobe_max", fmt(freq_side)});
    rows.push_back({name, base.str(), "freq_cross_max", fmt(freq_cross)});
    rows.push_back({name, base.str(), "sqrt_p", fmt(std::sqrt(static_cast<double>(p)))});
    return rows;
}

std::vector<Row> run_demod_sweep(const ExperimentConfig& cfg, unsigned threads) {
    const auto p = data_prime(cfg);
    const auto pattern = cfg.pattern == "random" ? hop::random_pattern(p, derive_seed(cfg.seed, 0))
                                                 : hop::linear_pattern(p, cfg.roots.at(0));
    const bool cts = cfg.modulation == "cts";
    const auto reference = hop::synthesize(pattern);
    std::vector<ComplexVec> alphabet;
    for (std::int64_t d = 0; d < p; ++d) {
        alphabet.push_back((cts ? modem::modulate_cts(pattern, d) : modem::modulate_cfs(pattern, d)).samples);
    }

    std::vector<Row> rows;
    const std::string name = kind_name(Kind::DemodSweep);
    for (std::size_t point = 0; point < cfg.esn0_db.size(); ++point) {
        const double esn0 = cfg.esn0_db[point];
        const double variance = channel::noise_variance(esn0);
        const auto errors = parallel_map(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t i) {
            Xoshiro256 rng(derive_seed(cfg.seed, (point + 1) * 1000003ull + i));
            const auto data = draw_data(rng, p, cfg.sf);
            auto rx = alphabet[static_cast<std::size_t>(data)];
            channel::add_noise(rx, variance, rng);
            const auto result = cts ? modem::demodulate_cts(rx, reference) : modem::demodulate_cfs(rx, reference);
            return result.data != data ? 1 : 0;
        });
        const auto count = std::accumulate(errors.begin(), errors.end(), std::int64_t{0});
        const auto params = Params()
                                .add("sf", cfg.sf)
                                .add("p", p)
                                .add("pattern", cfg.pattern)
                                .add("modulation", cfg.modulation)
                                .add_real("esn0_db", esn0)
                                .add("trials", cfg.trials);
        rows.push_back({name, params.str(), "symbol_errors", fmt_int(count)});
        rows.push_back({name, params.str(), "ser", fmt(static_cast<double>(count) / static_cast<double>(cfg.trials))});
        rows.push_back({name, params.str(), "theory_ser",
                        fmt(theory::noncoherent_orthogonal_ser(p, static_cast<double>(p) * std::pow(10.0, esn0 / 10.0)))});
    }
    return rows;
}

ComplexVec preamble_stream(const sync::PilotConfig& pilot, std::int64_t root) {
    ComplexVec stream;
    for (const auto& s : sync::build_pilot(pilot)) stream.insert(stream.end(), s.samples.begin(), s.samples.end());
    const auto sync_symbol = modem::modulate_cfs(hop::linear_pattern(pilot.p1(), root), 0);
    stream.insert(stream.end(), sync_symbol.samples.begin(), sync_symbol.samples.end());
    stream.resize(stream.size() + static_cast<std::size_t>(pilot.p1()), cf64{});
    return stream;
}

std::vector<Row> run_timefreq_grid(const ExperimentConfig& cfg, unsigned threads) {
    const auto p1 = pilot_prime(cfg);
    const auto root = cfg.roots.at(0);
    const sync::PilotConfig pilot(p1, root);
    const auto clean = preamble_stream(pilot, root);
    const auto half = (p1 - 1) / 2;

    std::vector<std::pair<std::int64_t, std::int64_t>> cases;
    if (cfg.trials <= 0 || cfg.trials >= p1 * p1) {
        for (std::int64_t to = 0; to < p1; ++to) {
            for (std::int64_t fo = -half; fo <= half; ++fo) cases.emplace_back(to, fo);
        }
    } else {
        Xoshiro256 rng(derive_seed(cfg.seed, 0));
        for (std::int64_t i = 0; i < cfg.trials; ++i) {
            const auto to = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p1)));
            const auto fo = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p1))) - half;
            cases.emplace_back(to, fo);
        }
    }

    const auto outcomes = parallel_map(cases.size(), threads, [&](std::size_t i) {
        const auto [to, fo] = cases[i];
        channel::ChannelSpec spec;
        spec.delay_samples = static_cast<std::size_t>(to);
        spec.cfo_cycles_per_sample = static_cast<double>(fo) / static_cast<double>(p1);
        if (!cfg.esn0_db.empty()) {
            spec.esn0_db = cfg.esn0_db.front();
            spec.seed = derive_seed(cfg.seed, i + 1);
        }
        const auto rx = channel::impair(clean, spec);
        try {
            const auto est = sync::estimate_stream(rx, pilot);
            return est.estimate.time_offset == to && est.estimate.freq_offset == fo &&
                   est.frame_start == static_cast<std::size_t>(to);
        } catch (const Error&) {
            return false;
        }
    });

    std::vector<Row> rows;
    const std::string name = kind_name(Kind::TimeFreqGrid);
    std::size_t exact = 0;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto params = Params().add("p1", p1).add("root", root).add("to", cases[i].first).add("fo", cases[i].second);
        rows.push_back({name, params.str(), "exact", outcomes[i] ? "true" : "false"});
        exact += outcomes[i] ? 1 : 0;
    }
    const auto params = Params().add("p1", p1).add("root", root).add("cases", static_cast<std::int64_t>(cases.size()));
    rows.push_back({name, params.str(), "exact_fraction", fmt(static_cast<double>(exact) / static_cast<double>(cases.size()))});
    return rows;
}

std::vector<Row> run_multiuser(const ExperimentConfig& cfg, unsigned threads) {
    const auto p = data_prime(cfg);
    const auto r1 = cfg.roots.at(0);
    const auto r2 = cfg.roots.at(1);
    const auto pat1 = hop::linear_pattern(p, r1);
    const auto pat2 = hop::linear_pattern(p, r2);
    const auto ref1 = hop::synthesize(pat1);
    const auto ref2 = hop::synthesize(pat2);

    std::vector<std::optional<double>> points{std::nullopt};
    for (const auto e : cfg.esn0_db) points.emplace_back(e);

    struct Counts {
        int two_user_1 = 0, two_user_2 = 0, single_1 = 0, single_2 = 0;
    };
    std::vector<Row> rows;
    const std::string name = kind_name(Kind::MultiUser);
    for (std::size_t point = 0; point < points.size(); ++point) {
        const auto esn0 = points[point];
        const auto per_trial = parallel_map(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t i) {
            Xoshiro256 rng(derive_seed(cfg.seed, (point + 1) * 1000003ull + i));
            const auto d1 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
            const auto d2 = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
            const auto s1 = modem::modulate_cfs(pat1, d1).samples;
            const auto s2 = modem::modulate_cfs(pat2, d2).samples;
            ComplexVec noise(static_cast<std::size_t>(p), cf64{});
            if (esn0) channel::add_noise(noise, channel::noise_variance(*esn0), rng);
            ComplexVec both(s1.size()), only1(s1.size()), only2(s1.size());
            for (std::size_t n = 0; n < s1.size(); ++n) {
                both[n] = s1[n] + s2[n] + noise[n];
                only1[n] = s1[n] + noise[n];
                only2[n] = s2[n] + noise[n];
            }
            Counts c;
            c.two_user_1 = modem::demodulate_cfs(both, ref1).data != d1;
            c.two_user_2 = modem::demodulate_cfs(both, ref2).data != d2;
            c.single_1 = modem::demodulate_cfs(only1, ref1).data != d1;
            c.single_2 = modem::demodulate_cfs(only2, ref2).data != d2;
            return c;
        });
        Counts total;
        for (const auto& c : per_trial) {
            total.two_user_1 += c.two_user_1;
            total.two_user_2 += c.two_user_2;
            total.single_1 += c.single_1;
            total.single_2 += c.single_2;
        }
        auto params = Params().add("p", p).add("root_1", r1).add("root_2", r2).add("trials", cfg.trials);
        params.add("esn0_db", esn0 ? fmt(*esn0) : std::string("noiseless"));
        const double n = static_cast<double>(cfg.trials);
        rows.push_back({name, params.str(), "ser_user1", fmt(total.two_user_1 / n)});
        rows.push_back({name, params.str(), "ser_user2", fmt(total.two_user_2 / n)});
        rows.push_back({name, params.str(), "ser_single_user1", fmt(total.single_1 / n)});
        rows.push_back({name, params.str(), "ser_single_user2", fmt(total.single_2 / n)});
    }
    return rows;
}

std::vector<Row> run_confidentiality(const ExperimentConfig& cfg, unsigned threads) {
    const auto p = data_prime(cfg);
    const auto root = cfg.roots.at(0);
    const auto key = hop::random_pattern(p, derive_seed(cfg.seed, 0));
    const auto sum_ref = modem::make_sum_reference(p, root, key);
    const auto plain_ref = hop::synthesize(hop::linear_pattern(p, root));

    std::int64_t correct_errors = 0;
    for (std::int64_t d = 0; d < p; ++d) {
        correct_errors += modem::demodulate_cfs(modem::modulate_secure(p, root, d, key).samples, sum_ref).data != d;
    }

    // Symbol j is sent with the key read in order k_j = 1 + j mod (P-1), as in
    // a frame; the eavesdropper knows the order but not the key.
    std::vector<hop::HoppingPattern> ordered_keys;
    for (std::int64_t d = 0; d < p; ++d) ordered_keys.push_back(hop::key_permuted_pattern(key, 1 + d % (p - 1), p));
    for (std::int64_t d = 0; d < p; ++d) {
        const auto& k = ordered_keys[static_cast<std::size_t>(d)];
        correct_errors += modem::demodulate_cfs(modem::modulate_secure(p, root, d, k).samples,
                                                modem::make_sum_reference(p, root, k)).data != d;
    }

    struct Trial {
        std::int64_t hits = 0;
        std::int64_t fixed_order_hits = 0;
        double plain_ratio = 0.0;
    };
    const auto trials = parallel_map(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t i) {
        const auto wrong = hop::random_pattern(p, derive_seed(cfg.seed, i + 1));
        const auto wrong_ref = modem::make_sum_reference(p, root, wrong);
        Trial t;
        for (std::int64_t d = 0; d < p; ++d) {
            const auto k = 1 + d % (p - 1);
            const auto rx = modem::modulate_secure(p, root, d, ordered_keys[static_cast<std::size_t>(d)]);
            const auto ref = modem::make_sum_reference(p, root, hop::key_permuted_pattern(wrong, k, p));
            t.hits += modem::demodulate_cfs(rx.samples, ref).data == d;
            t.fixed_order_hits += modem::demodulate_cfs(modem::modulate_secure(p, root, d, key).samples, wrong_ref).data == d;
        }
        // a fresh transmitter key per trial, demodulated without any key
        Xoshiro256 rng(derive_seed(cfg.seed ^ 0x5bd1e995ull, i));
        const auto d = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(p)));
        t.plain_ratio = modem::demodulate_cfs(modem::modulate_secure(p, root, d, wrong).samples, plain_ref).peak_to_mean;
        return t;
    });

    std::int64_t hits = 0, fixed_hits = 0, below_two = 0, detected = 0;
    for (const auto& t : trials) {
        hits += t.hits;
        fixed_hits += t.fixed_order_hits;
        below_two += t.plain_ratio < 2.0;
        detected += t.plain_ratio >= modem::kDetectionThreshold;
    }
    const auto sidelobes = dsp::circular_cross_correlation(sum_ref.samples, sum_ref.samples);
    double sidelobe_max = 0.0;
    for (std::size_t lag = 1; lag < sidelobes.size(); ++lag) sidelobe_max = std::max(sidelobe_max, std::abs(sidelobes[lag]));

    const std::string name = kind_name(Kind::Confidentiality);
    const auto params = Params().add("p", p).add("root", root).add("trials", cfg.trials).str();
    const double wrong_trials = static_cast<double>(cfg.trials) * static_cast<double>(p);
    return {
        {name, params, "correct_key_symbol_errors", fmt_int(correct_errors)},
        {name, params, "wrong_key_hits", fmt_int(hits)},
        {name, params, "wrong_key_hit_rate", fmt(hits / wrong_trials)},
        {name, params, "wrong_key_fixed_order_hit_rate", fmt(fixed_hits / wrong_trials)},
        {name, params, "chance_bound_2_over_p", fmt(2.0 / static_cast<double>(p))},
        {name, params, "plain_ref_ratio_below_2_fraction", fmt(below_two / static_cast<double>(cfg.trials))},
        {name, params, "plain_ref_detected_fraction", fmt(detected / static_cast<double>(cfg.trials))},
        {name, params, "sum_ref_autocorr_peak", fmt(std::abs(sidelobes[0]))},
        {name, params, "sum_ref_autocorr_sidelobe_max", fmt(sidelobe_max)},
    };
}

std::vector<Row> run_frame_loopback(const ExperimentConfig& cfg, unsigned threads) {
    const auto root = cfg.roots.at(0);
    std::optional<hop::HoppingPattern> key;
    const auto p = nt::smallest_prime_above(std::int64_t{1} << cfg.sf);
    if (cfg.use_key) key = hop::random_pattern(p, derive_seed(cfg.seed, 0));
    const frame::FrameConfig frame_cfg(cfg.sf, root, key);

    struct Trial {
        bool detected = false;
        std::int64_t bit_errors = 0;
    };
    const auto trials = parallel_map(static_cast<std::size_t>(cfg.trials), threads, [&](std::size_t i) {
        Xoshiro256 rng(derive_seed(cfg.seed, i + 1));
        frame::Bits bits(cfg.payload_bits);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
        auto tx = frame::build_frame(frame_cfg, bits);
        tx.resize(tx.size() + static_cast<std::size_t>(frame_cfg.p1()), cf64{});
        auto spec = cfg.channel;
        spec.cfo_cycles_per_sample = static_cast<double>(cfg.cfo_bins) / static_cast<double>(frame_cfg.p1());
        spec.seed = derive_seed(cfg.seed ^ 0xA5A5A5A5ull, i);
        const auto rx = channel::impair(tx, spec);
        Trial t;
        const auto padded = frame::unpack_bits(frame::pack_bits(bits, cfg.sf), cfg.sf);
        try {
            const auto parsed = frame::parse_frame(rx, frame_cfg);
            t.detected = true;
            const auto n = std::min(parsed.bits.size(), padded.size());
            for (std::size_t k = 0; k < n; ++k) t.bit_errors += parsed.bits[k] != padded[k];
            t.bit_errors += static_cast<std::int64_t>(std::max(parsed.bits.size(), padded.size()) - n);
        } catch (const Error&) {
            t.bit_errors = static_cast<std::int64_t>(padded.size());
        }
        return t;
    });

    std::int64_t detected = 0, ok = 0, bit_errors = 0;
    for (const auto& t : trials) {
        detected += t.detected;
        ok += t.detected && t.bit_errors == 0;
        bit_errors += t.bit_errors;
    }
    const std::string name = kind_name(Kind::FrameLoopback);
    auto params = Params()
                      .add("sf", cfg.sf)
                      .add("p", frame_cfg.p())
                      .add("p1", frame_cfg.p1())
                      .add("root", root)
                      .add("key", cfg.use_key ? "yes" : "no")
                      .add("payload_bits", static_cast<std::int64_t>(cfg.payload_bits))
                      .add("delay", static_cast<std::int64_t>(cfg.channel.delay_samples))
                      .add("cfo_bins", cfg.cfo_bins)
                      .add("esn0_db", cfg.channel.esn0_db ? fmt(*cfg.channel.esn0_db) : std::string("noiseless"))
                      .add("trials", cfg.trials);
    const double n = static_cast<double>(cfg.trials);
    const auto padded_bits = static_cast<double>(frame::pack_bits(frame::Bits(cfg.payload_bits), cfg.sf).size()) * cfg.sf;
    return {
        {name, params.str(), "detected_fraction", fmt(detected / n)},
        {name, params.str(), "frame_ok_fraction", fmt(ok / n)},
        {name, params.str(), "bit_errors", fmt_int(bit_errors)},
        {name, params.str(), "ber", fmt(padded_bits > 0 ? bit_errors / (n * padded_bits) : 0.0)},
    };
}

}  // namespace

std::string kind_name(Kind kind) {
    switch (kind) {
        case Kind::Correlation: return "correlation";
        case Kind::DemodSweep: return "demod-sweep";
        case Kind::TimeFreqGrid: return "timefreq-grid";
        case Kind::MultiUser: return "multiuser";
        case Kind::Confidentiality: return "confidentiality";
        case Kind::FrameLoopback: return "frame-loopback";
    }
    return "unknown";
}

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) invalid("<root>", "experiment config must be a JSON object");
    ExperimentConfig cfg;
    const auto kind = field<std::string>(j, "experiment", "");
    bool known = false;
    for (const auto k : {Kind::Correlation, Kind::DemodSweep, Kind::TimeFreqGrid, Kind::MultiUser,
                         Kind::Confidentiality, Kind::FrameLoopback}) {
        if (kind_name(k) == kind) {
            cfg.kind = k;
            known = true;
        }
    }
    if (!known) invalid("experiment", "unknown experiment kind '" + kind + "'");

    cfg.sf = field(j, "sf", cfg.sf);
    if (cfg.sf < 2 || cfg.sf > 16) invalid("sf", "must be in [2, 16]");
    cfg.p = field<std::int64_t>(j, "p", 0);
    cfg.p1 = field<std::int64_t>(j, "p1", 0);
    if (cfg.p != 0 && !nt::is_prime(cfg.p)) invalid("p", std::to_string(cfg.p) + " is not prime");
    if (cfg.p1 != 0 && !nt::is_prime(cfg.p1)) invalid("p1", std::to_string(cfg.p1) + " is not prime");
    cfg.roots = field(j, "roots", cfg.roots);
    cfg.pattern = field(j, "pattern", cfg.pattern);
    if (cfg.pattern != "linear" && cfg.pattern != "random") invalid("pattern", "expected linear or random");
    cfg.modulation = field(j, "modulation", cfg.modulation);
    if (cfg.modulation != "cfs" && cfg.modulation != "cts") invalid("modulation", "expected cfs or cts");
    cfg.esn0_db = esn0_list(j);
    cfg.trials = field(j, "trials", cfg.trials);
    if (cfg.trials < 1 && cfg.kind != Kind::TimeFreqGrid) invalid("trials", "must be at least 1");
    cfg.payload_bits = field(j, "payload_bits", cfg.payload_bits);
    cfg.use_key = field(j, "use_key", cfg.use_key);
    cfg.seed = field(j, "seed", cfg.seed);
    cfg.output = field(j, "output", cfg.output);
    if (j.contains("channel")) {
        try {
            cfg.channel = j.at("channel").get<channel::ChannelSpec>();
        } catch (const json::exception& e) {
            invalid("channel", e.what());
        }
        cfg.cfo_bins = field<std::int64_t>(j.at("channel"), "cfo_bins", 0);
    }

    const std::size_t needed_roots =
        (cfg.kind == Kind::Correlation || cfg.kind == Kind::MultiUser) ? 2 : 1;
    if (cfg.roots.size() < needed_roots) {
        invalid("roots", "needs " + std::to_string(needed_roots) + " root(s)");
    }
    const bool preamble = cfg.kind == Kind::TimeFreqGrid;
    const auto modulus = preamble ? pilot_prime(cfg) : data_prime(cfg);
    for (const auto r : cfg.roots) {
        if (r < 1 || r >= modulus) invalid("roots", "root " + std::to_string(r) + " outside [1, " + std::to_string(modulus - 1) + "]");
    }
    if (cfg.kind == Kind::MultiUser && cfg.roots[0] == cfg.roots[1]) {
        invalid("roots", "users need distinct roots");
    }
    if (cfg.kind == Kind::DemodSweep && cfg.esn0_db.empty()) invalid("esn0_db", "demod-sweep needs at least one point");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::ConfigInvalid, "cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(Errc::ConfigInvalid, path + ": " + e.what());
    }
    return config_from_json(j);
}

std::vector<Row> run(const ExperimentConfig& cfg, unsigned threads) {
    switch (cfg.kind) {
        case Kind::Correlation: return run_correlation(cfg);
        case Kind::DemodSweep: return run_demod_sweep(cfg, threads);
        case Kind::TimeFreqGrid: return run_timefreq_grid(cfg, threads);
        case Kind::MultiUser: return run_multiuser(cfg, threads);
        case Kind::Confidentiality: return run_confidentiality(cfg, threads);
        case Kind::FrameLoopback: return run_frame_loopback(cfg, threads);
    }
    return {};
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
    out << "experiment,params,metric,value\n";
    for (const auto& row : rows) {
        out << row.experiment << ',' << row.params << ',' << row.metric << ',' << row.value << '\n';
    }
}

}  // namespace mfh::exp
