#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mfh/channel.hpp"
#include "mfh/experiment.hpp"
#include "mfh/frame.hpp"
#include "mfh/hopping.hpp"
#include "mfh/iq.hpp"
#include "mfh/modem.hpp"
#include "mfh/numtheory.hpp"
#include "mfh/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kSpeedOfLight = 299792458.0;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

struct KeyOptions {
    std::optional<std::uint64_t> key_seed;
    std::vector<std::int64_t> order_roots;
};

struct GenOptions {
    int sf = 7;
    std::int64_t root = 3;
    KeyOptions key;
    std::string bits;
    std::optional<std::size_t> random_bits;
    std::string name = "frame.cf32";
    std::size_t delay = 0;
    std::int64_t cfo_bins = 0;
    std::optional<double> esn0_db;
    double gain_db = 0.0;
    std::size_t tail = 0;
};

struct ParseOptions {
    std::string path;
    std::optional<std::int64_t> root;
    KeyOptions key;
    double sample_rate = 125000.0;
};

struct RunOptions {
    std::string config;
};

struct InfoOptions {
    int sf = 7;
};

void fail(mfh::Errc code, const std::string& message) { throw mfh::Error(code, message); }

mfh::frame::FrameConfig frame_config(int sf, std::int64_t root, const KeyOptions& key) {
    std::optional<mfh::hop::HoppingPattern> pattern;
    if (key.key_seed) {
        const auto p = mfh::nt::smallest_prime_above(std::int64_t{1} << sf);
        pattern = mfh::hop::random_pattern(p, *key.key_seed);
    } else if (!key.order_roots.empty()) {
        fail(mfh::Errc::ConfigInvalid, "--key-order-roots needs --key-seed");
    }
    return mfh::frame::FrameConfig(sf, root, pattern, key.order_roots);
}

std::string bits_string(const mfh::frame::Bits& bits) {
    std::string s;
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

int cmd_gen(const Globals& g, const GenOptions& o) {
    const std::uint64_t seed = g.seed.value_or(1);
    const auto cfg = frame_config(o.sf, o.root, o.key);

    mfh::frame::Bits bits;
    if (o.random_bits) {
        mfh::Xoshiro256 rng(mfh::derive_seed(seed, 0));
        bits.resize(*o.random_bits);
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
    } else {
        for (char c : o.bits) {
            if (c != '0' && c != '1') fail(mfh::Errc::ConfigInvalid, "--bits must contain only 0 and 1");
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
    }

    auto tx = mfh::frame::build_frame(cfg, bits);
    tx.resize(tx.size() + o.tail, mfh::cf64{});
    mfh::channel::ChannelSpec spec;
    spec.delay_samples = o.delay;
    spec.cfo_cycles_per_sample = static_cast<double>(o.cfo_bins) / static_cast<double>(cfg.p1());
    spec.esn0_db = o.esn0_db;
    spec.gain_db = o.gain_db;
    spec.seed = mfh::derive_seed(seed, 1);
    const auto rx = mfh::channel::impair(tx, spec);

    fs::create_directories(g.out);
    const auto path = fs::path(g.out) / o.name;
    mfh::io::write_iq(path, rx, {0, cfg.sf(), cfg.p(), cfg.p1(), cfg.root(), seed});

    const json report = {{"file", path.string()},
                         {"samples", rx.size()},
                         {"sf", cfg.sf()},
                         {"p", cfg.p()},
                         {"p1", cfg.p1()},
                         {"root", cfg.root()},
                         {"payload_symbols", mfh::frame::pack_bits(bits, cfg.sf()).size()},
                         {"bits", bits_string(bits)},
                         {"channel", spec}};
    std::cout << report.dump() << '\n';
    return 0;
}

int cmd_parse(const Globals&, const ParseOptions& o) {
    const auto file = mfh::io::read_iq(o.path);
    const auto& meta = file.metadata;
    const auto cfg = frame_config(meta.sf, o.root.value_or(meta.root), o.key);
    if (meta.p != cfg.p() || meta.p1 != cfg.p1()) {
        fail(mfh::Errc::MetadataMismatch, "sidecar primes (" + std::to_string(meta.p) + ", " +
                                              std::to_string(meta.p1) + ") do not match sf " +
                                              std::to_string(meta.sf));
    }
    const auto parsed = mfh::frame::parse_frame(file.samples, cfg);

    json symbols = json::array();
    for (const auto& s : parsed.symbols) {
        symbols.push_back({{"value", s.value}, {"peak", s.peak_magnitude}, {"peak_to_mean", s.peak_to_mean}});
    }
    const auto& est = parsed.estimate;
    const double delay_s = static_cast<double>(est.frame_start) / o.sample_rate;
    const json report = {
        {"bits", bits_string(parsed.bits)},
        {"values", parsed.values},
        {"sync", {{"value", parsed.sync_value}, {"peak", parsed.sync.peak_magnitude}, {"peak_to_mean", parsed.sync.peak_to_mean}}},
        {"symbols", symbols},
        {"estimate",
         {{"frame_start", est.frame_start},
          {"time_offset", est.estimate.time_offset},
          {"freq_offset_bins", est.estimate.freq_offset},
          {"freq_offset_hz", static_cast<double>(est.estimate.freq_offset) / static_cast<double>(cfg.p1()) * o.sample_rate},
          {"delay_s", delay_s},
          {"distance_m", kSpeedOfLight * delay_s}}}};
    std::cout << report.dump() << '\n';
    return 0;
}

int cmd_run(const Globals& g, const RunOptions& o) {
    auto cfg = mfh::exp::load_config(o.config);
    if (g.seed) cfg.seed = *g.seed;
    const auto rows = mfh::exp::run(cfg, g.threads);
    fs::create_directories(g.out);
    const auto path = fs::path(g.out) / cfg.output;
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(mfh::Errc::ConfigInvalid, "cannot write " + path.string());
    mfh::exp::write_csv(out, rows);
    std::cout << json{{"experiment", mfh::exp::kind_name(cfg.kind)}, {"rows", rows.size()}, {"csv", path.string()}}.dump()
              << '\n';
    return 0;
}

int cmd_info(const InfoOptions& o) {
    const mfh::frame::FrameConfig cfg(o.sf, 1);
    const json report = {{"sf", cfg.sf()},
                         {"p", cfg.p()},
                         {"p1", cfg.p1()},
                         {"max_root", std::min(cfg.p(), cfg.p1()) - 1},
                         {"max_payload_symbols", cfg.max_payload_symbols()},
                         {"spreading_gain_db", mfh::modem::spreading_gain_db(cfg.p(), cfg.sf())},
                         {"preamble_samples", cfg.frame_length(0)},
                         {"samples_per_data_symbol", cfg.p()}};
    std::cout << report.dump() << '\n';
    return 0;
}

void print_error(const std::string& code, const std::string& message) {
    std::cerr << json{{"error", code}, {"message", message}}.dump() << '\n';
}

void add_key_options(CLI::App* cmd, KeyOptions& key) {
    cmd->add_option("--key-seed", key.key_seed, "seed of the secondary hopping key (enables secure data symbols)");
    cmd->add_option("--key-order-roots", key.order_roots, "per-symbol key read-order roots");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Micro-frequency-hopping modem simulator"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "build a frame, pass it through the channel, write an IQ file");
    gen_cmd->add_option("--sf", gen.sf, "spreading factor");
    gen_cmd->add_option("--root", gen.root, "pilot and data root");
    add_key_options(gen_cmd, gen.key);
    auto* bits_opt = gen_cmd->add_option("--bits", gen.bits, "payload bit string");
    gen_cmd->add_option("--random-bits", gen.random_bits, "random payload of N bits")->excludes(bits_opt);
    gen_cmd->add_option("--name", gen.name, "output file name inside --out");
    gen_cmd->add_option("--delay", gen.delay, "channel delay in samples");
    gen_cmd->add_option("--cfo-bins", gen.cfo_bins, "carrier offset in pilot bins");
    gen_cmd->add_option("--esn0", gen.esn0_db, "per-sample Es/N0 in dB (default noiseless)");
    gen_cmd->add_option("--gain-db", gen.gain_db, "channel gain in dB");
    gen_cmd->add_option("--tail", gen.tail, "zero samples appended after the frame");

    ParseOptions parse;
    auto* parse_cmd = app.add_subcommand("parse", "detect and decode a frame from an IQ file");
    parse_cmd->add_option("file", parse.path, "cf32le file with .json sidecar")->required();
    parse_cmd->add_option("--root", parse.root, "receiver root (default: sidecar root)");
    add_key_options(parse_cmd, parse.key);
    parse_cmd->add_option("--sample-rate", parse.sample_rate, "sample rate in Hz for the delay report");

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "run an experiment config and write CSV");
    run_cmd->add_option("--config", run.config, "experiment JSON")->required();

    InfoOptions info;
    auto* info_cmd = app.add_subcommand("info", "derived primes and gains for a spreading factor");
    info_cmd->add_option("--sf", info.sf, "spreading factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("UsageError", e.what());
        return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
    }

    try {
        if (*gen_cmd) return cmd_gen(g, gen);
        if (*parse_cmd) return cmd_parse(g, parse);
        if (*run_cmd) return cmd_run(g, run);
        if (*info_cmd) return cmd_info(info);
    } catch (const mfh::Error& e) {
        print_error(std::string(mfh::errc_name(e.code())), e.what());
        return 3;
    } catch (const std::exception& e) {
        print_error("Internal", e.what());
        return 4;
    }
    return 0;
}
