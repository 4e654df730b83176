#include "doctest.h"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfh/experiment.hpp"
#include "mfh/parallel.hpp"
#include "mfh/theory.hpp"

using namespace mfh;
using nlohmann::json;

namespace {

std::string csv(const std::vector<exp::Row>& rows) {
    std::ostringstream out;
    exp::write_csv(out, rows);
    return out.str();
}

double metric(const std::vector<exp::Row>& rows, const std::string& name) {
    for (const auto& r : rows) {
        if (r.metric == name) return std::stod(r.value);
    }
    FAIL("metric not found: " << name);
    return 0.0;
}

std::string config_error(const json& j) {
    try {
        exp::config_from_json(j);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConfigInvalid);
        return e.what();
    }
    return "";
}

// Closed-form noncoherent M-ary orthogonal SER (alternating binomial sum).
double closed_form_ser(int m, double es_n0) {
    double total = 0.0, binom = 1.0;
    for (int k = 1; k < m; ++k) {
        binom = binom * (m - k) / k;
        total += (k % 2 == 1 ? 1.0 : -1.0) * binom / (k + 1) * std::exp(-es_n0 * k / (k + 1));
    }
    return total;
}

}  // namespace

TEST_CASE("noncoherent orthogonal oracle") {
    for (double snr : {0.5, 2.0, 8.0}) {
        CHECK(theory::noncoherent_orthogonal_ser(2, snr) == doctest::Approx(0.5 * std::exp(-snr / 2.0)).epsilon(1e-6));
        CHECK(theory::noncoherent_orthogonal_ser(8, snr) == doctest::Approx(closed_form_ser(8, snr)).epsilon(1e-6));
        CHECK(theory::noncoherent_orthogonal_ser(16, snr) == doctest::Approx(closed_form_ser(16, snr)).epsilon(1e-5));
    }
    CHECK(theory::noncoherent_orthogonal_ser(131, 1e-6) == doctest::Approx(130.0 / 131.0).epsilon(1e-3));
    const double x = theory::esn0_db_at_ser(131, 0.1);
    CHECK(theory::noncoherent_orthogonal_ser(131, 131.0 * std::pow(10.0, x / 10.0)) == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("parallel map keeps order and rethrows") {
    const auto squares = parallel_map(100, 4, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == i * i);
    CHECK_THROWS_AS(parallel_map(10, 3,
                                 [](std::size_t i) {
                                     if (i == 7) throw Error(Errc::ConfigInvalid, "x");
                                     return i;
                                 }),
                    Error);
}

TEST_CASE("config parsing") {
    const auto cfg = exp::config_from_json(json::parse(R"({
        "experiment": "demod-sweep", "sf": 7, "pattern": "random", "modulation": "cts",
        "esn0_db": {"start": -15, "stop": 0, "step": 5}, "trials": 20, "seed": 9,
        "output": "sweep.csv"})"));
    CHECK(cfg.kind == exp::Kind::DemodSweep);
    CHECK(cfg.esn0_db == std::vector<double>{-15, -10, -5, 0});
    CHECK(cfg.trials == 20);
    CHECK(cfg.seed == 9);
    CHECK(cfg.output == "sweep.csv");

    const auto loop = exp::config_from_json(json::parse(R"({
        "experiment": "frame-loopback", "channel": {"delay_samples": 40, "esn0_db": "noiseless", "cfo_bins": -3}})"));
    CHECK(loop.channel.delay_samples == 40);
    CHECK_FALSE(loop.channel.esn0_db.has_value());
    CHECK(loop.cfo_bins == -3);

    CHECK(config_error(json::parse(R"({"experiment": "nope"})")).find("'experiment'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "correlation", "p": 18})")).find("'p'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "correlation", "roots": [3]})")).find("'roots'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "multiuser", "roots": [3, 3]})")).find("'roots'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "demod-sweep"})")).find("'esn0_db'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "demod-sweep", "esn0_db": 0, "trials": 0})")).find("'trials'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "correlation", "sf": "seven"})")).find("'sf'") != std::string::npos);
    CHECK(config_error(json::parse(R"({"experiment": "correlation", "roots": [3, 200]})")).find("'roots'") != std::string::npos);
    CHECK(config_error(json::parse(R"([1, 2])")) != "");
    CHECK_THROWS_AS(exp::load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("correlation experiment at P = 17") {
    exp::ExperimentConfig cfg;
    cfg.kind = exp::Kind::Correlation;
    cfg.p = 17;
    const auto rows = exp::run(cfg);
    CHECK(metric(rows, "auto_peak") == doctest::Approx(17.0).epsilon(1e-9));
    CHECK(metric(rows, "auto_sidelobe_max") < 1e-6);
    CHECK(metric(rows, "cross_min") == doctest::Approx(4.123105626).epsilon(1e-8));
    CHECK(metric(rows, "cross_max") == doctest::Approx(4.123105626).epsilon(1e-8));
    std::size_t lag_rows = 0;
    for (const auto& r : rows) lag_rows += r.metric == "cross_mag";
    CHECK(lag_rows == 17);
    CHECK(csv(rows).rfind("experiment,params,metric,value\n", 0) == 0);
}

TEST_CASE("time-frequency grid at P1 = 31") {
    exp::ExperimentConfig cfg;
    cfg.kind = exp::Kind::TimeFreqGrid;
    cfg.p1 = 31;
    cfg.roots = {3};
    cfg.trials = 0;
    const auto rows = exp::run(cfg, 4);
    std::size_t exact = 0, cases = 0;
    for (const auto& r : rows) {
        if (r.metric != "exact") continue;
        ++cases;
        exact += r.value == "true";
    }
    CHECK(cases == 31 * 31);
    CHECK(exact == 31 * 31);
    CHECK(metric(rows, "exact_fraction") == 1.0);
}

TEST_CASE("demod sweep tracks theory") {
    exp::ExperimentConfig cfg;
    cfg.kind = exp::Kind::DemodSweep;
    cfg.esn0_db = {-15.0, -12.0};
    cfg.trials = 3000;
    const auto rows = exp::run(cfg, 4);
    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
        const double ser = std::stod(rows[i + 1].value);
        const double theory = std::stod(rows[i + 2].value);
        CHECK(rows[i + 1].metric == "ser");
        CHECK(std::abs(ser - theory) < 0.05);
    }
}

TEST_CASE("outputs do not depend on thread count") {
    std::vector<exp::ExperimentConfig> configs(4);
    configs[0].kind = exp::Kind::DemodSweep;
    configs[0].esn0_db = {-12.0};
    configs[0].trials = 300;
    configs[1].kind = exp::Kind::MultiUser;
    configs[1].p = 131;
    configs[1].esn0_db = {-5.0};
    configs[1].trials = 200;
    configs[2].kind = exp::Kind::Confidentiality;
    configs[2].trials = 3;
    configs[3].kind = exp::Kind::FrameLoopback;
    configs[3].trials = 20;
    configs[3].channel.delay_samples = 77;
    configs[3].channel.esn0_db = -6.0;
    configs[3].cfo_bins = 5;
    for (auto& cfg : configs) {
        cfg.seed = 2024;
        const auto one = csv(exp::run(cfg, 1));
        CHECK(one == csv(exp::run(cfg, 1)));
        CHECK(one == csv(exp::run(cfg, 5)));
        cfg.seed = 2025;
        if (cfg.kind == exp::Kind::DemodSweep) CHECK(one != csv(exp::run(cfg, 1)));
    }
}

TEST_CASE("multiuser, confidentiality and loopback sanity") {
    exp::ExperimentConfig mu;
    mu.kind = exp::Kind::MultiUser;
    mu.p = 257;
    mu.trials = 300;
    const auto mu_rows = exp::run(mu, 4);
    CHECK(metric(mu_rows, "ser_user1") == 0.0);
    CHECK(metric(mu_rows, "ser_user2") == 0.0);

    exp::ExperimentConfig conf;
    conf.kind = exp::Kind::Confidentiality;
    conf.trials = 20;
    const auto conf_rows = exp::run(conf, 4);
    CHECK(metric(conf_rows, "correct_key_symbol_errors") == 0.0);
    CHECK(metric(conf_rows, "wrong_key_hit_rate") <= 2.0 / 131.0);
    CHECK(metric(conf_rows, "sum_ref_autocorr_peak") == doctest::Approx(131.0));

    exp::ExperimentConfig loop;
    loop.kind = exp::Kind::FrameLoopback;
    loop.trials = 10;
    loop.channel.delay_samples = 300;
    loop.cfo_bins = -11;
    const auto loop_rows = exp::run(loop, 2);
    CHECK(metric(loop_rows, "frame_ok_fraction") == 1.0);
    CHECK(metric(loop_rows, "bit_errors") == 0.0);
}
