#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mfh/channel.hpp"

namespace mfh::exp {

enum class Kind { Correlation, DemodSweep, TimeFreqGrid, MultiUser, Confidentiality, FrameLoopback };

struct ExperimentConfig {
    Kind kind = Kind::Correlation;
    int sf = 7;
    std::int64_t p = 0;   // 0: derived from sf
    std::int64_t p1 = 0;  // 0: derived from sf
    std::vector<std::int64_t> roots{3, 5};
    std::string pattern = "linear";  // demod-sweep: linear | random
    std::string modulation = "cfs";  // demod-sweep: cfs | cts
    std::vector<double> esn0_db;
    std::int64_t trials = 1000;
    std::size_t payload_bits = 70;
    bool use_key = true;
    channel::ChannelSpec channel;  // frame-loopback impairments
    std::int64_t cfo_bins = 0;     // frame-loopback CFO in pilot bins
    std::uint64_t seed = 1;
    std::string output = "results.csv";
};

struct Row {
    std::string experiment;
    std::string params;  // "key=value;key=value"
    std::string metric;
    std::string value;
};

std::string kind_name(Kind kind);

/// Throws ConfigInvalid naming the offending field.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Runs the experiment. Rows are identical for any thread count.
std::vector<Row> run(const ExperimentConfig& cfg, unsigned threads = 1);

void write_csv(std::ostream& out, const std::vector<Row>& rows);

}  // namespace mfh::exp
