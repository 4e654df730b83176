#include "mfh/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfh/modem.hpp"
#include "mfh/numtheory.hpp"

namespace mfh::frame {

FrameConfig::FrameConfig(int sf, std::int64_t root, std::optional<hop::HoppingPattern> key,
                         std::vector<std::int64_t> key_order_roots)
    : sf_(sf), p_(0), p1_(0), root_(root), key_(std::move(key)),
      key_order_roots_(std::move(key_order_roots)) {
    if (sf_ < 2 || sf_ > 16) {
        throw Error(Errc::ConfigInvalid, "spreading factor " + std::to_string(sf_) + " outside [2, 16]");
    }
    p_ = nt::smallest_prime_above(std::int64_t{1} << sf_);
    p1_ = nt::smallest_prime_above(std::int64_t{1} << (sf_ + 1));
    if (root_ < 1 || root_ > std::min(p_, p1_) - 1) {
        throw Error(Errc::BadRoot, "root " + std::to_string(root_) + " outside [1, " +
                                       std::to_string(std::min(p_, p1_) - 1) + "]");
    }
    if (key_ && key_->modulus() != p_) {
        throw Error(Errc::SizeMismatch, "key length " + std::to_string(key_->modulus()) +
                                            " != P " + std::to_string(p_));
    }
    for (const auto k : key_order_roots_) {
        if (k < 1 || k > p_ - 1) {
            throw Error(Errc::BadRoot, "key order root " + std::to_string(k) + " outside [1, " +
                                           std::to_string(p_ - 1) + "]");
        }
    }
}

std::optional<hop::HoppingPattern> FrameConfig::key_for_symbol(std::size_t index) const {
    if (!key_) return std::nullopt;
    if (key_order_roots_.empty()) return key_;
    const auto k = key_order_roots_[index % key_order_roots_.size()];
    return hop::key_permuted_pattern(*key_, k, p_);
}

std::vector<std::int64_t> pack_bits(std::span<const std::uint8_t> bits, int sf) {
    std::vector<std::int64_t> values((bits.size() + static_cast<std::size_t>(sf) - 1) /
                                     static_cast<std::size_t>(sf));
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::int64_t v = 0;
        for (int b = 0; b < sf; ++b) {
            const std::size_t pos = i * static_cast<std::size_t>(sf) + static_cast<std::size_t>(b);
            v = (v << 1) | (pos < bits.size() ? (bits[pos] & 1) : 0);
        }
        values[i] = v;
    }
    return values;
}

Bits unpack_bits(std::span<const std::int64_t> values, int sf) {
    Bits bits;
    bits.reserve(values.size() * static_cast<std::size_t>(sf));
    for (const auto v : values) {
        for (int b = sf - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    }
    return bits;
}

ComplexVec build_frame(const FrameConfig& cfg, std::span<const std::uint8_t> bits) {
    const auto values = pack_bits(bits, cfg.sf());
    const auto count = static_cast<std::int64_t>(values.size());
    if (count > cfg.max_payload_symbols()) {
        throw Error(Errc::PayloadTooLarge, std::to_string(count) + " symbols exceed sync field limit " +
                                               std::to_string(cfg.max_payload_symbols()));
    }
    ComplexVec out;
    out.reserve(cfg.frame_length(values.size()));
    for (const auto& pilot : sync::build_pilot(cfg.pilot())) {
        out.insert(out.end(), pilot.samples.begin(), pilot.samples.end());
    }
    const auto sync_symbol = modem::modulate_cfs(hop::linear_pattern(cfg.p1(), cfg.root()), count);
    out.insert(out.end(), sync_symbol.samples.begin(), sync_symbol.samples.end());

    const auto data_pattern = hop::linear_pattern(cfg.p(), cfg.root());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const auto key = cfg.key_for_symbol(j);
        const auto symbol = key ? modem::modulate_secure(cfg.p(), cfg.root(), values[j], *key)
                                : modem::modulate_cfs(data_pattern, values[j]);
        out.insert(out.end(), symbol.samples.begin(), symbol.samples.end());
    }
    return out;
}

ParsedFrame parse_frame(std::span<const cf64> stream, const FrameConfig& cfg) {
    ParsedFrame parsed;
    parsed.estimate = sync::estimate_stream(stream, cfg.pilot());
    const auto aligned = sync::compensate(stream, parsed.estimate, cfg.p1());
    const auto p1 = static_cast<std::size_t>(cfg.p1());
    const auto p = static_cast<std::size_t>(cfg.p());
    if (aligned.size() < 3 * p1) {
        throw Error(Errc::SyncFieldInvalid, "stream ends before the sync symbol");
    }

    const auto sync_ref = hop::synthesize(hop::linear_pattern(cfg.p1(), cfg.root()));
    const auto sync_result =
        modem::demodulate_cfs(std::span<const cf64>(aligned).subspan(2 * p1, p1), sync_ref);
    parsed.sync_value = sync_result.data;
    parsed.sync = {sync_result.data, sync_result.peak_magnitude, sync_result.peak_to_mean};
    if (sync_result.data > cfg.max_payload_symbols()) {
        throw Error(Errc::SyncFieldInvalid, "sync value " + std::to_string(sync_result.data) +
                                                " exceeds field limit " +
                                                std::to_string(cfg.max_payload_symbols()));
    }
    const auto count = static_cast<std::size_t>(sync_result.data);
    if (3 * p1 + count * p > aligned.size()) {
        throw Error(Errc::SyncFieldInvalid, "sync announces " + std::to_string(count) +
                                                " symbols but the stream is too short");
    }

    const auto plain_ref = hop::synthesize(hop::linear_pattern(cfg.p(), cfg.root()));
    const std::int64_t value_mask = (std::int64_t{1} << cfg.sf()) - 1;
    for (std::size_t j = 0; j < count; ++j) {
        const auto key = cfg.key_for_symbol(j);
        const auto ref = key ? modem::make_sum_reference(cfg.p(), cfg.root(), *key) : plain_ref;
        const auto rx = std::span<const cf64>(aligned).subspan(3 * p1 + j * p, p);
        const auto result = modem::demodulate_cfs(rx, ref);
        parsed.symbols.push_back({result.data, result.peak_magnitude, result.peak_to_mean});
        parsed.values.push_back(result.data & value_mask);
    }
    parsed.bits = unpack_bits(parsed.values, cfg.sf());
    return parsed;
}

double sensitivity_dbm(double noise_figure_db, double bandwidth_hz, double ebn0_db, int sf,
                       std::int64_t p) {
    return -174.0 + noise_figure_db + 10.0 * std::log10(bandwidth_hz) + ebn0_db +
           10.0 * std::log10(static_cast<double>(sf) / static_cast<double>(p));
}

}  // namespace mfh::frame
