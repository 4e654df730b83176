#include "mfh/sync.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mfh/numtheory.hpp"
#include "mfh/spectral.hpp"

namespace mfh::sync {

namespace {

struct WindowPeaks {
    dsp::Peak x;
    dsp::Peak y;
};

cf64 derotation(std::int64_t freq_bins, std::int64_t index, std::int64_t p1) {
    const auto turns = nt::mod_reduce(freq_bins * nt::mod_reduce(index, p1), p1);
    const double angle = -kTwoPi * static_cast<double>(turns) / static_cast<double>(p1);
    return {std::cos(angle), std::sin(angle)};
}

// |<r[start .. start+P1), ref .* offset>| with the offset removed.
double matched_magnitude(std::span<const cf64> stream, std::size_t start, const hop::Symbol& ref,
                         std::int64_t freq_bins, std::int64_t p1) {
    cf64 acc{};
    for (std::size_t n = 0; n < ref.size(); ++n) {
        acc += stream[start + n] * std::conj(ref.samples[n]) *
               derotation(freq_bins, static_cast<std::int64_t>(n), p1);
    }
    return std::abs(acc);
}

}  // namespace

PilotConfig::PilotConfig(std::int64_t p1, std::int64_t root)
    : p1_(p1), root_x_(root), root_y_(p1 - root), inv_diff_(0) {
    if (!nt::is_prime(p1) || p1 < 3) {
        throw Error(Errc::NotPrime, "pilot length " + std::to_string(p1) + " is not an odd prime");
    }
    if (root < 1 || root > p1 - 1) {
        throw Error(Errc::BadRoot, "pilot root " + std::to_string(root) + " outside [1, " +
                                       std::to_string(p1 - 1) + "]");
    }
    inv_diff_ = nt::inv_mod(root_x_ - root_y_, p1_);
}

std::array<hop::Symbol, 2> build_pilot(const PilotConfig& cfg) {
    return {hop::zc_closed_form(cfg.p1(), cfg.root_x()), hop::zc_closed_form(cfg.p1(), cfg.root_y())};
}

ComplexVec sum_cache_update(std::span<const cf64> prev, std::span<const cf64> cur) {
    if (prev.size() != cur.size()) {
        throw Error(Errc::SizeMismatch, "sum cache length " + std::to_string(prev.size()) +
                                            " != window length " + std::to_string(cur.size()));
    }
    ComplexVec out(cur.size());
    for (std::size_t n = 0; n < cur.size(); ++n) out[n] = prev[n] + cur[n];
    return out;
}

RootPeaks dual_root_correlate(std::span<const cf64> summed, const PilotConfig& cfg) {
    const auto pilots = build_pilot(cfg);
    return {dsp::peak_search(dsp::freq_correlation(summed, pilots[0].samples)),
            dsp::peak_search(dsp::freq_correlation(summed, pilots[1].samples))};
}

Estimate solve_time_freq(std::int64_t px, std::int64_t py, const PilotConfig& cfg) {
    const auto p1 = cfg.p1();
    Estimate est;
    est.time_offset = nt::mod_reduce((py - px) * cfg.inv_root_diff(), p1);
    const auto from_x = nt::mod_reduce(px + cfg.root_x() * est.time_offset, p1);
    const auto from_y = nt::mod_reduce(py + cfg.root_y() * est.time_offset, p1);
    if (from_x != from_y) {
        throw Error(Errc::InconsistentPeaks, "offset " + std::to_string(from_x) + " from root " +
                                                 std::to_string(cfg.root_x()) + " vs " +
                                                 std::to_string(from_y) + " from root " +
                                                 std::to_string(cfg.root_y()));
    }
    est.freq_offset = nt::center_signed(from_x, p1);
    return est;
}

StreamEstimate estimate_stream(std::span<const cf64> samples, const PilotConfig& cfg,
                               double threshold) {
    const auto window = static_cast<std::size_t>(cfg.p1());
    const std::size_t windows = (samples.size() + window - 1) / window;
    ComplexVec padded(samples.begin(), samples.end());
    padded.resize(windows * window, cf64{});
    const std::span<const cf64> stream(padded);

    const auto pilots = build_pilot(cfg);
    if (windows < 2) throw Error(Errc::NotDetected, "stream shorter than two pilot windows");
    std::vector<WindowPeaks> peaks;
    peaks.reserve(windows);

    // Candidate w pairs the Rx peak of sum(w-2, w-1) with the Ry peak of
    // sum(w-1, w). The threshold is applied later on the aligned windows,
    // where the noise floor is not doubled by the summation.
    std::size_t best_w = 0;
    double best_metric = -1.0;
    ComplexVec prev(window, cf64{});
    for (std::size_t w = 0; w < windows; ++w) {
        const auto cur = stream.subspan(w * window, window);
        const auto summed = sum_cache_update(prev, cur);
        prev.assign(cur.begin(), cur.end());
        peaks.push_back({dsp::peak_search(dsp::freq_correlation(summed, pilots[0].samples)),
                         dsp::peak_search(dsp::freq_correlation(summed, pilots[1].samples))});
        if (w == 0) continue;
        const double metric = std::min(peaks[w - 1].x.magnitude, peaks[w].y.magnitude);
        if (metric > best_metric) {
            best_metric = metric;
            best_w = w;
        }
    }

    StreamEstimate result;
    result.estimate = solve_time_freq(static_cast<std::int64_t>(peaks[best_w - 1].x.index),
                                      static_cast<std::int64_t>(peaks[best_w].y.index), cfg);
    result.estimate.peak_x = peaks[best_w - 1].x.magnitude;
    result.estimate.peak_y = peaks[best_w].y.magnitude;

    const auto offset = static_cast<std::size_t>(result.estimate.time_offset);
    double best_match = -1.0;
    for (std::size_t k = best_w >= 3 ? best_w - 3 : 0; k < best_w; ++k) {
        const std::size_t start = k * window + offset;
        if (start + 2 * window > stream.size()) continue;
        const double match =
            matched_magnitude(stream, start, pilots[0], result.estimate.freq_offset, cfg.p1()) +
            matched_magnitude(stream, start + window, pilots[1], result.estimate.freq_offset, cfg.p1());
        if (match > best_match) {
            best_match = match;
            result.frame_start = start;
        }
    }
    if (best_match < 0.0) {
        throw Error(Errc::NotDetected, "pilot pair does not fit inside the stream");
    }

    const auto start = result.frame_start;
    const auto ratio_x = dsp::peak_search(dsp::freq_correlation(stream.subspan(start, window), pilots[0].samples)).peak_to_mean;
    const auto ratio_y = dsp::peak_search(dsp::freq_correlation(stream.subspan(start + window, window), pilots[1].samples)).peak_to_mean;
    if (ratio_x < threshold || ratio_y < threshold) {
        throw Error(Errc::NotDetected, "pilot peak-to-mean " + std::to_string(std::min(ratio_x, ratio_y)) +
                                           " below threshold " + std::to_string(threshold));
    }
    return result;
}

ComplexVec compensate(std::span<const cf64> samples, std::size_t start, std::int64_t freq_bins,
                      std::int64_t p1) {
    if (start >= samples.size()) return {};
    ComplexVec out(samples.size() - start);
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = samples[start + n] * derotation(freq_bins, static_cast<std::int64_t>(start + n), p1);
    }
    return out;
}

ComplexVec compensate(std::span<const cf64> samples, const StreamEstimate& est, std::int64_t p1) {
    return compensate(samples, est.frame_start, est.estimate.freq_offset, p1);
}

}  // namespace mfh::sync
