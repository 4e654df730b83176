#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mfh/hopping.hpp"
#include "mfh/modem.hpp"
#include "mfh/types.hpp"

namespace mfh::sync {

/// Pilot pair of length-P1 linear symbols with roots R and P1 - R.
class PilotConfig {
public:
    /// Throws NotPrime / BadRoot.
    PilotConfig(std::int64_t p1, std::int64_t root);

    std::int64_t p1() const noexcept { return p1_; }
    std::int64_t root_x() const noexcept { return root_x_; }
    std::int64_t root_y() const noexcept { return root_y_; }
    /// inv_mod(Rx - Ry, P1)
    std::int64_t inv_root_diff() const noexcept { return inv_diff_; }

private:
    std::int64_t p1_;
    std::int64_t root_x_;
    std::int64_t root_y_;
    std::int64_t inv_diff_;
};

/// Peak positions follow Px = mod(Fo - Rx*To, P1), Py = mod(Fo - Ry*To, P1)
/// for a circular delay To and an offset of Fo pilot bins.
inline constexpr int kPeakSign = -1;

struct Estimate {
    std::int64_t time_offset = 0;  // samples, [0, P1)
    std::int64_t freq_offset = 0;  // pilot bins, [-(P1-1)/2, (P1-1)/2]
    double peak_x = 0.0;
    double peak_y = 0.0;
};

struct RootPeaks {
    dsp::Peak x;
    dsp::Peak y;
};

std::array<hop::Symbol, 2> build_pilot(const PilotConfig& cfg);

/// Elementwise prev + cur. Throws SizeMismatch.
ComplexVec sum_cache_update(std::span<const cf64> prev, std::span<const cf64> cur);

/// Frequency-domain correlation peaks of one summed window against both roots.
RootPeaks dual_root_correlate(std::span<const cf64> summed, const PilotConfig& cfg);

/// Solves the two peak equations for delay and offset. The offset obtained
/// from each root must agree; Throws InconsistentPeaks otherwise.
Estimate solve_time_freq(std::int64_t px, std::int64_t py, const PilotConfig& cfg);

struct StreamEstimate {
    Estimate estimate;
    /// Index of the first pilot sample in the stream.
    std::size_t frame_start = 0;
};

/// Slides P1-sample windows through the stream keeping a two-window sum
/// cache. The Rx root is read from one summed window and the Ry root from
/// the next; the strongest pair fixes (To mod P1, Fo), and the absolute
/// frame start is resolved by a direct matched-filter check of the pilot
/// pair at the candidate offsets. Detection requires peak-to-mean >=
/// threshold for both roots on the aligned pilot windows. Throws NotDetected.
StreamEstimate estimate_stream(std::span<const cf64> samples, const PilotConfig& cfg,
                               double threshold = modem::kDetectionThreshold);

/// Drops everything before `start` and removes an offset of `freq_bins`/P1
/// cycles per sample, with phase referenced to the original stream index.
ComplexVec compensate(std::span<const cf64> samples, std::size_t start, std::int64_t freq_bins,
                      std::int64_t p1);

/// Estimate-based overload: start = frame start carried by the estimate.
ComplexVec compensate(std::span<const cf64> samples, const StreamEstimate& est, std::int64_t p1);

}  // namespace mfh::sync
