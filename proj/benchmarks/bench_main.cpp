#include <benchmark/benchmark.h>

#include "mfh/channel.hpp"
#include "mfh/hopping.hpp"
#include "mfh/modem.hpp"
#include "mfh/spectral.hpp"
#include "mfh/sync.hpp"

namespace {

mfh::ComplexVec chirp(std::int64_t p) { return mfh::hop::zc_closed_form(p, 3).samples; }

void BM_DftDirect(benchmark::State& state) {
    const auto x = chirp(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mfh::dsp::dft_direct(x));
}
BENCHMARK(BM_DftDirect)->Arg(131)->Arg(257)->Arg(521);

void BM_DftFast(benchmark::State& state) {
    const auto x = chirp(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(mfh::dsp::dft(x));
}
BENCHMARK(BM_DftFast)->Arg(131)->Arg(257)->Arg(521)->Arg(65537);

void BM_DemodulateCfs(benchmark::State& state) {
    const auto p = state.range(0);
    const auto pattern = mfh::hop::linear_pattern(p, 3);
    const auto ref = mfh::hop::synthesize(pattern);
    const auto rx = mfh::modem::modulate_cfs(pattern, p / 2).samples;
    for (auto _ : state) benchmark::DoNotOptimize(mfh::modem::demodulate_cfs(rx, ref));
}
BENCHMARK(BM_DemodulateCfs)->Arg(131)->Arg(257)->Arg(521);

void BM_EstimateStream(benchmark::State& state) {
    const auto p1 = state.range(0);
    const mfh::sync::PilotConfig cfg(p1, 3);
    mfh::ComplexVec stream;
    for (const auto& s : mfh::sync::build_pilot(cfg)) stream.insert(stream.end(), s.samples.begin(), s.samples.end());
    stream.resize(stream.size() + 2 * static_cast<std::size_t>(p1), mfh::cf64{});
    const auto rx = mfh::channel::apply_cfo(mfh::channel::apply_delay(stream, static_cast<std::size_t>(p1 / 3),
                                                                      mfh::channel::DelayMode::Linear),
                                            5.0 / static_cast<double>(p1));
    for (auto _ : state) benchmark::DoNotOptimize(mfh::sync::estimate_stream(rx, cfg));
}
BENCHMARK(BM_EstimateStream)->Arg(31)->Arg(257)->Arg(521);

}  // namespace
BENCHMARK_MAIN();
