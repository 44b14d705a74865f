#include <benchmark/benchmark.h>

#include "polarmwd/bgr.hpp"
#include "polarmwd/construction.hpp"
#include "polarmwd/monomial.hpp"

using namespace polarmwd;

namespace {

void BM_MwdSequence(benchmark::State& state) {
  const CodeParams p(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mwd_sequence(p));
}
BENCHMARK(BM_MwdSequence)->DenseRange(6, 14, 2);

void BM_MwdOfSet(benchmark::State& state) {
  const CodeParams p(static_cast<int>(state.range(0)));
  const auto set = information_set_from_sequence(mwd_sequence(p), p.length() / 2);
  for (auto _ : state) benchmark::DoNotOptimize(mwd_of(set));
}
BENCHMARK(BM_MwdOfSet)->DenseRange(6, 12, 2);

void BM_GaMeans(benchmark::State& state) {
  const CodeParams p(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ga_llr_means(p, 2.0, 0.5));
}
BENCHMARK(BM_GaMeans)->DenseRange(6, 12, 2);

void BM_ChannelEntropies(benchmark::State& state) {
  const auto ga = ga_llr_means(CodeParams(static_cast<int>(state.range(0))), 2.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(channel_entropies(ga));
}
BENCHMARK(BM_ChannelEntropies)->DenseRange(6, 12, 2);

void BM_BgrMwd(benchmark::State& state) {
  BgrConfig cfg;
  cfg.params = CodeParams(static_cast<int>(state.range(0)));
  cfg.k = cfg.params.length() * 3 / 4;
  cfg.list_size = 32;
  cfg.design_snr_db = 2.5;
  for (auto _ : state) benchmark::DoNotOptimize(bgr_mwd(cfg));
}
BENCHMARK(BM_BgrMwd)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace
