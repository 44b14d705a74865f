#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "polarmwd/codec.hpp"
#include "polarmwd/construction.hpp"
#include "polarmwd/simulation.hpp"

using namespace polarmwd;

namespace {

InformationSet half_rate(int n) {
  const CodeParams p(n);
  return information_set_from_sequence(mwd_sequence(p), p.length() / 2);
}

// A fixed pool of noisy frames at 2 dB so decoders see realistic inputs.
std::vector<std::vector<double>> frame_pool(const InformationSet& set, std::size_t count) {
  const auto channel = ChannelModel::make(2.0, 0.5);
  std::vector<std::vector<double>> pool;
  for (std::size_t f = 0; f < count; ++f) pool.push_back(draw_frame(set, channel, frame_seed(7, f)).llrs);
  return pool;
}

void BM_Encode(benchmark::State& state) {
  const auto set = half_rate(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(1);
  Bits info(set.size());
  for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1u);
  for (auto _ : state) benchmark::DoNotOptimize(encode(set, info));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.params().length()));
}
BENCHMARK(BM_Encode)->DenseRange(6, 12, 2);

void BM_ScDecode(benchmark::State& state) {
  const auto set = half_rate(static_cast<int>(state.range(0)));
  const auto pool = frame_pool(set, 64);
  ScDecoder sc(set);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sc.decode(pool[i++ % pool.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ScDecode)->DenseRange(6, 12, 2);

void BM_SclDecode(benchmark::State& state) {
  const auto set = half_rate(static_cast<int>(state.range(0)));
  const auto pool = frame_pool(set, 64);
  SclDecoder scl(set, static_cast<std::size_t>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(scl.decode(pool[i++ % pool.size()]));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SclDecode)->ArgsProduct({{7, 10}, {1, 8, 32}});

}  // namespace
