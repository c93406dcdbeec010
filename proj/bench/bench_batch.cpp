#include <benchmark/benchmark.h>

#include "sbc/batch.hpp"
#include "sbc/dsl.hpp"

namespace {

const sbc::Model& counter() {
  static const sbc::Model m = sbc::parse_model(sbc::SourceModel::load(SBC_MODELS_DIR "/counter.sbc").text()).model;
  return m;
}

void BM_BatchParallel(benchmark::State& state) {
  sbc::SeedRange seeds{0, static_cast<std::uint64_t>(state.range(0)) - 1};
  for (auto _ : state) benchmark::DoNotOptimize(sbc::simulate_batch(counter(), "s81", nullptr, seeds, 1000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchSerial(benchmark::State& state) {
  sbc::SeedRange seeds{0, static_cast<std::uint64_t>(state.range(0)) - 1};
  for (auto _ : state) benchmark::DoNotOptimize(sbc::simulate_batch_serial(counter(), "s81", nullptr, seeds, 1000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchParallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchSerial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
