// Serial reference walk against the OpenMP kernel at several worker counts.
#include <benchmark/benchmark.h>

#include "infolaw/enumerator.hpp"

using namespace infolaw;

namespace {

const BitString kCondition = BitString::from_digits("0110");

void BM_serial(benchmark::State& state) {
  const auto& spec = machine(MachineId::upm1);
  const auto len = static_cast<unsigned>(state.range(0));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto r = enumerate_serial(spec, kCondition, len, 4096);
    nodes = r.nodes;
    benchmark::DoNotOptimize(r.slice.k.size());
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_parallel(benchmark::State& state) {
  const auto& spec = machine(MachineId::upm1);
  const auto len = static_cast<unsigned>(state.range(0));
  EnumerateOptions opts;
  opts.workers = static_cast<unsigned>(state.range(1));
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    const auto r = enumerate(spec, kCondition, len, 4096, opts);
    nodes = r.nodes;
    benchmark::DoNotOptimize(r.slice.k.size());
  }
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes), benchmark::Counter::kIsIterationInvariantRate);
}

}  // namespace

BENCHMARK(BM_serial)->Arg(18)->Arg(20)->Arg(22)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_parallel)
    ->ArgsProduct({{18, 20, 22}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
