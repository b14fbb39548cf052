// Serial reference vs OpenMP kernel on the two hot scans: central values and the log-majorant.
// Thread count is the benchmark argument; results are checked for equality before timing.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <iostream>

#include "twistlab/arith.hpp"
#include "twistlab/kernels.hpp"
#include "twistlab/proxy.hpp"
#include "twistlab/registry.hpp"

using namespace twistlab;

namespace {

constexpr i64 kD = 2000;

struct Fixture {
  HeckeForm form;
  std::vector<Discriminant> ds;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    FormRegistry reg;
    const AfeParams afe;
    Fixture out{reg.get("11a1", required_table_limit(2, 11, 2 * kD, afe)), {}};
    for (const auto& d : enumerate_family(kD, 1, 1, 88).members) out.ds.push_back(d);
    return out;
  }();
  return f;
}

void check_agreement() {
  const auto& f = fixture();
  const AfeParams afe;
  set_thread_count(4);
  const auto a = central_values(f.form, f.ds, afe);
  const auto b = central_values_serial(f.form, f.ds, afe);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].value != b[i].value) {
      std::cerr << "parallel and serial central values differ at index " << i << "\n";
      std::exit(1);
    }
}

void BM_central_values_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(central_values_serial(f.form, f.ds, AfeParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.size()));
}

void BM_central_values_parallel(benchmark::State& state) {
  const auto& f = fixture();
  set_thread_count(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(central_values(f.form, f.ds, AfeParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.size()));
}

void BM_majorant_serial(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(serial_map(f.ds.size(), [&](std::size_t i) {
      return chandee_majorant(f.form, f.ds[i], static_cast<double>(std::llabs(f.ds[i].d)));
    }));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.size()));
}

void BM_majorant_parallel(benchmark::State& state) {
  const auto& f = fixture();
  set_thread_count(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(parallel_map(f.ds.size(), [&](std::size_t i) {
      return chandee_majorant(f.form, f.ds[i], static_cast<double>(std::llabs(f.ds[i].d)));
    }));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.ds.size()));
}

}  // namespace

BENCHMARK(BM_central_values_serial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_central_values_parallel)->Arg(1)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_majorant_serial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_majorant_parallel)->Arg(1)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  check_agreement();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
