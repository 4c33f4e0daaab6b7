#include <benchmark/benchmark.h>

#include "funk/corpus.hpp"
#include "funk/driver.hpp"
#include "funk/erasure.hpp"
#include "funk/generate.hpp"
#include "funk/machine.hpp"
#include "funk/oracle.hpp"
#include "funk/regions.hpp"

namespace {

const funk::Compiled& workload(int n) {
  static std::map<int, funk::Compiled> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, funk::compile_source(funk::tailcall_lists_source(n),
                                               "<bench>"))
             .first;
  return it->second;
}

void BM_frontend_and_check(benchmark::State& state) {
  std::string src = funk::tailcall_lists_source(50);
  for (auto _ : state)
    benchmark::DoNotOptimize(funk::compile_source(src, "<bench>"));
}
BENCHMARK(BM_frontend_and_check);

void BM_machine_run(benchmark::State& state) {
  const funk::Compiled& c = workload(int(state.range(0)));
  funk::RunOptions opts;
  opts.fuel = 100000000;
  for (auto _ : state) benchmark::DoNotOptimize(funk::run(c.checked.program, opts));
}
BENCHMARK(BM_machine_run)->Arg(25)->Arg(50);

void BM_machine_run_with_oracle(benchmark::State& state) {
  const funk::Compiled& c = workload(int(state.range(0)));
  funk::RunOptions opts;
  opts.fuel = 100000000;
  opts.per_state = funk::state_typing_oracle(c.checked.type);
  for (auto _ : state) benchmark::DoNotOptimize(funk::run(c.checked.program, opts));
}
BENCHMARK(BM_machine_run_with_oracle)->Arg(10);

void BM_erased_run(benchmark::State& state) {
  const funk::Compiled& c = workload(int(state.range(0)));
  funk::erased::Program e = funk::erase(c.checked.program);
  for (auto _ : state)
    benchmark::DoNotOptimize(funk::erased::run(e, 100000000));
}
BENCHMARK(BM_erased_run)->Arg(25)->Arg(50);

void BM_region_translate(benchmark::State& state) {
  const funk::Compiled& c = workload(50);
  for (auto _ : state)
    benchmark::DoNotOptimize(funk::region::translate(c.checked));
}
BENCHMARK(BM_region_translate);

void BM_region_run(benchmark::State& state) {
  const funk::Compiled& c = workload(int(state.range(0)));
  funk::region::TermPtr t = funk::region::translate(c.checked);
  for (auto _ : state)
    benchmark::DoNotOptimize(funk::region::run(t, 100000000));
}
BENCHMARK(BM_region_run)->Arg(25);

void BM_generate_and_check(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    funk::Program p = funk::generate_program(seed++, 40);
    benchmark::DoNotOptimize(funk::check_program(p));
  }
}
BENCHMARK(BM_generate_and_check);

}  // namespace

BENCHMARK_MAIN();
