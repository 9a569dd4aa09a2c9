#include <benchmark/benchmark.h>

#include "jcore/confinement.hpp"
#include "jcore/equivalence.hpp"
#include "jcore/interpreter.hpp"
#include "jcore/program.hpp"

using namespace jcore;

namespace {

std::string corpus(const std::string& f) {
  return std::string(JCORE_CORPUS_DIR) + "/" + f + ".jcore";
}

const ClassTable& observer() {
  static const ClassTable ct = load_program(
      {corpus("observer_base"), corpus("observer_v1"), corpus("observer_client")},
      {"Observable", "Node", ""});
  return ct;
}

// n observables with n nodes each, every node naming one shared observer.
Heap islands(int n) {
  Heap h;
  Location ob{"AnObserver", 0};
  h[ob] = {{"count", Value::integer(0)}};
  std::uint32_t next = 0;
  for (int i = 0; i < n; ++i) {
    Value prev = Value::nil();
    for (int k = 0; k < n; ++k) {
      Location l{"Node", next++};
      h[l] = {{"ob", Value::location(ob)}, {"nxt", prev}};
      prev = Value::location(l);
    }
    h[{"Observable", static_cast<std::uint32_t>(i)}] = {{"fst", prev}};
  }
  return h;
}

void BM_ConfineHeap(benchmark::State& state) {
  Heap h = islands(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(confine_heap(observer(), h));
  state.SetComplexityN(static_cast<std::int64_t>(h.size()));
}
BENCHMARK(BM_ConfineHeap)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_RunObserverClient(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run(observer(), "Main", "main"));
}
BENCHMARK(BM_RunObserverClient);

void BM_RunMonitored(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_with_monitor(observer(), "Main", "main", MonitorMode::Every));
  }
}
BENCHMARK(BM_RunMonitored);

void BM_CanonicalBijection(benchmark::State& state) {
  Heap h = islands(static_cast<int>(state.range(0)));
  GlobalState a{h, {}};
  for (const auto& [l, o] : h) {
    if (l.cls == "Observable") a.store["o" + std::to_string(l.index)] = Value::location(l);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_bijection(observer(), observer(), a, a));
  }
}
BENCHMARK(BM_CanonicalBijection)->RangeMultiplier(2)->Range(2, 32);

}  // namespace
BENCHMARK_MAIN();
