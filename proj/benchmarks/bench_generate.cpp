#include <benchmark/benchmark.h>

#include "cps/pattern.hpp"
#include "cps/substitution.hpp"

using namespace cps;

namespace {

Scheme fibonacci() { return Scheme::build(IntMatrix{{1, 1}, {1, 0}}); }
Scheme ammann_beenker() { return Scheme::build(IntMatrix{{1, 1, 0, -1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {-1, 0, 1, 1}}); }

void BM_GenerateFibonacci(benchmark::State& state) {
  Scheme f = fibonacci();
  Window w = Window::single(Region::interval(FieldScalar(0), f.star(IntVector{-1, 1})[0]));
  Shift t = random_shifts(w, 1, 1).front();
  FieldScalar r(static_cast<long>(state.range(0)));
  std::size_t points = 0;
  for (auto _ : state) {
    PointSet ps = generate(f, w, t, r);
    points = ps.points.size();
    benchmark::DoNotOptimize(ps);
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_GenerateFibonacci)->Arg(100)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GenerateOctagon(benchmark::State& state) {
  Scheme ab = ammann_beenker();
  RationalVector half(4, Rational(-1, 2));
  Window w = Window::single(canonical_window(ab).translate(ab.star(half)));
  Shift t = random_shifts(w, 1, 1).front();
  FieldScalar r(static_cast<long>(state.range(0)));
  std::size_t points = 0;
  for (auto _ : state) {
    PointSet ps = generate(ab, w, t, r);
    points = ps.points.size();
    benchmark::DoNotOptimize(ps);
  }
  state.counters["points"] = static_cast<double>(points);
}
BENCHMARK(BM_GenerateOctagon)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
