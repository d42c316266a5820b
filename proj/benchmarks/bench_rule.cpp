#include <benchmark/benchmark.h>

#include "cps/substitution.hpp"

using namespace cps;

namespace {

void BM_DeriveFibonacci(benchmark::State& state) {
  Scheme f = Scheme::build(IntMatrix{{1, 1}, {1, 0}});
  Window w = Window::single(Region::interval(FieldScalar(0), f.star(IntVector{-1, 1})[0]));
  RuleOptions opts;
  opts.allow_fast = state.range(0) == 1;
  for (auto _ : state) benchmark::DoNotOptimize(derive_rule(f, w, 2, opts));
}
BENCHMARK(BM_DeriveFibonacci)->Arg(1)->Arg(0)->ArgName("fast")->Unit(benchmark::kMillisecond);

void BM_DeriveOctagon(benchmark::State& state) {
  Scheme ab = Scheme::build(IntMatrix{{1, 1, 0, -1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {-1, 0, 1, 1}});
  RationalVector half(4, Rational(-1, 2));
  Window w = Window::single(canonical_window(ab).translate(ab.star(half)));
  for (auto _ : state) benchmark::DoNotOptimize(derive_rule(ab, w, 1));
}
BENCHMARK(BM_DeriveOctagon)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
