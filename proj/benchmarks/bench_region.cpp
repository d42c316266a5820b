#include <benchmark/benchmark.h>

#include "cps/region.hpp"
#include "cps/substitution.hpp"

using namespace cps;

namespace {

Region octagon() {
  Scheme ab = Scheme::build(IntMatrix{{1, 1, 0, -1}, {1, 1, 1, 0}, {0, 1, 1, 1}, {-1, 0, 1, 1}});
  RationalVector half(4, Rational(-1, 2));
  return canonical_window(ab).translate(ab.star(half));
}

// Octagon against n translated copies of itself.
void BM_UniteTranslates(benchmark::State& state) {
  Region base = octagon();
  std::vector<Region> copies;
  for (long i = 0; i < state.range(0); ++i) {
    copies.push_back(base.translate({FieldScalar(Rational(i, 7)), FieldScalar(Rational(-i, 11))}));
  }
  for (auto _ : state) {
    Region acc = base;
    for (const auto& c : copies) acc = acc.unite(c);
    benchmark::DoNotOptimize(acc.measure());
  }
}
BENCHMARK(BM_UniteTranslates)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_IntersectSubtract(benchmark::State& state) {
  Region a = octagon();
  Region b = a.translate({FieldScalar(Rational(1, 3)), FieldScalar(Rational(1, 5))});
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.intersect(b).measure());
    benchmark::DoNotOptimize(a.subtract(b).measure());
  }
}
BENCHMARK(BM_IntersectSubtract)->Unit(benchmark::kMicrosecond);

}  // namespace
