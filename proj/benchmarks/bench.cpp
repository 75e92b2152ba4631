#include <benchmark/benchmark.h>

#include <numeric>

#include "cech/descent.hpp"
#include "cech/gerbe.hpp"
#include "cech/torsor.hpp"

namespace {

using namespace cech;

FinitePoset circle4() {
  return FinitePoset({"a", "b", "c", "d"},
                     {{"c", "a"}, {"c", "b"}, {"d", "a"}, {"d", "b"}});
}

// boundary of the 3-simplex: all pairs and triples inhabited
AbstractNerve sphere2() {
  std::vector<std::vector<int>> t;
  for (int i = 0; i < 4; ++i) t.push_back({i});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) t.push_back({i, j});
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) t.push_back({i, j, k});
  return AbstractNerve({"A", "B", "C", "D"}, t, 4);
}

AbstractNerve triangle() {
  return AbstractNerve({"U", "V", "W"},
                       {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}, 3);
}

BandPresentation constant_band(const AbstractNerve& nv, const FiniteGroup& k) {
  std::vector<int> id(k.order());
  std::iota(id.begin(), id.end(), 0);
  std::map<std::pair<int, int>, std::vector<std::vector<int>>> lambda;
  for (const auto& p : nv.tuples(2)) lambda[{p[0], p[1]}] = {id};
  return BandPresentation(nv, std::vector<FiniteGroup>(nv.index_count(), k),
                          std::move(lambda));
}

constexpr long long kBudget = 10'000'000;

void BM_AutQ8(benchmark::State& state) {
  FiniteGroup q8 = quaternion8();
  for (auto _ : state) benchmark::DoNotOptimize(automorphisms(q8));
}
BENCHMARK(BM_AutQ8);

void BM_H1TriangleS3(benchmark::State& state) {
  AbstractNerve nv = triangle();
  FiniteGroup s3 = symmetric3();
  for (auto _ : state) benchmark::DoNotOptimize(h1(nv, s3, kBudget));
}
BENCHMARK(BM_H1TriangleS3);

void BM_H1ColimCircleZ2(benchmark::State& state) {
  FinitePoset x = circle4();
  GroupPresheaf g = constant_group_sheaf(x, cyclic_group(2));
  for (auto _ : state) benchmark::DoNotOptimize(h1_colim(g, kBudget));
}
BENCHMARK(BM_H1ColimCircleZ2);

void BM_H2TetrahedronZ2(benchmark::State& state) {
  BandPresentation band = constant_band(sphere2(), cyclic_group(2));
  for (auto _ : state)
    benchmark::DoNotOptimize(h2(band, kBudget, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_H2TetrahedronZ2)->Arg(1)->Arg(4);

void BM_H2TetrahedronS3(benchmark::State& state) {
  BandPresentation band = constant_band(sphere2(), symmetric3());
  for (auto _ : state)
    benchmark::DoNotOptimize(h2(band, kBudget, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_H2TetrahedronS3)->Arg(1)->Arg(4);

void BM_SheafifyConstantCircle(benchmark::State& state) {
  FinitePoset x = circle4();
  Presheaf p = constant_presheaf(x, {"s0", "s1", "s2"});
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(p));
}
BENCHMARK(BM_SheafifyConstantCircle);

void BM_StackifyCircleZ2(benchmark::State& state) {
  FinitePoset x = circle4();
  GroupoidPresheaf f = one_object_presheaf(constant_group_sheaf(x, cyclic_group(2)));
  for (auto _ : state) benchmark::DoNotOptimize(stackify(f, 5'000'000));
}
BENCHMARK(BM_StackifyCircleZ2);

}  // namespace

BENCHMARK_MAIN();
