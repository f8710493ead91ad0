#include "qhp/birational.hpp"
#include "qhp/fibration.hpp"
#include "qhp/invariants.hpp"
#include "qhp/surfaces.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace qhp;

namespace {

Chain random_admissible_chain(std::mt19937& rng, std::size_t len) {
  Chain c;
  for (std::size_t i = 0; i < len; ++i)
    c.entries.push_back(2 + static_cast<std::int64_t>(rng() % 5));
  return c;
}

void BM_Discriminant(benchmark::State& state) {
  std::mt19937 rng(7);
  Chain c = random_admissible_chain(rng, static_cast<std::size_t>(state.range(0)));
  WeightedGraph g = c.to_graph();
  for (auto _ : state) benchmark::DoNotOptimize(discriminant(g));
}
BENCHMARK(BM_Discriminant)->Arg(8)->Arg(20)->Arg(40);

void BM_NegativeDefinite(benchmark::State& state) {
  std::mt19937 rng(11);
  Chain c = random_admissible_chain(rng, static_cast<std::size_t>(state.range(0)));
  WeightedGraph g = c.to_graph();
  for (auto _ : state) benchmark::DoNotOptimize(is_negative_definite(g));
}
BENCHMARK(BM_NegativeDefinite)->Arg(8)->Arg(20);

void BM_Standardize(benchmark::State& state) {
  // scramble a standard chain by a fixed pseudo-random flow
  std::mt19937 rng(13);
  WeightedGraph g = Chain({0, 0, 3, 2, 4}).to_graph();
  for (int i = 0; i < 12; ++i) {
    std::vector<ElementaryTransformation> moves;
    for (const auto& v : g.vertices()) {
      if (v.weight != 0 || g.degree(v.id) > 2) continue;
      for (VertexId nb : g.neighbors(v.id))
        moves.push_back(ElementaryTransformation::inner(v.id, nb));
      if (g.degree(v.id) <= 1) moves.push_back(ElementaryTransformation::outer(v.id));
    }
    if (moves.empty()) break;
    g = elementary_transform(g, moves[rng() % moves.size()]).graph;
  }
  for (auto _ : state) benchmark::DoNotOptimize(standardize(g));
}
BENCHMARK(BM_Standardize);

void BM_ColumnarSynthesis(benchmark::State& state) {
  Rat q(7, 30);
  for (auto _ : state) benchmark::DoNotOptimize(columnar_from_tilde_e(q));
}
BENCHMARK(BM_ColumnarSynthesis);

void BM_ConstructNonextendable(benchmark::State& state) {
  std::vector<Rat> te{Rat(1, 2), Rat(2, 5), Rat(3, 7)};
  for (auto _ : state) benchmark::DoNotOptimize(construct_nonextendable(4, 0, te));
}
BENCHMARK(BM_ConstructNonextendable);

void BM_FundamentalCycle(benchmark::State& state) {
  WeightedGraph e;
  VertexId center = e.add_vertex(-1);
  for (int i = 0; i < 6; ++i) {
    VertexId arm = e.add_vertex(-7);
    e.add_edge(center, arm);
  }
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_cycle(e));
}
BENCHMARK(BM_FundamentalCycle);

}  // namespace

BENCHMARK_MAIN();
