// Microbenchmarks for the hot paths: full sweeps of both samplers across
// model families and sizes, the counter-based generator, and the coloring
// front-ends.  Items processed = site updates, so per-item time is the cost
// of one conditional draw.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"
#include "conclique/rng.hpp"
#include "conclique/sampler.hpp"

using namespace conclique;

namespace {

ModelSpec model_for(int family) {
  switch (family) {
    case 0: return Gaussian{0.0, 0.2, 1.0};
    case 1: return AutologisticIso{0.123, 0.816};
    default: return AutologisticRegression{-1.6, -0.001, 0.0, 0.004};
  }
}

const char* family_label(int family) {
  switch (family) {
    case 0: return "gaussian";
    case 1: return "autologistic_iso";
    default: return "autologistic_regression";
  }
}

void BM_CgsLatticeSweep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ModelSpec model = model_for(static_cast<int>(state.range(1)));
  const auto g = build_lattice(m, m, LatticeKind::FourNearest);
  const CgsSampler sampler(model, g, analytic_lattice_cover(g));
  Field y(g.n);
  std::uint64_t it = 0;
  for (auto _ : state) {
    sampler.iterate(y, it++, 1);
    benchmark::DoNotOptimize(y.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
  state.SetLabel(family_label(static_cast<int>(state.range(1))));
}

void BM_SingleSiteLatticeSweep(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const ModelSpec model = model_for(static_cast<int>(state.range(1)));
  const auto g = build_lattice(m, m, LatticeKind::FourNearest);
  const SingleSiteSampler sampler(model, g);
  Field y(g.n);
  std::uint64_t it = 0;
  for (auto _ : state) {
    sampler.iterate(y, it++, 1);
    benchmark::DoNotOptimize(y.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
  state.SetLabel(family_label(static_cast<int>(state.range(1))));
}

void BM_CgsIncidenceSweep(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const ModelSpec model = TriadIncidence{0.2, 0.5, 0.5};
  const auto g = build_incidence(v);
  const CgsSampler sampler(model, g, round_robin_edge_cover(g));
  Field y(g.n);
  std::uint64_t it = 0;
  for (auto _ : state) {
    sampler.iterate(y, it++, 1);
    benchmark::DoNotOptimize(y.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

void BM_SingleSiteIncidenceSweep(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const ModelSpec model = TriadIncidence{0.2, 0.5, 0.5};
  const auto g = build_incidence(v);
  const SingleSiteSampler sampler(model, g);
  Field y(g.n);
  std::uint64_t it = 0;
  for (auto _ : state) {
    sampler.iterate(y, it++, 1);
    benchmark::DoNotOptimize(y.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

void BM_UniformFill(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::vector<double> out(n);
  std::uint64_t it = 0;
  for (auto _ : state) {
    rng::uniform_fill(42, it++, 0, n, rng::kPurposeDraw, out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_Coloring(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const auto g = build_lattice(m, m, LatticeKind::FourNearest);
  for (auto _ : state) {
    auto cover = dsatur(g);
    benchmark::DoNotOptimize(cover.assignment.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

void BM_RoundRobin(benchmark::State& state) {
  const int v = static_cast<int>(state.range(0));
  const auto g = build_incidence(v);
  for (auto _ : state) {
    auto cover = round_robin_edge_cover(g);
    benchmark::DoNotOptimize(cover.assignment.data());
  }
  state.SetItemsProcessed(state.iterations() * g.n);
}

}  // namespace

BENCHMARK(BM_CgsLatticeSweep)
    ->ArgsProduct({{10, 20, 40, 50, 75, 100}, {0, 1, 2}})
    ->ArgNames({"m", "family"});
BENCHMARK(BM_SingleSiteLatticeSweep)
    ->ArgsProduct({{10, 20, 40, 50}, {0, 1, 2}})
    ->ArgNames({"m", "family"});
BENCHMARK(BM_CgsIncidenceSweep)->Arg(30)->Arg(50)->ArgName("V");
BENCHMARK(BM_SingleSiteIncidenceSweep)->Arg(30)->Arg(50)->ArgName("V");
BENCHMARK(BM_UniformFill)->Arg(1000)->Arg(100000)->ArgName("n");
BENCHMARK(BM_Coloring)->Arg(50)->Arg(100)->ArgName("m");
BENCHMARK(BM_RoundRobin)->Arg(50)->ArgName("V");

BENCHMARK_MAIN();
