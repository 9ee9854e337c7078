#include "doctest.h"

#include <array>
#include <cmath>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"
#include "conclique/rng.hpp"
#include "conclique/sampler.hpp"

using namespace conclique;

namespace {

ChainConfig small_chain(std::int64_t iters, std::uint64_t seed, int threads = 1) {
  ChainConfig cfg;
  cfg.iterations = iters;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

// The same lattice rebuilt as an anonymous edge list: identical structure,
// but none of the metadata the compiled fast paths key on.
NeighborhoodGraph strip_lattice(const NeighborhoodGraph& g) {
  std::vector<std::array<std::int32_t, 2>> edges;
  for (std::int32_t i = 0; i < g.n; ++i)
    for (const std::int32_t j : g.neighbors(i))
      if (j > i) edges.push_back({i, j});
  return graph_from_edges(g.n, edges);
}

}  // namespace

TEST_CASE("chains are reproducible bit for bit") {
  const auto g = build_lattice(8, 8, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec gm = Gaussian{1.0, 0.2, 1.0};
  const auto a = run_cgs(gm, g, cover, small_chain(40, 99));
  const auto b = run_cgs(gm, g, cover, small_chain(40, 99));
  CHECK(a.samples == b.samples);
  const ModelSpec bm = AutologisticIso{0.3, 0.7};
  const auto c = run_single_site(bm, g, small_chain(40, 99));
  const auto d = run_single_site(bm, g, small_chain(40, 99));
  CHECK(c.samples == d.samples);
  // A different seed moves the chain.
  const auto e = run_cgs(gm, g, cover, small_chain(40, 100));
  CHECK(a.samples != e.samples);
}

TEST_CASE("thread count never changes the chain") {
  const auto g = build_lattice(12, 12, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  for (const ModelSpec m :
       {ModelSpec{Gaussian{0.5, 0.2, 2.0}}, ModelSpec{AutologisticIso{0.4, 0.9}}}) {
    const auto t1 = run_cgs(m, g, cover, small_chain(30, 7, 1));
    const auto t4 = run_cgs(m, g, cover, small_chain(30, 7, 4));
    CHECK(t1.samples == t4.samples);
  }
  const auto gi = build_incidence(8);
  const auto rr = round_robin_edge_cover(gi);
  const ModelSpec tm = TriadIncidence{0.2, 0.5, 0.5};
  const auto s1 = run_cgs(tm, gi, rr, small_chain(25, 3, 1));
  const auto s4 = run_cgs(tm, gi, rr, small_chain(25, 3, 4));
  CHECK(s1.samples == s4.samples);
}

TEST_CASE("draw counters track the sweep structure") {
  const auto g = build_lattice(5, 5, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const auto r = run_cgs(Gaussian{0.0, 0.1, 1.0}, g, cover, small_chain(17, 1));
  CHECK(r.counters.conditional_draws == 17u * 25u);
  CHECK(r.counters.class_passes == 17u * 2u);
  const auto s = run_single_site(Gaussian{0.0, 0.1, 1.0}, g, small_chain(17, 1));
  CHECK(s.counters.conditional_draws == 17u * 25u);
  CHECK(s.counters.class_passes == 0u);
}

TEST_CASE("burn-in and thinning keep the advertised sweeps") {
  const auto g = build_lattice(4, 4, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  ChainConfig cfg = small_chain(10, 5);
  cfg.burn_in = 3;
  cfg.thinning = 2;  // keeps sweeps 3, 5, 7, 9
  const auto r = run_cgs(Gaussian{0.0, 0.2, 1.0}, g, cover, cfg);
  CHECK(r.retained == 4);
  CHECK(r.samples.size() == 4u * 16u);

  // Streaming through a sink sees exactly the same states and labels.
  std::vector<std::int64_t> labels;
  std::vector<double> streamed;
  CgsSampler sampler(Gaussian{0.0, 0.2, 1.0}, g, cover);
  const auto sunk = sampler.run(cfg, [&](std::int64_t it, std::span<const double> s) {
    labels.push_back(it);
    streamed.insert(streamed.end(), s.begin(), s.end());
  });
  CHECK(sunk.samples.empty());
  CHECK(sunk.retained == 4);
  CHECK(labels == std::vector<std::int64_t>{3, 5, 7, 9});
  CHECK(streamed == r.samples);
}

TEST_CASE("iterations can be replayed in isolation") {
  const auto g = build_lattice(6, 6, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = Gaussian{0.0, 0.15, 1.0};
  CgsSampler sampler(m, g, cover);
  Field y0 = init_field(m, g, InitConstant{0.3}, 21);
  Field a = y0, b = y0;
  sampler.iterate(a, 5, 21);
  sampler.iterate(b, 5, 21);
  CHECK(a.values == b.values);
  // The free-function sweep is the same operation.
  const Field c = cgs_iteration(m, g, cover, y0, 5, 21);
  CHECK(c.values == a.values);
}

TEST_CASE("init policies") {
  const auto g = build_lattice(3, 3, LatticeKind::FourNearest);
  const ModelSpec m = AutologisticIso{0.35, 0.5};
  const Field c = init_field(m, g, InitConstant{1.0}, 0);
  CHECK(c.values == std::vector<double>(9, 1.0));
  std::vector<double> v(9);
  for (int i = 0; i < 9; ++i) v[i] = i * 0.1;
  const Field fv = init_field(m, g, InitVector{v}, 0);
  CHECK(fv.values == v);
  CHECK_THROWS_AS(init_field(m, g, InitVector{{1.0, 2.0}}, 0),
                  std::invalid_argument);
  const Field ma = init_field(m, g, InitMarginal{}, 4);
  const Field mb = init_field(m, g, InitMarginal{}, 4);
  CHECK(ma.values == mb.values);
  for (const double x : ma.values) CHECK((x == 0.0 || x == 1.0));
  const Field gz = init_field(Gaussian{5.0, 0.0, 0.01}, g, InitMarginal{}, 4);
  for (const double x : gz.values) CHECK(std::abs(x - 5.0) < 1.0);
}

TEST_CASE("random update order stays reproducible and changes the path") {
  const auto g = build_lattice(6, 6, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = Gaussian{0.0, 0.2, 1.0};
  ChainConfig fixed = small_chain(9, 13);
  ChainConfig shuffled = fixed;
  shuffled.order = OrderPolicy::RandomPermutation;
  const auto a = run_cgs(m, g, cover, shuffled);
  const auto b = run_cgs(m, g, cover, shuffled);
  CHECK(a.samples == b.samples);
  const auto f = run_cgs(m, g, cover, fixed);
  CHECK(a.samples != f.samples);
  const auto sa = run_single_site(m, g, shuffled);
  const auto sb = run_single_site(m, g, shuffled);
  CHECK(sa.samples == sb.samples);
}

TEST_CASE("single-site sweep equals the primitive per-site recipe") {
  const auto g = build_lattice(2, 3, LatticeKind::FourNearest);
  const ModelSpec m = AutologisticIso{0.45, 0.6};
  SingleSiteSampler sampler(m, g);
  Field y = init_field(m, g, InitConstant{0.0}, 17);
  Field ref = y;
  sampler.iterate(y, 4, 17);
  for (int site = 0; site < g.n; ++site) {
    const ConditionalLaw law = conditional_law(m, g, site, ref);
    const double u = rng::uniform_at(17, 4, static_cast<std::uint32_t>(site),
                                     rng::kPurposeDraw);
    ref[site] = sample_conditional(law, u);
  }
  CHECK(y.values == ref.values);
}

TEST_CASE("compiled lattice pass agrees with the generic graph pass") {
  const auto lat = build_lattice(7, 9, LatticeKind::FourNearest);
  const auto plain = strip_lattice(lat);
  std::vector<std::int32_t> parity(lat.n);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 9; ++c) parity[r * 9 + c] = (r + c) % 2;
  const auto cov_lat = analytic_lattice_cover(lat);
  const auto cov_plain = cover_from_assignment(lat.n, parity);

  const ModelSpec gm = Gaussian{0.7, 0.2, 1.4};
  const auto ga = run_cgs(gm, lat, cov_lat, small_chain(20, 31));
  const auto gb = run_cgs(gm, plain, cov_plain, small_chain(20, 31));
  REQUIRE(ga.samples.size() == gb.samples.size());
  for (std::size_t i = 0; i < ga.samples.size(); ++i)
    CHECK(ga.samples[i] == doctest::Approx(gb.samples[i]).epsilon(1e-8));

  const ModelSpec bm = AutologisticIso{0.3, 0.8};
  const auto ba = run_cgs(bm, lat, cov_lat, small_chain(20, 31));
  const auto bb = run_cgs(bm, plain, cov_plain, small_chain(20, 31));
  CHECK(ba.samples == bb.samples);
}

TEST_CASE("bad configurations are rejected") {
  const auto g = build_lattice(3, 3, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = Gaussian{0.0, 0.1, 1.0};
  ChainConfig cfg = small_chain(5, 0);
  cfg.burn_in = 6;
  CHECK_THROWS_AS(run_cgs(m, g, cover, cfg), std::invalid_argument);
  cfg = small_chain(5, 0);
  cfg.thinning = 0;
  CHECK_THROWS_AS(run_cgs(m, g, cover, cfg), std::invalid_argument);
  cfg = small_chain(-1, 0);
  CHECK_THROWS_AS(run_cgs(m, g, cover, cfg), std::invalid_argument);
}
