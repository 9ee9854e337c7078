// Release gate: ten end-to-end checks across cover construction, both
// samplers against exact small-system references, wall-clock ratios, mixing
// parity, residual calibration, and Monte Carlo p-values.  One [PASS]/[FAIL]
// line per check; the exit status is the number of failures.
//
// Optionally pass check numbers to run a subset:  conclique_acceptance 5 7

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/diagnostics.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"
#include "conclique/sampler.hpp"

using namespace conclique;

namespace {

struct Gate {
  int failures = 0;
  std::set<int> only;  // empty = run everything

  bool enabled(int idx) const { return only.empty() || only.count(idx) > 0; }

  void run(int idx, const char* label,
           const std::function<std::pair<bool, std::string>()>& check) {
    if (!enabled(idx)) return;
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = check();
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] C%d %s%s%s\n", ok ? "PASS" : "FAIL", idx, label,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

int max_degree(const NeighborhoodGraph& g) {
  int d = 0;
  for (int i = 0; i < g.n; ++i) d = std::max(d, g.degree(i));
  return d;
}

// ---- C1: cover sizes on structured graphs ---------------------------------

std::pair<bool, std::string> check_cover_sizes() {
  for (int m = 4; m <= 30; ++m) {
    if (dsatur(build_lattice(m, m, LatticeKind::FourNearest)).num_classes != 2)
      return {false, fmt("four-nearest %dx%d != 2 classes", m, m)};
    if (dsatur(build_lattice(m, m, LatticeKind::EightNearest)).num_classes != 4)
      return {false, fmt("eight-nearest %dx%d != 4 classes", m, m)};
  }
  const auto inc6 = build_incidence(6);
  if (dsatur(inc6).num_classes != 5)
    return {false, "saturation coloring of the 6-vertex incidence graph != 5"};
  if (round_robin_edge_cover(inc6).num_classes != 5)
    return {false, "round robin on the 6-vertex incidence graph != 5"};
  for (int v = 2; v <= 40; ++v) {
    const int want = v % 2 ? v : v - 1;  // 2*ceil(v/2) - 1
    if (round_robin_edge_cover(build_incidence(v)).num_classes != want)
      return {false, fmt("round robin V=%d != %d classes", v, want)};
  }
  return {true, "lattices 2/4, incidence V=6 gives 5, round robin closed form"};
}

// ---- C2: bound compliance on random graphs --------------------------------

std::pair<bool, std::string> check_bound_compliance() {
  std::mt19937 gen(6021023);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_real_distribution<double> dens(0.0, 0.2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    const double p = dens(gen);
    std::bernoulli_distribution coin(p);
    std::vector<std::array<std::int32_t, 2>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(gen)) edges.push_back({i, j});
    const auto g = graph_from_edges(n, edges);
    const int bound = delta_n_bound(g);
    if (bound > max_degree(g) + 1)
      return {false, fmt("trial %d: bound %d above max degree + 1", trial, bound)};
    using Coloring = ConcliqueCover (*)(const NeighborhoodGraph&);
    for (const Coloring color : {&dsatur, &greedy_welsh_powell}) {
      const ConcliqueCover c = color(g);
      const CoverCheck chk = verify_cover(g, c);
      if (!chk.ok)
        return {false, fmt("trial %d: invalid cover (%s)", trial,
                           chk.reason.c_str())};
      if (c.num_classes > bound)
        return {false, fmt("trial %d: %d classes above the bound %d", trial,
                           c.num_classes, bound)};
    }
  }
  return {true, "200 random graphs: valid covers, classes <= bound <= maxdeg + 1"};
}

// ---- C3: binary samplers against the exact joint --------------------------

double tv_from_counts(const std::vector<std::int64_t>& counts,
                      std::int64_t total, const std::vector<double>& pmf) {
  double tv = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s)
    tv += std::fabs(static_cast<double>(counts[s]) /
                        static_cast<double>(total) -
                    pmf[s]);
  return 0.5 * tv;
}

std::pair<bool, std::string> check_binary_stationarity() {
  const auto g = build_lattice(3, 3, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = AutologisticIso{0.5, 0.4};
  const auto pmf = exact_binary_joint(m, g);

  // Monte Carlo scale of a TV estimate from k draws.
  const auto tv_se = [&](double k) {
    double se = 0.0;
    for (const double p : pmf) se += std::sqrt(p * (1.0 - p) / k);
    return 0.5 * se;
  };

  ChainConfig cfg;
  cfg.iterations = 1000 + 1000000;
  cfg.burn_in = 1000;
  cfg.seed = 424243;

  std::vector<std::int64_t> counts(512, 0);
  std::int64_t kept = 0;
  double tv_1e4 = -1.0, tv_1e5 = -1.0;
  const auto tally = [&](std::int64_t, std::span<const double> y) {
    std::size_t code = 0;
    for (int i = 0; i < 9; ++i)
      if (y[static_cast<std::size_t>(i)] != 0.0) code |= std::size_t{1} << i;
    ++counts[code];
    ++kept;
    if (kept == 10000) tv_1e4 = tv_from_counts(counts, kept, pmf);
    if (kept == 100000) tv_1e5 = tv_from_counts(counts, kept, pmf);
  };
  CgsSampler(m, g, cover).run(cfg, tally);
  const double tv_1e6 = tv_from_counts(counts, kept, pmf);

  if (tv_1e6 > 0.01)
    return {false, fmt("conclique TV %.4f above 0.01 at 1e6 draws", tv_1e6)};
  if (tv_1e5 > tv_1e4 + 3.0 * tv_se(1e4) ||
      tv_1e6 > tv_1e5 + 3.0 * tv_se(1e5))
    return {false, fmt("TV not shrinking: %.4f -> %.4f -> %.4f", tv_1e4,
                       tv_1e5, tv_1e6)};

  counts.assign(512, 0);
  kept = 0;
  tv_1e4 = tv_1e5 = -1.0;
  cfg.seed = 515253;
  SingleSiteSampler(m, g).run(cfg, tally);
  const double tv_site = tv_from_counts(counts, kept, pmf);
  if (tv_site > 0.01)
    return {false, fmt("single-site TV %.4f above 0.01 at 1e6 draws", tv_site)};
  return {true, fmt("TV 1e4/1e5/1e6 = %.4f/%.4f/%.4f, single-site %.4f",
                    tv_1e4, tv_1e5, tv_1e6, tv_site)};
}

// ---- C4: Gaussian sampler against the exact covariance --------------------

std::pair<bool, std::string> check_gaussian_stationarity() {
  const auto g = build_lattice(4, 4, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = Gaussian{0.0, 0.2, 1.0};
  const auto exact = exact_gaussian_moments(m, g);

  ChainConfig cfg;
  cfg.iterations = 1000 + 100000;
  cfg.burn_in = 1000;
  cfg.seed = 99901;

  std::vector<double> sum(16, 0.0), outer(256, 0.0);
  std::int64_t kept = 0;
  CgsSampler(m, g, cover).run(cfg, [&](std::int64_t, std::span<const double> y) {
    for (int i = 0; i < 16; ++i) {
      sum[static_cast<std::size_t>(i)] += y[static_cast<std::size_t>(i)];
      for (int j = 0; j < 16; ++j)
        outer[static_cast<std::size_t>(i * 16 + j)] +=
            y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
    }
    ++kept;
  });

  const double total = static_cast<double>(kept);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const double cov = outer[static_cast<std::size_t>(i * 16 + j)] / total -
                         (sum[static_cast<std::size_t>(i)] / total) *
                             (sum[static_cast<std::size_t>(j)] / total);
      worst = std::max(
          worst, std::fabs(cov - exact.covariance[static_cast<std::size_t>(
                                     i * 16 + j)]));
    }
  if (worst > 0.02)
    return {false, fmt("covariance deviates by %.4f (limit 0.02)", worst)};
  return {true, fmt("largest covariance deviation %.4f over 256 entries", worst)};
}

// ---- C5: lattice speed ratio and growth -----------------------------------

std::pair<bool, std::string> check_lattice_speed() {
  const ModelSpec m = Gaussian{0.0, 0.2, 1.0};
  const auto g50 = build_lattice(50, 50, LatticeKind::FourNearest);
  const auto c50 = analytic_lattice_cover(g50);
  // The slow sampler is timed first so the vector units' clock behavior
  // cannot flatter the comparison.
  const auto site =
      comp_metric(m, g50, nullptr, SamplerKind::SingleSite, 1000, 5, 1);
  const auto cgs =
      comp_metric(m, g50, &c50, SamplerKind::Conclique, 1000, 5, 1);
  const double ratio = site.seconds_per_iteration / cgs.seconds_per_iteration;
  if (!(ratio >= 10.0))
    return {false, fmt("speedup %.1fx below 10x at 50x50", ratio)};

  // Per-iteration cost growth across edge lengths 10 -> 20 -> 40.
  double spi[3];
  const int sizes[3] = {10, 20, 40};
  const std::int64_t iters[3] = {20000, 5000, 2000};
  for (int k = 0; k < 3; ++k) {
    const auto gk = build_lattice(sizes[k], sizes[k], LatticeKind::FourNearest);
    const auto ck = analytic_lattice_cover(gk);
    spi[k] = comp_metric(m, gk, &ck, SamplerKind::Conclique, iters[k], 5, 1)
                 .seconds_per_iteration;
  }
  const double r20 = spi[1] / spi[0], r40 = spi[2] / spi[0];
  if (!(r20 < 4.0 && r40 < 16.0))
    return {false, fmt("growth 20/10 = %.2f (< 4), 40/10 = %.2f (< 16)", r20,
                       r40)};
  return {true, fmt("speedup %.1fx at 50x50; growth 20/10 = %.2f, 40/10 = %.2f",
                    ratio, r20, r40)};
}

// ---- C6: incidence speed ratio --------------------------------------------

std::pair<bool, std::string> check_incidence_speed() {
  const ModelSpec m = TriadIncidence{0.2, 0.5, 0.5};
  const auto g = build_incidence(50);
  const auto cover = round_robin_edge_cover(g);
  const auto site =
      comp_metric(m, g, nullptr, SamplerKind::SingleSite, 100, 3, 1);
  const auto cgs = comp_metric(m, g, &cover, SamplerKind::Conclique, 100, 3, 1);
  const double ratio = site.seconds_per_iteration / cgs.seconds_per_iteration;
  if (!(ratio >= 5.0))
    return {false, fmt("speedup %.1fx below 5x on the 50-vertex incidence graph",
                       ratio)};
  return {true, fmt("speedup %.1fx for 1225 pair sites, 100 iterations", ratio)};
}

// ---- C7: mixing parity ----------------------------------------------------

std::pair<bool, std::string> check_mixing_parity() {
  const auto g = build_lattice(40, 40, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = AutologisticIso{0.123, 0.816};

  const auto mean_alg = [&](bool conclique, std::uint64_t seed0) {
    double acc = 0.0;
    for (int chain = 0; chain < 10; ++chain) {
      ChainConfig cfg;
      cfg.iterations = 10000;
      cfg.burn_in = 1000;
      cfg.seed = seed0 + static_cast<std::uint64_t>(chain);
      cfg.init = InitMarginal{};
      const ChainResult r = conclique
                                ? run_cgs(m, g, cover, cfg)
                                : run_single_site(m, g, cfg);
      const auto rep = alg_metric({r.samples.data(), r.retained, r.n});
      if (!rep.zero_variance_sites.empty())
        throw std::runtime_error("a site chain froze during the parity check");
      acc += rep.alg;
    }
    return acc / 10.0;
  };

  const double alg_cgs = mean_alg(true, 1100);
  const double alg_site = mean_alg(false, 2200);
  const double diff = std::fabs(alg_cgs - alg_site);
  if (diff > 0.10)
    return {false, fmt("efficiency gap %.3f above 0.10 (conclique %.3f, "
                       "single-site %.3f)",
                       diff, alg_cgs, alg_site)};
  if (alg_cgs < 0.725 || alg_cgs > 0.885)
    return {false,
            fmt("conclique efficiency %.3f outside [0.725, 0.885]", alg_cgs)};
  return {true, fmt("efficiency conclique %.3f vs single-site %.3f", alg_cgs,
                    alg_site)};
}

// ---- C8: residual uniformity ----------------------------------------------

std::pair<bool, std::string> check_residual_uniformity() {
  const auto g = build_lattice(16, 16, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const auto passes = [&](const ModelSpec& m, std::uint64_t seed0) {
    int good = 0;
    for (int rep = 0; rep < 100; ++rep) {
      ChainConfig cfg;
      cfg.iterations = 401;
      cfg.burn_in = 400;
      cfg.seed = seed0 + static_cast<std::uint64_t>(rep);
      cfg.init = InitMarginal{};
      const ChainResult r = run_cgs(m, g, cover, cfg);
      Field y;
      y.values = r.samples;
      const ResidualSet res =
          conclique_residuals(m, g, cover, y, seed0 + 100000 +
                                                  static_cast<std::uint64_t>(rep));
      if (ks_worst_class(res).p_value >= 0.01) ++good;
    }
    return good;
  };
  const int gauss = passes(Gaussian{0.0, 0.2, 1.0}, 7000);
  const int binary = passes(AutologisticIso{0.123, 0.816}, 9000);
  if (gauss < 95 || binary < 95)
    return {false, fmt("uniformity passes gaussian %d/100, binary %d/100 "
                       "(need >= 95)",
                       gauss, binary)};
  return {true,
          fmt("uniformity passes gaussian %d/100, binary %d/100", gauss, binary)};
}

// ---- C9: p-value arithmetic and statistic cross-check ---------------------

std::pair<bool, std::string> check_gof_arithmetic() {
  const std::vector<double> sims = {1.0, 2.0, 2.0, 3.0, 4.0};
  if (mc_pvalue_upper(9.0, sims) != 0.0) return {false, "above-all != 0"};
  if (mc_pvalue_upper(0.5, sims) != 1.0) return {false, "below-all != 1"};
  if (mc_pvalue_upper(2.0, sims) != 0.8) return {false, "tie count != 4/5"};
  if (mc_pvalue_upper(3.5, sims) != 0.2) return {false, "tail count != 1/5"};
  std::vector<double> grid(100);
  for (int i = 0; i < 100; ++i) grid[i] = i;
  for (double obs : {0.0, 17.0, 50.0, 99.0, 100.0}) {
    const double p = mc_pvalue_upper(obs, grid);
    const double scaled = p * 100.0;
    if (std::fabs(scaled - std::round(scaled)) > 1e-12)
      return {false, fmt("p = %.6f is not a multiple of 1/100", p)};
  }

  // Concordant-edge fraction against direct pair enumeration.
  std::mt19937 gen(771122);
  std::uniform_int_distribution<int> size(2, 50);
  std::uniform_real_distribution<double> dens(0.05, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(gen);
    std::bernoulli_distribution coin(dens(gen));
    std::vector<std::array<std::int32_t, 2>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(gen)) edges.push_back({i, j});
    const auto g = graph_from_edges(n, edges);
    Field y(n);
    std::bernoulli_distribution val(0.5);
    for (int i = 0; i < n; ++i) y[i] = val(gen) ? 1.0 : 0.0;
    std::int64_t both = 0, total = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (g.adjacent(i, j)) {
          ++total;
          if (y[i] == 1.0 && y[j] == 1.0) ++both;
        }
    const double brute =
        total == 0 ? 0.0
                   : static_cast<double>(both) / static_cast<double>(total);
    if (edge_concordance(g, y) != brute)
      return {false, fmt("trial %d: concordance mismatch", trial)};
  }
  return {true, "tail proportions exact, statistic matches pair enumeration"};
}

// ---- C10: p-value calibration ---------------------------------------------

std::pair<bool, std::string> check_gof_calibration() {
  const auto g = build_lattice(10, 10, LatticeKind::FourNearest);
  const auto cover = analytic_lattice_cover(g);
  const ModelSpec m = AutologisticIso{0.2, 0.3};
  const std::int64_t m_reps = 199;

  int inside = 0;
  for (int rep = 0; rep < 100; ++rep) {
    ChainConfig obs_cfg;
    obs_cfg.iterations = 301;
    obs_cfg.burn_in = 300;
    obs_cfg.seed = 50000 + static_cast<std::uint64_t>(rep);
    obs_cfg.init = InitMarginal{};
    const ChainResult obs_run = run_cgs(m, g, cover, obs_cfg);
    Field observed;
    observed.values = obs_run.samples;
    const double t_obs = edge_concordance(g, observed);

    ChainConfig ref_cfg;
    ref_cfg.burn_in = 300;
    ref_cfg.thinning = 5;
    ref_cfg.iterations = ref_cfg.burn_in + m_reps * ref_cfg.thinning;
    ref_cfg.seed = 60000 + static_cast<std::uint64_t>(rep);
    ref_cfg.init = InitMarginal{};
    std::vector<double> sims;
    sims.reserve(static_cast<std::size_t>(m_reps));
    Field state;
    CgsSampler(m, g, cover).run(ref_cfg,
                                [&](std::int64_t, std::span<const double> s) {
                                  state.values.assign(s.begin(), s.end());
                                  sims.push_back(edge_concordance(g, state));
                                });
    const double p = mc_pvalue_upper(t_obs, sims);
    if (p >= 0.01 && p <= 0.99) ++inside;
  }
  if (inside < 90)
    return {false,
            fmt("only %d/100 p-values inside [0.01, 0.99] (need >= 90)", inside)};
  return {true, fmt("%d/100 null p-values inside [0.01, 0.99]", inside)};
}

}  // namespace

int main(int argc, char** argv) {
  Gate gate;
  for (int a = 1; a < argc; ++a) gate.only.insert(std::atoi(argv[a]));

  gate.run(1, "cover sizes on structured graphs", check_cover_sizes);
  gate.run(2, "class-count bound on random graphs", check_bound_compliance);
  gate.run(3, "binary samplers match the exact joint", check_binary_stationarity);
  gate.run(4, "gaussian sampler matches the exact covariance",
           check_gaussian_stationarity);
  gate.run(5, "lattice speed ratio and growth", check_lattice_speed);
  gate.run(6, "incidence speed ratio", check_incidence_speed);
  gate.run(7, "mixing parity between samplers", check_mixing_parity);
  gate.run(8, "conditional residuals are uniform", check_residual_uniformity);
  gate.run(9, "p-value arithmetic and statistic cross-check",
           check_gof_arithmetic);
  gate.run(10, "null p-values are calibrated", check_gof_calibration);

  if (gate.failures == 0)
    std::printf("all checks passed\n");
  else
    std::printf("%d check(s) failed\n", gate.failures);
  return gate.failures;
}
