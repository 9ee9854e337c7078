#include "conclique/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "conclique/math.hpp"
#include "conclique/rng.hpp"

namespace conclique {

EfficiencyReport alg_metric(MatrixView chain) {
  if (chain.rows < 2 || chain.cols < 1)
    throw std::invalid_argument("alg_metric: need at least two retained states");
  EfficiencyReport rep;
  rep.per_site_iact.resize(static_cast<std::size_t>(chain.cols));
  const std::int64_t t = chain.rows;
  std::vector<double> x(static_cast<std::size_t>(t));
  double worst = 0.0;
  bool any = false;
  for (int c = 0; c < chain.cols; ++c) {
    double mean = 0.0;
    for (std::int64_t k = 0; k < t; ++k) mean += chain.data[k * chain.cols + c];
    mean /= static_cast<double>(t);
    for (std::int64_t k = 0; k < t; ++k)
      x[static_cast<std::size_t>(k)] = chain.data[k * chain.cols + c] - mean;
    auto gamma = [&](std::int64_t lag) {
      double s = 0.0;
      for (std::int64_t k = 0; k + lag < t; ++k)
        s += x[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k + lag)];
      return s / static_cast<double>(t);
    };
    const double g0 = gamma(0);
    if (g0 <= 0.0) {
      rep.per_site_iact[static_cast<std::size_t>(c)] =
          std::numeric_limits<double>::infinity();
      rep.zero_variance_sites.push_back(c);
      continue;
    }
    // initial positive sequence: sum paired autocovariances while positive
    double var = -g0;
    for (std::int64_t j = 0; 2 * j < t; ++j) {
      const double g_even = gamma(2 * j);
      const double g_odd = 2 * j + 1 < t ? gamma(2 * j + 1) : 0.0;
      const double pair = g_even + g_odd;
      if (pair <= 0.0) break;
      var += 2.0 * pair;
    }
    const double iact = std::max(1.0, var / g0);
    rep.per_site_iact[static_cast<std::size_t>(c)] = iact;
    const double eff = 1.0 / iact;
    worst = any ? std::min(worst, eff) : eff;
    any = true;
  }
  rep.alg = rep.zero_variance_sites.empty() && any ? worst : 0.0;
  return rep;
}

CompReport comp_metric(const ModelSpec& m, const NeighborhoodGraph& g,
                       const ConcliqueCover* cover, SamplerKind kind,
                       std::int64_t iterations, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("comp_metric: trials must be >= 1");
  if (iterations < 1)
    throw std::invalid_argument("comp_metric: iterations must be >= 1");
  if (kind == SamplerKind::Conclique && cover == nullptr)
    throw std::invalid_argument("comp_metric: conclique timing needs a cover");
  ChainConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = iterations;  // nothing retained; the sink never fires
  cfg.seed = seed;
  const auto discard = [](std::int64_t, std::span<const double>) {};
  std::vector<double> per_iter(static_cast<std::size_t>(trials));
  std::int64_t draws = 0;
  // Compile the samplers once; only the sweeps are timed.
  std::optional<CgsSampler> cgs;
  std::optional<SingleSiteSampler> site;
  if (kind == SamplerKind::Conclique)
    cgs.emplace(m, g, *cover);
  else
    site.emplace(m, g);
  for (int t = 0; t < trials; ++t) {
    cfg.seed = seed + static_cast<std::uint64_t>(t);
    ChainResult r = cgs ? cgs->run(cfg, discard) : site->run(cfg, discard);
    per_iter[static_cast<std::size_t>(t)] = r.seconds_per_iteration;
    draws = static_cast<std::int64_t>(r.counters.conditional_draws);
  }
  std::sort(per_iter.begin(), per_iter.end());
  CompReport rep;
  rep.seconds_per_iteration = per_iter[static_cast<std::size_t>(trials) / 2];
  rep.iterations_timed = iterations;
  if (rep.seconds_per_iteration > 0.0 && iterations > 0)
    rep.draws_per_second = static_cast<double>(draws) /
                           (rep.seconds_per_iteration *
                            static_cast<double>(iterations));
  return rep;
}

ResidualSet conclique_residuals(const ModelSpec& m, const NeighborhoodGraph& g,
                                const ConcliqueCover& cover, const Field& y,
                                std::uint64_t seed, std::uint64_t iteration) {
  if (y.n() != g.n)
    throw std::invalid_argument("residuals: field size != graph size");
  const bool binary = is_binary_family(m);
  ResidualSet out;
  out.by_class.resize(static_cast<std::size_t>(cover.num_classes));
  for (int cls = 0; cls < cover.num_classes; ++cls) {
    auto& dst = out.by_class[static_cast<std::size_t>(cls)];
    dst.reserve(cover.classes[static_cast<std::size_t>(cls)].size());
    for (const std::int32_t site : cover.classes[static_cast<std::size_t>(cls)]) {
      std::optional<double> aux;
      if (binary)
        aux = rng::uniform_at(seed, iteration, static_cast<std::uint32_t>(site),
                              rng::kPurposePit);
      dst.push_back(conditional_cdf(m, g, site, y[site], y, aux));
    }
  }
  return out;
}

KsResult ks_uniformity(std::span<const double> values) {
  if (values.size() < 5)
    throw std::invalid_argument("ks_uniformity: need at least 5 values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  if (v.front() < 0.0 || v.back() > 1.0 || !std::isfinite(v.front()) ||
      !std::isfinite(v.back()))
    throw std::invalid_argument("ks_uniformity: values must lie in [0,1]");
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = v[i];  // U(0,1) CDF
    d = std::max(d, std::max(f - static_cast<double>(i) / n,
                             static_cast<double>(i + 1) / n - f));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = math::kolmogorov_sf(std::sqrt(n) * d);
  return r;
}

KsResult ks_worst_class(const ResidualSet& residuals) {
  KsResult worst{0.0, 2.0};
  bool any = false;
  for (const auto& cls : residuals.by_class) {
    if (cls.empty()) continue;
    const KsResult r = ks_uniformity(cls);
    if (!any || r.p_value < worst.p_value) worst = r;
    any = true;
  }
  if (!any) throw std::invalid_argument("ks_worst_class: no residuals");
  return worst;
}

double mc_pvalue_upper(double observed, std::span<const double> simulated) {
  if (simulated.empty())
    throw std::invalid_argument("mc_pvalue: empty reference sample");
  std::int64_t ge = 0;
  for (const double s : simulated)
    if (s >= observed) ++ge;
  return static_cast<double>(ge) / static_cast<double>(simulated.size());
}

double mc_pvalue_two_sided(double observed, std::span<const double> simulated) {
  if (simulated.empty())
    throw std::invalid_argument("mc_pvalue: empty reference sample");
  std::int64_t ge = 0, le = 0;
  for (const double s : simulated) {
    if (s >= observed) ++ge;
    if (s <= observed) ++le;
  }
  const double m = static_cast<double>(simulated.size());
  const double p = 2.0 * std::min(static_cast<double>(ge) / m,
                                  static_cast<double>(le) / m);
  return std::min(1.0, p);
}

double edge_concordance(const NeighborhoodGraph& g, const Field& y) {
  if (y.n() != g.n)
    throw std::invalid_argument("edge_concordance: field size != graph size");
  const std::int64_t edges = g.edge_count();
  if (edges == 0) return 0.0;
  std::int64_t both = 0;
  for (int i = 0; i < g.n; ++i)
    for (const std::int32_t j : g.neighbors(i)) {
      if (j >= i) break;  // rows are sorted; count each edge once
      if (y[i] != 0.0 && y[j] != 0.0) ++both;
    }
  return static_cast<double>(both) / static_cast<double>(edges);
}

double binary_tv_distance(MatrixView chain, std::span<const double> pmf) {
  if (chain.cols < 1 || chain.cols > 20)
    throw std::invalid_argument("binary_tv_distance: needs 1..20 sites");
  const std::size_t states = std::size_t{1} << chain.cols;
  if (pmf.size() != states)
    throw std::invalid_argument("binary_tv_distance: pmf size != 2^n");
  std::vector<double> freq(states, 0.0);
  for (std::int64_t r = 0; r < chain.rows; ++r) {
    std::size_t code = 0;
    for (int c = 0; c < chain.cols; ++c)
      if (chain.data[r * chain.cols + c] != 0.0) code |= std::size_t{1} << c;
    freq[code] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t s = 0; s < states; ++s)
    tv += std::fabs(freq[s] / static_cast<double>(chain.rows) - pmf[s]);
  return 0.5 * tv;
}

}  // namespace conclique
