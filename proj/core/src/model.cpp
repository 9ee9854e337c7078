#include "conclique/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conclique/math.hpp"

namespace conclique {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_unit_interval(double kappa, const char* what) {
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument(std::string(what) +
                                " must lie strictly inside (0,1)");
}

double lsgm_logit_kappa(const LocalStructureGraphical& m, int site) {
  if (m.covariates.empty()) return m.beta[0];
  const auto& x = m.covariates[static_cast<std::size_t>(site)];
  return m.beta[0] + m.beta[1] * x[0] + m.beta[2] * x[1] + m.beta[3] * x[2];
}

// Directional neighbor sums for the lattice families: horizontal means same
// row (column offset +-1), vertical same column.
struct DirectionalSums {
  double horizontal = 0.0;
  double vertical = 0.0;
};

template <typename Center>
DirectionalSums directional_sums(const NeighborhoodGraph& g, int site,
                                 const Field& y, Center center) {
  DirectionalSums s;
  const double v0 = g.coord_v[static_cast<std::size_t>(site)];
  for (const std::int32_t j : g.neighbors(site)) {
    const double d = y[j] - center(j);
    if (g.coord_v[static_cast<std::size_t>(j)] == v0)
      s.horizontal += d;
    else
      s.vertical += d;
  }
  return s;
}

// Log-odds of the full conditional for every binary family.
double log_odds(const ModelSpec& m, const NeighborhoodGraph& g, int site,
                const Field& y) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          throw std::invalid_argument(
              "natural_parameter: Gaussian conditionals are not two-point");
        } else if constexpr (std::is_same_v<T, AutologisticIso>) {
          double s = 0.0;
          for (const std::int32_t j : g.neighbors(site)) s += y[j] - spec.kappa;
          return math::logit(spec.kappa) + spec.eta * s;
        } else if constexpr (std::is_same_v<T, AutologisticAniso>) {
          const auto s =
              directional_sums(g, site, y, [&](std::int32_t) { return spec.kappa; });
          return math::logit(spec.kappa) + spec.eta_u * s.horizontal +
                 spec.eta_v * s.vertical;
        } else if constexpr (std::is_same_v<T, AutologisticRegression>) {
          const auto s = directional_sums(g, site, y, [&](std::int32_t j) {
            return math::logistic(spec.beta0 +
                                  spec.beta1 * g.coord_u[static_cast<std::size_t>(j)]);
          });
          return spec.beta0 + spec.beta1 * g.coord_u[static_cast<std::size_t>(site)] +
                 spec.eta_u * s.horizontal + spec.eta_v * s.vertical;
        } else if constexpr (std::is_same_v<T, AutologisticUncentered>) {
          double s = 0.0;
          for (const std::int32_t j : g.neighbors(site)) s += y[j];
          return math::logit(spec.kappa) + spec.eta * s;
        } else if constexpr (std::is_same_v<T, TriadIncidence>) {
          double s = 0.0;
          const auto nbrs = g.neighbors(site);
          for (const std::int32_t j : nbrs) s += y[j] - spec.kappa;
          double a = math::logit(spec.kappa);
          if (!nbrs.empty()) a += spec.eta1 * s / static_cast<double>(nbrs.size());
          const auto pairs = triangle_pairs(g, site);
          if (!pairs.empty()) {
            double t = 0.0;
            for (const auto& p : pairs)
              t += y[p[0]] * y[p[1]] - spec.kappa * spec.kappa;
            a += spec.eta2 * t / static_cast<double>(pairs.size());
          }
          return a;
        } else {
          static_assert(std::is_same_v<T, LocalStructureGraphical>);
          double s = 0.0;
          const auto nbrs = g.neighbors(site);
          const std::int64_t base = g.offsets[static_cast<std::size_t>(site)];
          for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const std::int32_t j = nbrs[k];
            const double w = spec.weights.empty()
                                 ? 1.0
                                 : spec.weights[static_cast<std::size_t>(base) + k];
            s += w * (y[j] - math::logistic(lsgm_logit_kappa(spec, j)));
          }
          return lsgm_logit_kappa(spec, site) + spec.eta * s;
        }
      },
      m);
}

}  // namespace

bool is_binary_family(const ModelSpec& m) {
  return !std::holds_alternative<Gaussian>(m);
}

std::string family_name(const ModelSpec& m) {
  return std::visit(
      [](const auto& spec) -> std::string {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
        if constexpr (std::is_same_v<T, AutologisticIso>) return "autologistic_iso";
        if constexpr (std::is_same_v<T, AutologisticAniso>)
          return "autologistic_aniso";
        if constexpr (std::is_same_v<T, AutologisticRegression>)
          return "autologistic_regression";
        if constexpr (std::is_same_v<T, AutologisticUncentered>)
          return "autologistic_uncentered";
        if constexpr (std::is_same_v<T, TriadIncidence>) return "triad_incidence";
        if constexpr (std::is_same_v<T, LocalStructureGraphical>)
          return "local_structure";
      },
      m);
}

void validate_model(const ModelSpec& m) {
  std::visit(
      [](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          require(std::isfinite(spec.alpha) && std::isfinite(spec.eta),
                  "gaussian: parameters must be finite");
          require(spec.tau2 > 0.0 && std::isfinite(spec.tau2),
                  "gaussian: tau2 must be positive");
        } else if constexpr (std::is_same_v<T, AutologisticIso>) {
          require_unit_interval(spec.kappa, "autologistic kappa");
          require(std::isfinite(spec.eta), "autologistic eta must be finite");
        } else if constexpr (std::is_same_v<T, AutologisticAniso>) {
          require_unit_interval(spec.kappa, "autologistic kappa");
          require(std::isfinite(spec.eta_u) && std::isfinite(spec.eta_v),
                  "autologistic eta must be finite");
        } else if constexpr (std::is_same_v<T, AutologisticRegression>) {
          require(std::isfinite(spec.beta0) && std::isfinite(spec.beta1),
                  "regression betas must be finite");
          require(std::isfinite(spec.eta_u) && std::isfinite(spec.eta_v),
                  "autologistic eta must be finite");
        } else if constexpr (std::is_same_v<T, AutologisticUncentered>) {
          require_unit_interval(spec.kappa, "autologistic kappa");
          require(std::isfinite(spec.eta), "autologistic eta must be finite");
        } else if constexpr (std::is_same_v<T, TriadIncidence>) {
          require_unit_interval(spec.kappa, "triad kappa");
          require(std::isfinite(spec.eta1) && std::isfinite(spec.eta2),
                  "triad parameters must be finite");
        } else {
          static_assert(std::is_same_v<T, LocalStructureGraphical>);
          for (const double b : spec.beta)
            require(std::isfinite(b), "local_structure betas must be finite");
          require(std::isfinite(spec.eta), "local_structure eta must be finite");
          for (const auto& row : spec.covariates)
            for (const double x : row)
              require(std::isfinite(x), "local_structure covariates must be finite");
          for (const double w : spec.weights)
            require(std::isfinite(w), "local_structure weights must be finite");
        }
      },
      m);
}

void validate_pairing(const ModelSpec& m, const NeighborhoodGraph& g) {
  validate_model(m);
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, AutologisticAniso> ||
                      std::is_same_v<T, AutologisticRegression>) {
          require(g.is_lattice() && g.lattice_kind == LatticeKind::FourNearest,
                  "directional autologistic families need a four-nearest lattice");
        } else if constexpr (std::is_same_v<T, TriadIncidence>) {
          require(g.is_incidence(),
                  "triad family needs an incidence-structure graph");
          require(g.incidence_vertices >= 3,
                  "triad family needs at least three vertices");
        } else if constexpr (std::is_same_v<T, LocalStructureGraphical>) {
          require(spec.covariates.empty() ||
                      spec.covariates.size() == static_cast<std::size_t>(g.n),
                  "local_structure: covariate rows must match the site count");
          require(spec.weights.empty() ||
                      spec.weights.size() == g.adjacency.size(),
                  "local_structure: weight array must match the adjacency array");
          if (!spec.weights.empty()) {
            for (int i = 0; i < g.n; ++i) {
              const auto nbrs = g.neighbors(i);
              const std::int64_t base = g.offsets[static_cast<std::size_t>(i)];
              for (std::size_t k = 0; k < nbrs.size(); ++k) {
                const std::int32_t j = nbrs[k];
                if (j < i) continue;
                // locate i in j's row to compare the mirrored weight
                const auto row = g.neighbors(j);
                const auto it = std::lower_bound(row.begin(), row.end(), i);
                const std::int64_t pos =
                    g.offsets[static_cast<std::size_t>(j)] + (it - row.begin());
                require(spec.weights[static_cast<std::size_t>(base) + k] ==
                            spec.weights[static_cast<std::size_t>(pos)],
                        "local_structure: weights must be symmetric");
              }
            }
          }
        } else {
          (void)spec;
        }
      },
      m);
}

std::vector<std::string> model_warnings(const ModelSpec& m,
                                        const NeighborhoodGraph& g) {
  std::vector<std::string> out;
  if (const auto* gauss = std::get_if<Gaussian>(&m)) {
    int dmax = 0;
    for (int i = 0; i < g.n; ++i) dmax = std::max(dmax, g.degree(i));
    if (dmax > 0 && std::fabs(gauss->eta) * dmax >= 1.0)
      out.push_back(
          "gaussian: |eta| * max_degree >= 1; the implied joint precision "
          "matrix may not be positive definite");
  }
  return out;
}

ConditionalLaw conditional_law(const ModelSpec& m, const NeighborhoodGraph& g,
                               int site, const Field& y) {
  if (const auto* gauss = std::get_if<Gaussian>(&m)) {
    double s = 0.0;
    for (const std::int32_t j : g.neighbors(site)) s += y[j] - gauss->alpha;
    return GaussianLaw{gauss->alpha + gauss->eta * s, gauss->tau2};
  }
  return BernoulliLaw{math::logistic(log_odds(m, g, site, y))};
}

double natural_parameter(const ModelSpec& m, const NeighborhoodGraph& g,
                         int site, const Field& y) {
  return log_odds(m, g, site, y);
}

double sample_conditional(const ConditionalLaw& law, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("sample_conditional: u must be inside (0,1)");
  if (const auto* gauss = std::get_if<GaussianLaw>(&law))
    return gauss->mean + std::sqrt(gauss->variance) * math::normal_quantile(u);
  const double p = std::get<BernoulliLaw>(law).p;
  return u > 1.0 - p ? 1.0 : 0.0;
}

double conditional_cdf(const ModelSpec& m, const NeighborhoodGraph& g,
                       int site, double value, const Field& y,
                       std::optional<double> u_rand) {
  if (const auto* gauss = std::get_if<Gaussian>(&m)) {
    double s = 0.0;
    for (const std::int32_t j : g.neighbors(site)) s += y[j] - gauss->alpha;
    const double mean = gauss->alpha + gauss->eta * s;
    return math::normal_cdf((value - mean) / std::sqrt(gauss->tau2));
  }
  if (!u_rand)
    throw std::invalid_argument(
        "conditional_cdf: binary families need the auxiliary uniform");
  const double p = math::logistic(log_odds(m, g, site, y));
  if (value == 0.0) return *u_rand * (1.0 - p);
  if (value == 1.0) return (1.0 - p) + *u_rand * p;
  throw std::invalid_argument("conditional_cdf: binary field values must be 0 or 1");
}

double site_kappa(const ModelSpec& m, const NeighborhoodGraph& g, int site) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          return spec.alpha;
        } else if constexpr (std::is_same_v<T, AutologisticRegression>) {
          return math::logistic(spec.beta0 +
                                spec.beta1 *
                                    g.coord_u[static_cast<std::size_t>(site)]);
        } else if constexpr (std::is_same_v<T, LocalStructureGraphical>) {
          return math::logistic(lsgm_logit_kappa(spec, site));
        } else {
          return spec.kappa;
        }
      },
      m);
}

}  // namespace conclique
