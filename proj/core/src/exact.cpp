#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "conclique/common.hpp"
#include "conclique/diagnostics.hpp"
#include "conclique/math.hpp"

namespace conclique {

namespace {

// Sum of site log-odds along one site path through `mask`, starting from
// the all-zero state.  Each factor conditions on the sites already visited,
// so the sum telescopes to log pi(mask) - log pi(0) when the per-site
// conditionals are mutually consistent.
double path_log_weight(const ModelSpec& m, const NeighborhoodGraph& g,
                       std::uint32_t mask, bool ascending, Field& scratch) {
  std::fill(scratch.values.begin(), scratch.values.end(), 0.0);
  double logw = 0.0;
  for (int step = 0; step < g.n; ++step) {
    const int i = ascending ? step : g.n - 1 - step;
    if (mask >> i & 1u) {
      logw += natural_parameter(m, g, i, scratch);
      scratch.values[static_cast<std::size_t>(i)] = 1.0;
    }
  }
  return logw;
}

}  // namespace

std::vector<double> exact_binary_joint(const ModelSpec& m,
                                       const NeighborhoodGraph& g) {
  validate_model(m);
  validate_pairing(m, g);
  if (!is_binary_family(m))
    throw std::invalid_argument("exact_binary_joint: model is not binary");
  if (g.n < 1 || g.n > 20)
    throw std::invalid_argument("exact_binary_joint: supports 1..20 sites");
  const std::size_t states = std::size_t{1} << g.n;
  std::vector<double> logw(states);
  Field scratch;
  scratch.values.assign(static_cast<std::size_t>(g.n), 0.0);
  double max_gap = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    const auto mask = static_cast<std::uint32_t>(s);
    const double up = path_log_weight(m, g, mask, true, scratch);
    const double down = path_log_weight(m, g, mask, false, scratch);
    max_gap = std::max(max_gap, std::fabs(up - down));
    logw[s] = up;
  }
  // Path independence is what makes the conditional specification a joint
  // distribution at all; a visible gap means the inputs are inconsistent.
  if (max_gap > 1e-7)
    throw NumericalError(
        "exact_binary_joint: site paths disagree; the conditional "
        "specification is not self-consistent");
  double top = logw[0];
  for (const double w : logw) top = std::max(top, w);
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : logw) w /= total;
  return logw;
}

GaussianMoments exact_gaussian_moments(const ModelSpec& m,
                                       const NeighborhoodGraph& g) {
  validate_model(m);
  validate_pairing(m, g);
  const auto* gm = std::get_if<Gaussian>(&m);
  if (gm == nullptr)
    throw std::invalid_argument(
        "exact_gaussian_moments: model is not the Gaussian family");
  const int n = g.n;
  std::vector<double> prec(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    prec[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (const std::int32_t j : g.neighbors(i))
      prec[static_cast<std::size_t>(i) * n + j] = -gm->eta;
  }
  math::cholesky_in_place(prec, n);
  GaussianMoments out;
  out.mean.assign(static_cast<std::size_t>(n), gm->alpha);
  out.covariance.assign(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    col[static_cast<std::size_t>(j)] = gm->tau2;
    math::cholesky_solve(prec, n, col);
    for (int i = 0; i < n; ++i)
      out.covariance[static_cast<std::size_t>(i) * n + j] =
          col[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace conclique
