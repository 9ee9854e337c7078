#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"
#include "conclique/sampler.hpp"

namespace conclique {

// Row-major view over a stored chain: rows = retained iterations.
struct MatrixView {
  const double* data = nullptr;
  std::int64_t rows = 0;
  int cols = 0;
};

// ---- Algorithmic efficiency ----------------------------------------------

struct EfficiencyReport {
  // min over sites of 1 / iact_i; 0 when some site chain never moved.
  double alg = 0.0;
  std::vector<double> per_site_iact;      // clamped below at 1
  std::vector<int> zero_variance_sites;   // sites with degenerate chains
};

// Integrated autocorrelation per site via the initial-positive-sequence
// truncation: pair the autocovariances (gamma_2j + gamma_2j+1) and stop
// before the first nonpositive pair.  alg = min_i 1/iact_i, so it is the
// worst-site slowdown factor relative to iid draws.
EfficiencyReport alg_metric(MatrixView chain);

// ---- Computational efficiency --------------------------------------------

enum class SamplerKind { Conclique, SingleSite };

struct CompReport {
  double seconds_per_iteration = 0.0;  // median over trials
  double draws_per_second = 0.0;
  std::int64_t iterations_timed = 0;
};

// Wall-clock cost of one sweep, median of `trials` timed runs of
// `iterations` sweeps each (states are discarded, not stored).
CompReport comp_metric(const ModelSpec& m, const NeighborhoodGraph& g,
                       const ConcliqueCover* cover,  // nullptr for SingleSite
                       SamplerKind kind, std::int64_t iterations, int trials,
                       std::uint64_t seed = 0);

// ---- Goodness of fit ------------------------------------------------------

// Uniform residuals grouped by conclique class.  Residual of a site is its
// conditional CDF at the observed value given the observed neighbors;
// binary sites are randomized with the (seed, iteration, site) auxiliary
// uniforms so the residual is exactly uniform under the model.
struct ResidualSet {
  std::vector<std::vector<double>> by_class;
};
ResidualSet conclique_residuals(const ModelSpec& m, const NeighborhoodGraph& g,
                                const ConcliqueCover& cover, const Field& y,
                                std::uint64_t seed, std::uint64_t iteration = 0);

struct KsResult {
  double statistic = 0.0;  // sup |F_hat - F_U(0,1)|
  double p_value = 1.0;    // asymptotic Kolmogorov tail at sqrt(n) * D
};
KsResult ks_uniformity(std::span<const double> values);

// Largest KS departure from uniformity over the classes of a residual set.
KsResult ks_worst_class(const ResidualSet& residuals);

// Monte Carlo tail probability of an observed statistic within simulated
// reference values: #{sim >= obs} / M, ties counting toward the tail.  The
// result is an exact multiple of 1/M (0 when every simulated value falls
// below the observation).
double mc_pvalue_upper(double observed, std::span<const double> simulated);
// Two-sided version: 2 * min(lower, upper) capped at 1.
double mc_pvalue_two_sided(double observed, std::span<const double> simulated);

// Example summary statistic for binary fields: fraction of edges whose two
// endpoints are both 1.
double edge_concordance(const NeighborhoodGraph& g, const Field& y);

// ---- Exact references -----------------------------------------------------
// Small-system ground truth the samplers are tested against.  Kept
// independent of the sampler machinery: these work directly from the
// per-site conditional laws.

// Joint pmf of a binary model over all 2^n states (state index bit i =
// site i), computed by telescoping conditional ratios along a site path;
// n is capped at 20.
std::vector<double> exact_binary_joint(const ModelSpec& m,
                                       const NeighborhoodGraph& g);

// Mean vector and covariance of the Gaussian family: mean alpha * 1 and
// covariance tau2 * (I - eta * Adj)^-1, via dense Cholesky.  Throws
// NumericalError when the precision matrix is not positive definite.
struct GaussianMoments {
  std::vector<double> mean;        // n
  std::vector<double> covariance;  // n x n row-major
};
GaussianMoments exact_gaussian_moments(const ModelSpec& m,
                                       const NeighborhoodGraph& g);

// Total variation distance between a sampled binary chain and an exact
// joint pmf: 0.5 * sum_s |freq(s) - pmf(s)|.
double binary_tv_distance(MatrixView chain, std::span<const double> pmf);

}  // namespace conclique
