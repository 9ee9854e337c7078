#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conclique/field.hpp"
#include "conclique/graph.hpp"

namespace conclique {

// Model families.  Each one specifies the full conditional distribution of a
// site given its neighbors; the sampler never needs (and never computes) the
// joint normalizing constant.

// Conditional N(mean, tau2) with
//   mean_i = alpha + eta * sum_{j ~ i} (y_j - alpha).
struct Gaussian {
  double alpha = 0.0;
  double eta = 0.0;
  double tau2 = 1.0;
};

// Centered binary field, log-odds
//   A_i = logit(kappa) + eta * sum_{j ~ i} (y_j - kappa).
struct AutologisticIso {
  double kappa = 0.5;
  double eta = 0.0;
};

// Directional variant for four-nearest lattices: horizontal neighbors
// (same row) and vertical neighbors (same column) carry separate
// dependence parameters.
struct AutologisticAniso {
  double kappa = 0.5;
  double eta_u = 0.0;
  double eta_v = 0.0;
};

// Site-level logistic regression on the horizontal lattice coordinate
// combined with directional dependence:
//   logit(kappa_i) = beta0 + beta1 * u_i,        u_i = column + 1,
//   A_i = logit(kappa_i) + eta_u * sum_h (y_j - kappa_j)
//                        + eta_v * sum_v (y_j - kappa_j).
struct AutologisticRegression {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double eta_u = 0.0;
  double eta_v = 0.0;
};

// Classical uncentered parameterization, kept for contrast with the
// centered families:  A_i = logit(kappa) + eta * sum_{j ~ i} y_j.
struct AutologisticUncentered {
  double kappa = 0.5;
  double eta = 0.0;
};

// Binary model on the incidence graph of K_V whose sites are vertex pairs.
// Beyond the usual neighbor term it reacts to completed triangles:
//   A_i = logit(kappa)
//       + eta1 * mean_{j ~ i} (y_j - kappa)
//       + eta2 * mean_{{j,k} in T_i} (y_j * y_k - kappa^2)
// where T_i holds the (V - 2) unordered pairs of sites that close a
// triangle through i.  Both sums are averaged over their index sets so the
// parameters stay on a size-free scale.
struct TriadIncidence {
  double kappa = 0.5;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

// Binary field with site covariates and weighted dependence:
//   logit(kappa_i) = beta0 + beta1 x_i1 + beta2 x_i2 + beta3 x_i3,
//   A_i = logit(kappa_i) + eta * sum_{j ~ i} d_ij (y_j - kappa_j).
// covariates: one row of three values per site (empty -> all zero).
// weights d_ij: aligned with the graph's adjacency array, one value per
// directed entry, and must be symmetric (empty -> all one).
struct LocalStructureGraphical {
  std::array<double, 4> beta{0.0, 0.0, 0.0, 0.0};
  double eta = 0.0;
  std::vector<std::array<double, 3>> covariates;
  std::vector<double> weights;
};

using ModelSpec = std::variant<Gaussian, AutologisticIso, AutologisticAniso,
                               AutologisticRegression, AutologisticUncentered,
                               TriadIncidence, LocalStructureGraphical>;

bool is_binary_family(const ModelSpec& m);
// Canonical family tag used by serialization and the CLI.
std::string family_name(const ModelSpec& m);

// Parameter invariants that do not need a graph (tau2 > 0, kappa in (0,1),
// finite values).  Throws std::invalid_argument.
void validate_model(const ModelSpec& m);

// Compatibility of model and neighborhood structure: directional families
// need a four-nearest lattice, the triad family an incidence graph, and
// weighted/covariate arrays must match the graph's shape (weights
// symmetric).  Throws std::invalid_argument.
void validate_pairing(const ModelSpec& m, const NeighborhoodGraph& g);

// Non-fatal diagnostics, e.g. a Gaussian dependence parameter large enough
// that the implied joint precision matrix may lose positive definiteness.
std::vector<std::string> model_warnings(const ModelSpec& m,
                                        const NeighborhoodGraph& g);

// ---- Per-site conditional interface -------------------------------------
// These are the primitive operations every sampler variant is built from.

struct GaussianLaw {
  double mean = 0.0;
  double variance = 1.0;
};
struct BernoulliLaw {
  double p = 0.5;  // P(Y = 1)
};
using ConditionalLaw = std::variant<GaussianLaw, BernoulliLaw>;

// Full conditional of `site` given the current values of every other site.
ConditionalLaw conditional_law(const ModelSpec& m, const NeighborhoodGraph& g,
                               int site, const Field& y);

// Conditional log-odds A_i for binary families (throws std::invalid_argument
// for the Gaussian family, whose conditionals are not two-point).
double natural_parameter(const ModelSpec& m, const NeighborhoodGraph& g,
                         int site, const Field& y);

// Inverse-CDF draw from a conditional law; u must be strictly inside (0,1).
// Binary laws return 1.0 exactly when u > 1 - p.
double sample_conditional(const ConditionalLaw& law, double u);

// Conditional CDF evaluated at `value`, randomized for discrete laws:
// a Bernoulli law returns F(value-) + u_rand * P(Y = value), which is the
// uniformly distributed residual when `value` was drawn from the law.
// Binary families therefore require u_rand; Gaussian ignores it.
double conditional_cdf(const ModelSpec& m, const NeighborhoodGraph& g,
                       int site, double value, const Field& y,
                       std::optional<double> u_rand = std::nullopt);

// Per-site centering value: the alpha / kappa_i a site relaxes toward when
// dependence is switched off.  Used for marginal initialization.
double site_kappa(const ModelSpec& m, const NeighborhoodGraph& g, int site);

}  // namespace conclique
