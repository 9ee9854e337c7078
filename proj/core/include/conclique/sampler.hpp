#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"

namespace conclique {

// How a chain is started.
struct InitConstant {
  double value = 0.0;
};
struct InitVector {
  std::vector<double> values;
};
// Independent per-site draws around the model's centering values:
// binary sites are Bernoulli(kappa_i), Gaussian sites N(alpha, tau2).
struct InitMarginal {};
using InitPolicy = std::variant<InitConstant, InitVector, InitMarginal>;

enum class OrderPolicy {
  // Classes (conclique sampler) or sites (single-site sampler) are visited
  // in index order every iteration.
  Fixed,
  // A fresh uniform permutation per iteration, drawn from the chain's own
  // counter stream so runs stay reproducible.
  RandomPermutation,
};

struct ChainConfig {
  std::int64_t iterations = 1000;  // total sweeps, burn-in included
  std::int64_t burn_in = 0;
  std::int64_t thinning = 1;       // keep sweeps t = burn_in, burn_in + thinning, ...
  std::uint64_t seed = 0;
  InitPolicy init = InitConstant{0.0};
  OrderPolicy order = OrderPolicy::Fixed;
  int threads = 1;
};

struct SamplerCounters {
  std::uint64_t conditional_draws = 0;
  std::uint64_t class_passes = 0;  // conclique sampler only
};

struct ChainResult {
  int n = 0;
  std::int64_t retained = 0;
  std::vector<double> samples;  // retained x n, row-major; empty for sink runs
  std::int64_t iterations_run = 0;
  double seconds_total = 0.0;
  double seconds_per_iteration = 0.0;
  SamplerCounters counters;

  std::span<const double> row(std::int64_t k) const {
    return {samples.data() + k * n, static_cast<std::size_t>(n)};
  }
};

// Receives each retained state right after its sweep.  Used to stream
// samples to disk or to time a run without materializing it.
using SampleSink = std::function<void(std::int64_t iteration, std::span<const double> state)>;

Field init_field(const ModelSpec& m, const NeighborhoodGraph& g,
                 const InitPolicy& init, std::uint64_t seed);

// Conclique-based Gibbs sampler.  One iteration visits every class once and
// redraws all of its sites from their full conditionals in a single batch;
// within a class that is exact because class members are never neighbors,
// so none of them conditions on another.  Construction compiles the
// (model, graph, cover) triple into flat per-class update plans; the
// per-iteration work is a handful of contiguous array passes.
//
// The graph must outlive the sampler; model and cover are copied in.
class CgsSampler {
 public:
  CgsSampler(ModelSpec m, const NeighborhoodGraph& g, ConcliqueCover cover);
  ~CgsSampler();
  CgsSampler(CgsSampler&&) noexcept;
  CgsSampler& operator=(CgsSampler&&) noexcept;

  // One full sweep in place.  `iteration` selects the counter stream slice,
  // so replaying an iteration number reproduces it exactly.
  void iterate(Field& y, std::uint64_t iteration, std::uint64_t seed,
               int threads = 1) const;

  ChainResult run(const ChainConfig& cfg) const;
  ChainResult run(const ChainConfig& cfg, const SampleSink& sink) const;

  const NeighborhoodGraph& graph() const;
  const ConcliqueCover& cover() const;
  const ModelSpec& model() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Reference sampler: a sweep visits sites one at a time, rebuilding each
// full conditional from the neighborhood structure and drawing through the
// generic per-site interface (conditional_law / sample_conditional).
class SingleSiteSampler {
 public:
  SingleSiteSampler(ModelSpec m, const NeighborhoodGraph& g);
  ~SingleSiteSampler();
  SingleSiteSampler(SingleSiteSampler&&) noexcept;
  SingleSiteSampler& operator=(SingleSiteSampler&&) noexcept;

  void iterate(Field& y, std::uint64_t iteration, std::uint64_t seed) const;
  ChainResult run(const ChainConfig& cfg) const;
  ChainResult run(const ChainConfig& cfg, const SampleSink& sink) const;

  const NeighborhoodGraph& graph() const;
  const ModelSpec& model() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience wrappers for one-shot runs.
ChainResult run_cgs(const ModelSpec& m, const NeighborhoodGraph& g,
                    const ConcliqueCover& cover, const ChainConfig& cfg);
ChainResult run_single_site(const ModelSpec& m, const NeighborhoodGraph& g,
                            const ChainConfig& cfg);

// One conclique sweep of `y`, returning the updated field.
Field cgs_iteration(const ModelSpec& m, const NeighborhoodGraph& g,
                    const ConcliqueCover& cover, const Field& y,
                    std::uint64_t iteration, std::uint64_t seed);

}  // namespace conclique
