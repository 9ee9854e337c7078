#include "conclique/sampler.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstring>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "conclique/math.hpp"
#include "conclique/rng.hpp"
#include "plan.hpp"

namespace conclique {

namespace {

void validate_config(const ChainConfig& cfg, int n) {
  if (cfg.iterations < 0) throw std::invalid_argument("chain: negative iterations");
  if (cfg.burn_in < 0 || cfg.burn_in > cfg.iterations)
    throw std::invalid_argument("chain: burn_in must lie in [0, iterations]");
  if (cfg.thinning < 1) throw std::invalid_argument("chain: thinning must be >= 1");
  if (cfg.threads < 1) throw std::invalid_argument("chain: threads must be >= 1");
  if (const auto* iv = std::get_if<InitVector>(&cfg.init))
    if (iv->values.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("chain: init vector length != n");
}

std::int64_t retained_count(const ChainConfig& cfg) {
  return (cfg.iterations - cfg.burn_in) / cfg.thinning;
}

// Uniform permutation of 0..k-1 from the chain's counter stream.
std::vector<std::int32_t> order_permutation(std::size_t k, std::uint64_t seed,
                                            std::uint64_t iteration) {
  std::vector<std::int32_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double u = rng::uniform_at(seed, iteration, static_cast<std::uint32_t>(i),
                                     rng::kPurposeOrder);
    const std::size_t j = i + static_cast<std::size_t>(u * static_cast<double>(k - i));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

// Persistent workers executing half-open range slices of a class pass.
// Spun up once per run; run() hands out (cls, range) work and waits.
class PassPool {
 public:
  PassPool(const detail::Plan& plan, detail::Workspace& ws, int threads)
      : plan_(plan), ws_(ws), scratch_(static_cast<std::size_t>(threads)) {
    for (int t = 1; t < threads; ++t)
      workers_.emplace_back([this, t] { worker(t); });
  }

  ~PassPool() {
    {
      std::lock_guard lock(m_);
      stop_ = true;
      ++generation_;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  void run_pass(int cls) {
    const std::size_t units = detail::unit_count(plan_, cls);
    const int t = static_cast<int>(workers_.size()) + 1;
    if (t == 1 || units < 2 * static_cast<std::size_t>(t)) {
      detail::run_units(plan_, cls, 0, units, ws_, scratch_[0]);
    } else {
      {
        std::lock_guard lock(m_);
        cls_ = cls;
        units_ = units;
        pending_ = t - 1;
        ++generation_;
      }
      cv_.notify_all();
      run_slice(cls, units, 0, t);
      std::unique_lock lock(m_);
      done_cv_.wait(lock, [this] { return pending_ == 0; });
    }
    for (auto& s : scratch_) detail::flush_patches(plan_, cls, ws_, s);
  }

 private:
  void run_slice(int cls, std::size_t units, int slot, int t) {
    const std::size_t lo = units * static_cast<std::size_t>(slot) / t;
    const std::size_t hi = units * (static_cast<std::size_t>(slot) + 1) / t;
    detail::run_units(plan_, cls, lo, hi, ws_, scratch_[static_cast<std::size_t>(slot)]);
  }

  void worker(int slot) {
    std::uint64_t seen = 0;
    for (;;) {
      int cls;
      std::size_t units;
      {
        std::unique_lock lock(m_);
        cv_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stop_) return;
        cls = cls_;
        units = units_;
      }
      run_slice(cls, units, slot, static_cast<int>(workers_.size()) + 1);
      {
        std::lock_guard lock(m_);
        if (--pending_ == 0) done_cv_.notify_one();
      }
    }
  }

  const detail::Plan& plan_;
  detail::Workspace& ws_;
  std::vector<detail::ThreadScratch> scratch_;
  std::vector<std::thread> workers_;
  std::mutex m_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::uint64_t generation_ = 0;
  int cls_ = 0;
  std::size_t units_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

}  // namespace

Field init_field(const ModelSpec& m, const NeighborhoodGraph& g,
                 const InitPolicy& init, std::uint64_t seed) {
  Field y(g.n);
  if (const auto* c = std::get_if<InitConstant>(&init)) {
    for (int i = 0; i < g.n; ++i) y[i] = c->value;
    return y;
  }
  if (const auto* v = std::get_if<InitVector>(&init)) {
    if (v->values.size() != static_cast<std::size_t>(g.n))
      throw std::invalid_argument("init vector length != n");
    y.values = v->values;
    return y;
  }
  // Independent draws around the centering values.  The reserved iteration
  // slot keeps these uniforms disjoint from every sweep's draws.
  constexpr std::uint64_t kInitIteration = ~std::uint64_t{0};
  const bool binary = is_binary_family(m);
  const double sigma = binary ? 0.0 : std::sqrt(std::get<Gaussian>(m).tau2);
  for (int i = 0; i < g.n; ++i) {
    const double u = rng::uniform_at(seed, kInitIteration,
                                     static_cast<std::uint32_t>(i),
                                     rng::kPurposeDraw);
    const double kappa = site_kappa(m, g, i);
    y[i] = binary ? (u > 1.0 - kappa ? 1.0 : 0.0)
                  : kappa + sigma * math::normal_quantile(u);
  }
  return y;
}

// ---------------------------------------------------------------------------

struct CgsSampler::Impl {
  ModelSpec model;
  const NeighborhoodGraph* graph;
  ConcliqueCover cover;
  detail::Plan plan;
};

CgsSampler::CgsSampler(ModelSpec m, const NeighborhoodGraph& g,
                       ConcliqueCover cover)
    : impl_(new Impl{std::move(m), &g, std::move(cover), {}}) {
  validate_pairing(impl_->model, g);
  const CoverCheck check = verify_cover(g, impl_->cover);
  if (!check.ok)
    throw std::invalid_argument("conclique cover rejected: " + check.reason);
  impl_->plan = detail::build_plan(impl_->model, g, impl_->cover);
}

CgsSampler::~CgsSampler() = default;
CgsSampler::CgsSampler(CgsSampler&&) noexcept = default;
CgsSampler& CgsSampler::operator=(CgsSampler&&) noexcept = default;

const NeighborhoodGraph& CgsSampler::graph() const { return *impl_->graph; }
const ConcliqueCover& CgsSampler::cover() const { return impl_->cover; }
const ModelSpec& CgsSampler::model() const { return impl_->model; }

void CgsSampler::iterate(Field& y, std::uint64_t iteration, std::uint64_t seed,
                         int threads) const {
  if (y.n() != impl_->plan.n)
    throw std::invalid_argument("iterate: field size != n");
  if (threads < 1) throw std::invalid_argument("iterate: threads must be >= 1");
  detail::Workspace ws;
  ws.reset(impl_->plan);
  ws.load_field(impl_->plan, y.values.data());
  rng::uniform_fill(seed, iteration, 0, static_cast<std::uint32_t>(impl_->plan.n),
                    rng::kPurposeDraw, ws.u.data());
  PassPool pool(impl_->plan, ws, threads);
  const int q = impl_->cover.num_classes;
  for (int cls = 0; cls < q; ++cls) pool.run_pass(cls);
  ws.store_field(impl_->plan, y.values.data());
}

ChainResult CgsSampler::run(const ChainConfig& cfg, const SampleSink& sink) const {
  validate_config(cfg, impl_->plan.n);
  const detail::Plan& plan = impl_->plan;
  const int q = impl_->cover.num_classes;

  ChainResult out;
  out.n = plan.n;

  Field start = init_field(impl_->model, *impl_->graph, cfg.init, cfg.seed);
  detail::Workspace ws;
  ws.reset(plan);
  ws.load_field(plan, start.values.data());

  const bool keep = !sink;
  if (keep) {
    out.samples.reserve(static_cast<std::size_t>(retained_count(cfg)) *
                        static_cast<std::size_t>(plan.n));
  }

  PassPool pool(plan, ws, cfg.threads);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t it = 0; it < cfg.iterations; ++it) {
    rng::uniform_fill(cfg.seed, static_cast<std::uint64_t>(it), 0,
                      static_cast<std::uint32_t>(plan.n), rng::kPurposeDraw,
                      ws.u.data());
    if (cfg.order == OrderPolicy::Fixed) {
      for (int cls = 0; cls < q; ++cls) pool.run_pass(cls);
    } else {
      const auto perm = order_permutation(static_cast<std::size_t>(q), cfg.seed,
                                          static_cast<std::uint64_t>(it));
      for (const std::int32_t cls : perm) pool.run_pass(cls);
    }
    out.counters.conditional_draws += static_cast<std::uint64_t>(plan.n);
    out.counters.class_passes += static_cast<std::uint64_t>(q);
    const std::int64_t offset = it - cfg.burn_in;
    if (offset >= 0 && offset % cfg.thinning == 0) {
      ++out.retained;
      if (keep) {
        const std::size_t at = out.samples.size();
        out.samples.resize(at + static_cast<std::size_t>(plan.n));
        ws.store_field(plan, out.samples.data() + at);
      } else {
        ws.store_field(plan, start.values.data());
        sink(it, {start.values.data(), static_cast<std::size_t>(plan.n)});
      }
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.iterations_run = cfg.iterations;
  out.seconds_total = std::chrono::duration<double>(t1 - t0).count();
  out.seconds_per_iteration =
      cfg.iterations > 0 ? out.seconds_total / static_cast<double>(cfg.iterations)
                         : 0.0;
  return out;
}

ChainResult CgsSampler::run(const ChainConfig& cfg) const {
  return run(cfg, SampleSink{});
}

// ---------------------------------------------------------------------------

struct SingleSiteSampler::Impl {
  ModelSpec model;
  const NeighborhoodGraph* graph;
};

SingleSiteSampler::SingleSiteSampler(ModelSpec m, const NeighborhoodGraph& g)
    : impl_(new Impl{std::move(m), &g}) {
  validate_pairing(impl_->model, g);
}

SingleSiteSampler::~SingleSiteSampler() = default;
SingleSiteSampler::SingleSiteSampler(SingleSiteSampler&&) noexcept = default;
SingleSiteSampler& SingleSiteSampler::operator=(SingleSiteSampler&&) noexcept =
    default;

const NeighborhoodGraph& SingleSiteSampler::graph() const { return *impl_->graph; }
const ModelSpec& SingleSiteSampler::model() const { return impl_->model; }

void SingleSiteSampler::iterate(Field& y, std::uint64_t iteration,
                                std::uint64_t seed) const {
  const NeighborhoodGraph& g = *impl_->graph;
  if (y.n() != g.n) throw std::invalid_argument("iterate: field size != n");
  for (int site = 0; site < g.n; ++site) {
    const ConditionalLaw law = conditional_law(impl_->model, g, site, y);
    const double u = rng::uniform_at(seed, iteration,
                                     static_cast<std::uint32_t>(site),
                                     rng::kPurposeDraw);
    y[site] = sample_conditional(law, u);
  }
}

ChainResult SingleSiteSampler::run(const ChainConfig& cfg,
                                   const SampleSink& sink) const {
  const NeighborhoodGraph& g = *impl_->graph;
  validate_config(cfg, g.n);
  ChainResult out;
  out.n = g.n;
  Field y = init_field(impl_->model, g, cfg.init, cfg.seed);
  const bool keep = !sink;
  if (keep)
    out.samples.reserve(static_cast<std::size_t>(retained_count(cfg)) *
                        static_cast<std::size_t>(g.n));

  const auto t0 = std::chrono::steady_clock::now();
  for (std::int64_t it = 0; it < cfg.iterations; ++it) {
    if (cfg.order == OrderPolicy::Fixed) {
      iterate(y, static_cast<std::uint64_t>(it), cfg.seed);
    } else {
      const auto perm = order_permutation(static_cast<std::size_t>(g.n), cfg.seed,
                                          static_cast<std::uint64_t>(it));
      for (const std::int32_t site : perm) {
        const ConditionalLaw law = conditional_law(impl_->model, g, site, y);
        const double u = rng::uniform_at(cfg.seed, static_cast<std::uint64_t>(it),
                                         static_cast<std::uint32_t>(site),
                                         rng::kPurposeDraw);
        y[site] = sample_conditional(law, u);
      }
    }
    out.counters.conditional_draws += static_cast<std::uint64_t>(g.n);
    const std::int64_t offset = it - cfg.burn_in;
    if (offset >= 0 && offset % cfg.thinning == 0) {
      ++out.retained;
      if (keep)
        out.samples.insert(out.samples.end(), y.values.begin(), y.values.end());
      else
        sink(it, {y.values.data(), y.values.size()});
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.iterations_run = cfg.iterations;
  out.seconds_total = std::chrono::duration<double>(t1 - t0).count();
  out.seconds_per_iteration =
      cfg.iterations > 0 ? out.seconds_total / static_cast<double>(cfg.iterations)
                         : 0.0;
  return out;
}

ChainResult SingleSiteSampler::run(const ChainConfig& cfg) const {
  return run(cfg, SampleSink{});
}

// ---------------------------------------------------------------------------

ChainResult run_cgs(const ModelSpec& m, const NeighborhoodGraph& g,
                    const ConcliqueCover& cover, const ChainConfig& cfg) {
  return CgsSampler(m, g, cover).run(cfg);
}

ChainResult run_single_site(const ModelSpec& m, const NeighborhoodGraph& g,
                            const ChainConfig& cfg) {
  return SingleSiteSampler(m, g).run(cfg);
}

Field cgs_iteration(const ModelSpec& m, const NeighborhoodGraph& g,
                    const ConcliqueCover& cover, const Field& y,
                    std::uint64_t iteration, std::uint64_t seed) {
  CgsSampler s(m, g, cover);
  Field out = y;
  s.iterate(out, iteration, seed);
  return out;
}

}  // namespace conclique
