// conclique -- run the samplers and diagnostics from a JSON config.
//
//   conclique color     --config run.json [--output DIR]
//   conclique simulate  --config run.json [--seed S] [--threads N] [--output DIR]
//   conclique benchmark --config run.json [--output DIR]
//   conclique gof       --config run.json [--seed S]
//
// One config document describes the whole run; every path inside it is
// resolved against the config file's directory, and relative output paths
// move under --output DIR when that flag is given.  --seed overrides the
// config seed, --threads the thread count (falling back to the
// CONCLIQUE_THREADS variable and then the hardware count).
//
// Exit codes: 0 success, 2 configuration problem, 3 numerical failure.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conclique/common.hpp"
#include "conclique/cover.hpp"
#include "conclique/diagnostics.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/io.hpp"
#include "conclique/model.hpp"
#include "conclique/sampler.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace conclique;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output_dir;
};

struct Config {
  json doc;
  fs::path base;  // directory of the config file
};

[[noreturn]] void bad_config(const std::string& what) {
  throw std::invalid_argument(what);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open config \"" + path + "\"");
  Config c;
  try {
    in >> c.doc;
  } catch (const json::exception& e) {
    bad_config(path + ": " + e.what());
  }
  if (!c.doc.is_object()) bad_config(path + ": config must be a JSON object");
  c.base = fs::absolute(fs::path(path)).parent_path();
  return c;
}

std::string resolve_in(const fs::path& base, const std::string& p) {
  fs::path q(p);
  return q.is_absolute() ? q.string() : (base / q).string();
}

// Output files: relative names land in --output DIR when given, else next
// to the config.
std::string resolve_out(const Config& c, const Options& opt,
                        const std::string& p) {
  fs::path q(p);
  if (q.is_absolute()) return q.string();
  const fs::path dir = opt.output_dir ? fs::path(*opt.output_dir) : c.base;
  fs::create_directories(dir);
  return (dir / q).string();
}

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) bad_config(std::string("missing \"") + key + "\"");
  return j.at(key);
}

LatticeKind kind_from(const std::string& s) {
  if (s == "two_nearest") return LatticeKind::TwoNearest;
  if (s == "four_nearest") return LatticeKind::FourNearest;
  if (s == "eight_nearest") return LatticeKind::EightNearest;
  bad_config("unknown lattice kind \"" + s + "\"");
}

NeighborhoodGraph build_graph(const Config& c) {
  const json& t = require(c.doc, "topology");
  if (t.contains("lattice")) {
    const json& l = t.at("lattice");
    return build_lattice(require(l, "rows").get<int>(),
                         require(l, "cols").get<int>(),
                         kind_from(l.value("kind", "four_nearest")));
  }
  if (t.contains("incidence"))
    return build_incidence(require(t.at("incidence"), "vertices").get<int>());
  if (t.contains("threshold")) {
    const json& th = t.at("threshold");
    const io::SampleMatrix d = io::load_matrix_csv(
        resolve_in(c.base, require(th, "distances").get<std::string>()));
    if (d.rows != d.cols)
      bad_config("threshold distance matrix must be square");
    return build_threshold_graph(d.data, d.cols,
                                 require(th, "value").get<double>());
  }
  if (t.contains("file"))
    return io::load_graph(resolve_in(c.base, t.at("file").get<std::string>()));
  bad_config("topology needs one of \"lattice\", \"incidence\", "
             "\"threshold\", \"file\"");
}

// Inline models use the same schema as a model file.  A "weights_csv"
// reference needs the graph to expand edge weights into adjacency order, so
// it is peeled off before the generic parse and resolved here; `g` is null
// for subcommands that have no single fixed graph.
ModelSpec build_model(const Config& c, const NeighborhoodGraph* g) {
  const json& spec_json = require(c.doc, "model");
  json doc = spec_json;
  std::string path;
  fs::path dir = c.base;
  if (spec_json.is_object() && spec_json.contains("file")) {
    path = resolve_in(c.base, spec_json.at("file").get<std::string>());
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
      throw std::invalid_argument(path + ": not valid JSON");
    dir = fs::path(path).parent_path();
    if (dir.empty()) dir = ".";
  }
  std::string weights_ref;
  if (doc.is_object() && doc.value("family", "") == "local_structure" &&
      doc.contains("weights_csv")) {
    if (!doc["weights_csv"].is_string())
      bad_config("\"weights_csv\" must be a path string");
    weights_ref = doc["weights_csv"].get<std::string>();
    doc.erase("weights_csv");
  }
  ModelSpec m;
  try {
    m = io::parse_model_json(doc.dump(), dir.string());
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    const std::string tag = "<model json>";
    if (const auto at = msg.find(tag); at != std::string::npos && !path.empty())
      msg.replace(at, tag.size(), path);
    throw std::invalid_argument(msg);
  }
  if (!weights_ref.empty()) {
    if (g == nullptr)
      bad_config("\"weights_csv\" needs a fixed topology; inline \"weights\" "
                 "instead");
    std::get<LocalStructureGraphical>(m).weights = io::load_edge_weights_csv(
        resolve_in(dir, weights_ref), *g);
  }
  return m;
}

struct CoverBuild {
  ConcliqueCover cover;
  std::string policy;
  double seconds = 0.0;
};

CoverBuild build_cover(const Config& c, const NeighborhoodGraph& g) {
  json pol = c.doc.value("cover", json("analytic"));
  CoverBuild out;
  const auto t0 = std::chrono::steady_clock::now();
  if (pol.is_object()) {
    out.policy = "file";
    out.cover = io::load_cover_json(
        resolve_in(c.base, require(pol, "file").get<std::string>()), g);
  } else {
    out.policy = pol.get<std::string>();
    if (out.policy == "analytic") {
      if (g.is_lattice())
        out.cover = analytic_lattice_cover(g);
      else if (g.is_incidence())
        out.cover = round_robin_edge_cover(g);
      else
        bad_config("analytic cover needs a lattice or incidence topology");
    } else if (out.policy == "dsatur") {
      out.cover = dsatur(g);
    } else if (out.policy == "welsh_powell") {
      out.cover = greedy_welsh_powell(g);
    } else {
      bad_config("unknown cover policy \"" + out.policy + "\"");
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  const CoverCheck chk = verify_cover(g, out.cover);
  if (!chk.ok) bad_config("cover is not a conclique partition: " + chk.reason);
  return out;
}

int resolve_threads(const Config& c, const Options& opt) {
  if (opt.threads) return *opt.threads;
  if (c.doc.contains("chain") && c.doc.at("chain").contains("threads"))
    return c.doc.at("chain").at("threads").get<int>();
  if (const char* env = std::getenv("CONCLIQUE_THREADS")) {
    try {
      return std::stoi(env);
    } catch (...) {
      bad_config("CONCLIQUE_THREADS is not a number");
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

ChainConfig chain_config(const Config& c, const Options& opt) {
  ChainConfig cfg;
  const json chain = c.doc.value("chain", json::object());
  cfg.iterations = chain.value("iterations", std::int64_t{1000});
  cfg.burn_in = chain.value("burn_in", std::int64_t{0});
  cfg.thinning = chain.value("thinning", std::int64_t{1});
  cfg.seed = chain.value("seed", std::uint64_t{0});
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.threads = resolve_threads(c, opt);
  if (chain.contains("init")) {
    const json& init = chain.at("init");
    if (init.is_number()) {
      cfg.init = InitConstant{init.get<double>()};
    } else if (init.is_string() && init.get<std::string>() == "marginal") {
      cfg.init = InitMarginal{};
    } else if (init.is_object() && init.contains("file")) {
      cfg.init = InitVector{io::load_vector_csv(
          resolve_in(c.base, init.at("file").get<std::string>()))};
    } else {
      bad_config("chain.init must be a number, \"marginal\", or {\"file\": ...}");
    }
  }
  const std::string order = chain.value("order", "fixed");
  if (order == "fixed")
    cfg.order = OrderPolicy::Fixed;
  else if (order == "random")
    cfg.order = OrderPolicy::RandomPermutation;
  else
    bad_config("chain.order must be \"fixed\" or \"random\"");
  return cfg;
}

enum class Sampler { Cgs, SingleSite };

Sampler sampler_choice(const Config& c) {
  const std::string s = c.doc.value("sampler", "cgs");
  if (s == "cgs") return Sampler::Cgs;
  if (s == "single-site") return Sampler::SingleSite;
  bad_config("sampler must be \"cgs\" or \"single-site\"");
}

void print_warnings(const ModelSpec& m, const NeighborhoodGraph& g) {
  for (const std::string& w : model_warnings(m, g))
    std::cerr << "warning: " << w << "\n";
}

// ---- color ---------------------------------------------------------------

int cmd_color(const Config& c, const Options& opt) {
  const NeighborhoodGraph g = build_graph(c);
  const CoverBuild cb = build_cover(c, g);
  const json out_cfg = c.doc.value("output", json::object());
  const std::string cover_path =
      resolve_out(c, opt, out_cfg.value("cover", "cover.json"));
  io::save_cover_json(cover_path, cb.cover);
  std::printf("policy = %s\n", cb.policy.c_str());
  std::printf("Q = %d\n", cb.cover.num_classes);
  std::printf("Delta_n = %d\n", delta_n_bound(g));
  std::printf("coloring_seconds = %.6f\n", cb.seconds);
  std::printf("cover = %s\n", cover_path.c_str());
  return 0;
}

// ---- simulate ------------------------------------------------------------

int cmd_simulate(const Config& c, const Options& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  const NeighborhoodGraph g = build_graph(c);
  const ModelSpec model = build_model(c, &g);
  validate_model(model);
  validate_pairing(model, g);
  print_warnings(model, g);
  const Sampler which = sampler_choice(c);
  const ChainConfig cfg = chain_config(c, opt);

  ChainResult res;
  int q = 0;
  double overhead = 0.0;
  if (which == Sampler::Cgs) {
    const CoverBuild cb = build_cover(c, g);
    q = cb.cover.num_classes;
    CgsSampler sampler(model, g, cb.cover);
    overhead = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
    res = sampler.run(cfg);
  } else {
    SingleSiteSampler sampler(model, g);
    overhead = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
                   .count();
    res = sampler.run(cfg);
  }

  const json out_cfg = c.doc.value("output", json::object());
  const std::string format = out_cfg.value("format", "csv");
  const std::string default_name =
      format == "cgs1" ? "samples.cgs1" : "samples.csv";
  const std::string samples_path =
      resolve_out(c, opt, out_cfg.value("samples", default_name));

  io::SampleMatrix s;
  s.data = std::move(res.samples);
  s.rows = res.retained;
  s.cols = res.n;
  if (format == "csv")
    io::write_samples_csv(samples_path, s);
  else if (format == "cgs1")
    io::write_samples_cgs1(samples_path, s);
  else
    bad_config("output.format must be \"csv\" or \"cgs1\"");

  io::TimingRecord t;
  t.sampler = which == Sampler::Cgs ? "conclique" : "single-site";
  t.family = family_name(model);
  t.n = res.n;
  t.q = q;
  t.iterations = res.iterations_run;
  t.burn_in = cfg.burn_in;
  t.thinning = cfg.thinning;
  t.retained = res.retained;
  t.threads = cfg.threads;
  t.seed = cfg.seed;
  t.seconds_total = res.seconds_total;
  t.seconds_per_iteration = res.seconds_per_iteration;
  t.draws_per_second =
      res.seconds_total > 0.0
          ? static_cast<double>(res.counters.conditional_draws) /
                res.seconds_total
          : 0.0;
  t.overhead_seconds = overhead;
  const std::string timing_path =
      resolve_out(c, opt, out_cfg.value("timing", "timing.json"));
  io::write_timing_json(timing_path, t);

  std::printf("sampler = %s\n", t.sampler.c_str());
  std::printf("n = %d\n", t.n);
  std::printf("seed = %llu\n", static_cast<unsigned long long>(cfg.seed));
  std::printf("retained = %lld\n", static_cast<long long>(res.retained));
  std::printf("seconds_total = %.6f\n", res.seconds_total);
  std::printf("samples = %s\n", samples_path.c_str());
  std::printf("timing = %s\n", timing_path.c_str());
  return 0;
}

// ---- benchmark -----------------------------------------------------------

// Times one full run (all states discarded) and returns wall seconds.
double timed_run(const ModelSpec& m, const NeighborhoodGraph& g,
                 const ConcliqueCover* cover, Sampler which,
                 std::int64_t iterations, std::uint64_t seed, int threads) {
  ChainConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = iterations;  // nothing retained, pure timing
  cfg.seed = seed;
  cfg.threads = threads;
  const ChainResult r =
      which == Sampler::Cgs
          ? CgsSampler(m, g, *cover).run(cfg)
          : SingleSiteSampler(m, g).run(cfg);
  return r.seconds_total;
}

int cmd_benchmark(const Config& c, const Options& opt) {
  const json& b = require(c.doc, "benchmark");
  const ModelSpec model = build_model(c, nullptr);
  validate_model(model);

  const std::vector<std::int64_t> iteration_grid =
      require(b, "iterations").get<std::vector<std::int64_t>>();
  const int replicates = b.value("replicates", 1);
  const std::uint64_t seed0 =
      opt.seed ? *opt.seed : c.doc.value("chain", json::object())
                                 .value("seed", std::uint64_t{0});
  const int threads = resolve_threads(c, opt);
  std::vector<std::string> samplers =
      b.value("samplers", std::vector<std::string>{"cgs", "single-site"});

  // The size grid: square lattices or incidence vertex counts.
  struct Cell {
    NeighborhoodGraph graph;
    int label = 0;  // site count n, or V for incidence topologies
  };
  std::vector<Cell> cells;
  if (b.contains("lattice_sizes")) {
    const LatticeKind kind = kind_from(b.value("kind", "four_nearest"));
    for (const int m : b.at("lattice_sizes").get<std::vector<int>>()) {
      Cell cell{build_lattice(m, m, kind), m * m};
      cells.push_back(std::move(cell));
    }
  } else if (b.contains("vertices")) {
    for (const int v : b.at("vertices").get<std::vector<int>>()) {
      Cell cell{build_incidence(v), v};
      cells.push_back(std::move(cell));
    }
  } else {
    bad_config("benchmark needs \"lattice_sizes\" or \"vertices\"");
  }
  if (cells.empty() || iteration_grid.empty() || samplers.empty() ||
      replicates < 1)
    bad_config("benchmark grid is empty");

  const json out_cfg = c.doc.value("output", json::object());
  const std::string csv_path =
      resolve_out(c, opt, out_cfg.value("benchmark", "benchmark.csv"));
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot write \"" + csv_path + "\"");
  out << "sampler,n,M,replicate,seconds\n";

  for (const Cell& cell : cells) {
    validate_pairing(model, cell.graph);
    ConcliqueCover cover;
    bool have_cover = false;
    for (const std::string& name : samplers) {
      Sampler which;
      if (name == "cgs")
        which = Sampler::Cgs;
      else if (name == "single-site")
        which = Sampler::SingleSite;
      else
        bad_config("unknown sampler \"" + name + "\" in benchmark.samplers");
      if (which == Sampler::Cgs && !have_cover) {
        cover = build_cover(c, cell.graph).cover;
        have_cover = true;
      }
      for (const std::int64_t m_iters : iteration_grid)
        for (int rep = 0; rep < replicates; ++rep) {
          const double secs =
              timed_run(model, cell.graph, &cover, which, m_iters,
                        seed0 + static_cast<std::uint64_t>(rep), threads);
          char row[160];
          std::snprintf(row, sizeof row, "%s,%d,%lld,%d,%.9f\n", name.c_str(),
                        cell.label, static_cast<long long>(m_iters), rep,
                        secs);
          out << row;
        }
    }
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for \"" + csv_path + "\"");
  std::printf("benchmark = %s\n", csv_path.c_str());
  return 0;
}

// ---- gof -----------------------------------------------------------------

using Statistic = double (*)(const NeighborhoodGraph&, const Field&);

// Named summary statistics for the Monte Carlo test.  Extend here.
const std::map<std::string, Statistic>& statistic_registry() {
  static const std::map<std::string, Statistic> reg = {
      {"edge_concordance",
       [](const NeighborhoodGraph& g, const Field& y) {
         return edge_concordance(g, y);
       }},
  };
  return reg;
}

int cmd_gof(const Config& c, const Options& opt) {
  const json& gof = require(c.doc, "gof");
  const NeighborhoodGraph g = build_graph(c);
  const ModelSpec model = build_model(c, &g);
  validate_model(model);
  validate_pairing(model, g);

  const std::string stat_name = gof.value("statistic", "edge_concordance");
  const auto it = statistic_registry().find(stat_name);
  if (it == statistic_registry().end())
    bad_config("unknown statistic \"" + stat_name + "\"");
  const Statistic stat = it->second;

  const std::vector<double> observed_values = io::load_vector_csv(
      resolve_in(c.base, require(gof, "observed").get<std::string>()));
  if (static_cast<int>(observed_values.size()) != g.n)
    bad_config("observed data has " + std::to_string(observed_values.size()) +
               " values, topology has " + std::to_string(g.n) + " sites");
  Field observed;
  observed.values = observed_values;

  const std::int64_t m_reps = require(gof, "replicates").get<std::int64_t>();
  if (m_reps < 1) bad_config("gof.replicates must be >= 1");

  const CoverBuild cb = build_cover(c, g);
  ChainConfig cfg = chain_config(c, opt);
  // One chain, M states retained at the configured spacing.
  cfg.iterations = cfg.burn_in + m_reps * cfg.thinning;

  std::vector<double> simulated;
  simulated.reserve(static_cast<std::size_t>(m_reps));
  CgsSampler sampler(model, g, cb.cover);
  Field state;
  sampler.run(cfg, [&](std::int64_t, std::span<const double> s) {
    state.values.assign(s.begin(), s.end());
    simulated.push_back(stat(g, state));
  });

  const double t_obs = stat(g, observed);
  const double p = mc_pvalue_upper(t_obs, simulated);
  std::printf("statistic = %s\n", stat_name.c_str());
  std::printf("T_observed = %.10g\n", t_obs);
  std::printf("M = %lld\n", static_cast<long long>(m_reps));
  if (p == 0.0)
    std::printf("p_M = 0.0000 (< 1/M resolution)\n");
  else
    std::printf("p_M = %.4f\n", p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conclique-based Gibbs sampling for Markov random fields"};
  app.require_subcommand(1);

  Options opt;
  int rc = 0;
  for (const auto& [name, fn] :
       std::initializer_list<std::pair<const char*, int (*)(const Config&,
                                                            const Options&)>>{
           {"color", cmd_color},
           {"simulate", cmd_simulate},
           {"benchmark", cmd_benchmark},
           {"gof", cmd_gof}}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opt.config_path, "run config JSON")
        ->required();
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_option("--threads", opt.threads, "worker thread count");
    sub->add_option("--output", opt.output_dir,
                    "directory for relative output paths");
    sub->callback([&rc, &opt, fn = fn]() {
      const Config c = load_config(opt.config_path);
      rc = fn(c, opt);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
