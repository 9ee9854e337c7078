#include "conclique/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

namespace conclique::io {

namespace {

using nlohmann::json;

[[noreturn]] void bad_input(const std::string& path, const std::string& what) {
  throw std::invalid_argument(path + ": " + what);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

json parse_json(const std::string& path, const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad_input(path, "not valid JSON");
  return j;
}

double require_number(const json& j, const std::string& path,
                      const std::string& key) {
  if (!j.contains(key)) bad_input(path, "missing \"" + key + "\"");
  if (!j[key].is_number()) bad_input(path, "\"" + key + "\" must be a number");
  return j[key].get<double>();
}

// Tokenizes a numeric text file: commas count as separators, '#' starts a
// comment.  Returns one vector per nonempty line.
std::vector<std::vector<double>> numeric_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        bad_input(path, "line " + std::to_string(lineno) +
                            ": not a number: \"" + tok + "\"");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return rows;
}

const char* lattice_kind_name(LatticeKind k) {
  switch (k) {
    case LatticeKind::TwoNearest: return "two_nearest";
    case LatticeKind::FourNearest: return "four_nearest";
    case LatticeKind::EightNearest: return "eight_nearest";
  }
  return "four_nearest";
}

LatticeKind lattice_kind_from_name(const std::string& path,
                                   const std::string& name) {
  if (name == "two_nearest") return LatticeKind::TwoNearest;
  if (name == "four_nearest") return LatticeKind::FourNearest;
  if (name == "eight_nearest") return LatticeKind::EightNearest;
  bad_input(path, "unknown lattice kind \"" + name + "\"");
}

NeighborhoodGraph graph_from_lists(
    const std::string& path, int n,
    const std::vector<std::vector<std::int32_t>>& lists) {
  NeighborhoodGraph g;
  g.n = n;
  g.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    g.offsets[static_cast<std::size_t>(i) + 1] =
        g.offsets[static_cast<std::size_t>(i)] +
        static_cast<std::int64_t>(lists[static_cast<std::size_t>(i)].size());
  g.adjacency.reserve(static_cast<std::size_t>(g.offsets.back()));
  for (const auto& row : lists)
    g.adjacency.insert(g.adjacency.end(), row.begin(), row.end());
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    bad_input(path, e.what());
  }
  return g;
}

void append_model_params(const ModelSpec& m, json& j) {
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          j["alpha"] = fam.alpha;
          j["eta"] = fam.eta;
          j["tau2"] = fam.tau2;
        } else if constexpr (std::is_same_v<T, AutologisticIso> ||
                             std::is_same_v<T, AutologisticUncentered>) {
          j["kappa"] = fam.kappa;
          j["eta"] = fam.eta;
        } else if constexpr (std::is_same_v<T, AutologisticAniso>) {
          j["kappa"] = fam.kappa;
          j["eta_u"] = fam.eta_u;
          j["eta_v"] = fam.eta_v;
        } else if constexpr (std::is_same_v<T, AutologisticRegression>) {
          j["beta0"] = fam.beta0;
          j["beta1"] = fam.beta1;
          j["eta_u"] = fam.eta_u;
          j["eta_v"] = fam.eta_v;
        } else if constexpr (std::is_same_v<T, TriadIncidence>) {
          j["kappa"] = fam.kappa;
          j["eta1"] = fam.eta1;
          j["eta2"] = fam.eta2;
        } else if constexpr (std::is_same_v<T, LocalStructureGraphical>) {
          j["beta"] = fam.beta;
          j["eta"] = fam.eta;
          if (!fam.covariates.empty()) {
            json rows = json::array();
            for (const auto& r : fam.covariates) rows.push_back(r);
            j["covariates"] = std::move(rows);
          }
          if (!fam.weights.empty()) j["weights"] = fam.weights;
        }
      },
      m);
}

}  // namespace

void save_graph_json(const std::string& path, const NeighborhoodGraph& g) {
  json j;
  j["n"] = g.n;
  json adj = json::array();
  for (int i = 0; i < g.n; ++i) {
    const auto nbrs = g.neighbors(i);
    adj.push_back(std::vector<std::int32_t>(nbrs.begin(), nbrs.end()));
  }
  j["adjacency"] = std::move(adj);
  if (!g.coord_u.empty()) {
    json coords = json::array();
    for (int i = 0; i < g.n; ++i)
      coords.push_back({g.coord_u[static_cast<std::size_t>(i)],
                        g.coord_v[static_cast<std::size_t>(i)]});
    j["coords"] = std::move(coords);
  }
  if (g.is_lattice())
    j["lattice"] = {{"rows", g.lattice_rows},
                    {"cols", g.lattice_cols},
                    {"kind", lattice_kind_name(g.lattice_kind)}};
  if (g.is_incidence()) {
    j["incidence_vertices"] = g.incidence_vertices;
    json pairs = json::array();
    for (const auto& p : g.vertex_pairs) pairs.push_back({p[0], p[1]});
    j["vertex_pairs"] = std::move(pairs);
  }
  write_text(path, j.dump(2) + "\n");
}

NeighborhoodGraph load_graph_json(const std::string& path) {
  const json j = parse_json(path, read_text(path));
  if (!j.contains("n") || !j["n"].is_number_integer())
    bad_input(path, "missing integer \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) bad_input(path, "\"n\" must be positive");
  if (!j.contains("adjacency") || !j["adjacency"].is_array() ||
      j["adjacency"].size() != static_cast<std::size_t>(n))
    bad_input(path, "\"adjacency\" must list neighbors for every site");
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const json& row = j["adjacency"][static_cast<std::size_t>(i)];
    if (!row.is_array()) bad_input(path, "adjacency rows must be arrays");
    for (const json& v : row) {
      if (!v.is_number_integer())
        bad_input(path, "adjacency entries must be integers");
      lists[static_cast<std::size_t>(i)].push_back(v.get<std::int32_t>());
    }
  }
  NeighborhoodGraph g = graph_from_lists(path, n, lists);

  if (j.contains("lattice")) {
    const json& lat = j["lattice"];
    g.lattice_rows = static_cast<int>(require_number(lat, path, "rows"));
    g.lattice_cols = static_cast<int>(require_number(lat, path, "cols"));
    if (static_cast<std::int64_t>(g.lattice_rows) * g.lattice_cols != n)
      bad_input(path, "lattice rows * cols != n");
    if (!lat.contains("kind") || !lat["kind"].is_string())
      bad_input(path, "lattice needs a \"kind\" string");
    g.lattice_kind = lattice_kind_from_name(path, lat["kind"].get<std::string>());
  }
  if (j.contains("coords")) {
    const json& coords = j["coords"];
    if (!coords.is_array() || coords.size() != static_cast<std::size_t>(n))
      bad_input(path, "\"coords\" must hold one [u, v] pair per site");
    g.coord_u.resize(static_cast<std::size_t>(n));
    g.coord_v.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const json& p = coords[static_cast<std::size_t>(i)];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
          !p[1].is_number())
        bad_input(path, "\"coords\" must hold one [u, v] pair per site");
      g.coord_u[static_cast<std::size_t>(i)] = p[0].get<double>();
      g.coord_v[static_cast<std::size_t>(i)] = p[1].get<double>();
    }
  } else if (g.is_lattice()) {
    g.coord_u.resize(static_cast<std::size_t>(n));
    g.coord_v.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      g.coord_u[static_cast<std::size_t>(i)] = i % g.lattice_cols + 1;
      g.coord_v[static_cast<std::size_t>(i)] = i / g.lattice_cols + 1;
    }
  }
  if (j.contains("incidence_vertices")) {
    g.incidence_vertices =
        static_cast<int>(require_number(j, path, "incidence_vertices"));
    const int v = g.incidence_vertices;
    if (v < 2 || static_cast<std::int64_t>(v) * (v - 1) / 2 != n)
      bad_input(path, "incidence_vertices does not match n = V(V-1)/2");
    g.vertex_pairs.assign(static_cast<std::size_t>(n), {0, 0});
    if (j.contains("vertex_pairs")) {
      const json& pairs = j["vertex_pairs"];
      if (!pairs.is_array() || pairs.size() != static_cast<std::size_t>(n))
        bad_input(path, "\"vertex_pairs\" must hold one [a, b] per site");
      for (int i = 0; i < n; ++i) {
        const json& p = pairs[static_cast<std::size_t>(i)];
        if (!p.is_array() || p.size() != 2) bad_input(path, "bad vertex pair");
        const int a = p[0].get<int>(), b = p[1].get<int>();
        if (a < 0 || b <= a || b >= v ||
            incidence_edge_index(v, a, b) != i)
          bad_input(path, "vertex_pairs must list {a < b} in site order");
        g.vertex_pairs[static_cast<std::size_t>(i)] = {
            static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)};
      }
    } else {
      for (int a = 0, i = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b, ++i)
          g.vertex_pairs[static_cast<std::size_t>(i)] = {a, b};
    }
  }
  return g;
}

NeighborhoodGraph load_graph_edge_list(const std::string& path) {
  const auto rows = numeric_lines(path);
  if (rows.empty()) bad_input(path, "empty edge list");
  if (rows[0].size() != 1 || rows[0][0] != std::floor(rows[0][0]) ||
      rows[0][0] < 1)
    bad_input(path, "first line must be the site count");
  const int n = static_cast<int>(rows[0][0]);
  std::vector<std::array<std::int32_t, 2>> edges;
  edges.reserve(rows.size() - 1);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != 2)
      bad_input(path, "edge lines must hold exactly two site indices");
    const double a = rows[k][0], b = rows[k][1];
    if (a != std::floor(a) || b != std::floor(b))
      bad_input(path, "site indices must be integers");
    edges.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)});
  }
  try {
    return graph_from_edges(n, edges);
  } catch (const std::invalid_argument& e) {
    bad_input(path, e.what());
  }
}

NeighborhoodGraph load_graph(const std::string& path) {
  const auto ext = std::filesystem::path(path).extension().string();
  return ext == ".json" ? load_graph_json(path) : load_graph_edge_list(path);
}

void save_cover_json(const std::string& path, const ConcliqueCover& cover) {
  json j;
  j["num_classes"] = cover.num_classes;
  j["assignment"] = cover.assignment;
  write_text(path, j.dump(2) + "\n");
}

ConcliqueCover load_cover_json(const std::string& path,
                               const NeighborhoodGraph& g) {
  const json j = parse_json(path, read_text(path));
  if (!j.contains("assignment") || !j["assignment"].is_array())
    bad_input(path, "missing \"assignment\" array");
  std::vector<std::int32_t> labels;
  labels.reserve(j["assignment"].size());
  for (const json& v : j["assignment"]) {
    if (!v.is_number_integer())
      bad_input(path, "assignment entries must be integers");
    labels.push_back(v.get<std::int32_t>());
  }
  if (labels.size() != static_cast<std::size_t>(g.n))
    bad_input(path, "assignment length " + std::to_string(labels.size()) +
                        " does not match graph size " + std::to_string(g.n));
  ConcliqueCover cover;
  try {
    cover = cover_from_assignment(g.n, std::move(labels));
  } catch (const std::invalid_argument& e) {
    bad_input(path, e.what());
  }
  if (j.contains("num_classes") &&
      j["num_classes"].get<int>() != cover.num_classes)
    bad_input(path, "num_classes does not match the assignment");
  if (const CoverCheck check = verify_cover(g, cover); !check.ok)
    bad_input(path, "not a conclique cover: " + check.reason);
  return cover;
}

ModelSpec parse_model_json(const std::string& json_text,
                           const std::string& base_dir) {
  const std::string where = "<model json>";
  const json j = parse_json(where, json_text);
  if (!j.contains("family") || !j["family"].is_string())
    bad_input(where, "missing \"family\" string");
  const std::string fam = j["family"].get<std::string>();
  auto resolve = [&](const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(base_dir) / p).string();
  };

  ModelSpec m;
  if (fam == "gaussian") {
    m = Gaussian{require_number(j, where, "alpha"),
                 require_number(j, where, "eta"),
                 require_number(j, where, "tau2")};
  } else if (fam == "autologistic_iso") {
    m = AutologisticIso{require_number(j, where, "kappa"),
                        require_number(j, where, "eta")};
  } else if (fam == "autologistic_aniso") {
    m = AutologisticAniso{require_number(j, where, "kappa"),
                          require_number(j, where, "eta_u"),
                          require_number(j, where, "eta_v")};
  } else if (fam == "autologistic_regression") {
    m = AutologisticRegression{require_number(j, where, "beta0"),
                               require_number(j, where, "beta1"),
                               require_number(j, where, "eta_u"),
                               require_number(j, where, "eta_v")};
  } else if (fam == "autologistic_uncentered") {
    m = AutologisticUncentered{require_number(j, where, "kappa"),
                               require_number(j, where, "eta")};
  } else if (fam == "triad_incidence") {
    m = TriadIncidence{require_number(j, where, "kappa"),
                       require_number(j, where, "eta1"),
                       require_number(j, where, "eta2")};
  } else if (fam == "local_structure") {
    LocalStructureGraphical lsg;
    if (!j.contains("beta") || !j["beta"].is_array() || j["beta"].size() != 4)
      bad_input(where, "\"beta\" must hold four coefficients");
    for (std::size_t k = 0; k < 4; ++k) {
      if (!j["beta"][k].is_number())
        bad_input(where, "\"beta\" must hold four numbers");
      lsg.beta[k] = j["beta"][k].get<double>();
    }
    lsg.eta = require_number(j, where, "eta");
    if (j.contains("covariates")) {
      for (const json& row : j["covariates"]) {
        if (!row.is_array() || row.size() != 3)
          bad_input(where, "\"covariates\" rows must hold three values");
        lsg.covariates.push_back(
            {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
      }
    } else if (j.contains("covariates_csv")) {
      lsg.covariates =
          load_covariates_csv(resolve(j["covariates_csv"].get<std::string>()));
    }
    if (j.contains("weights")) {
      lsg.weights = j["weights"].get<std::vector<double>>();
    } else if (j.contains("weights_csv")) {
      // Edge weight files need the graph to expand into adjacency order, so
      // they are resolved by the caller; here we only record the reference.
      bad_input(where,
                "\"weights_csv\" must be expanded against the graph first "
                "(use load_edge_weights_csv), or inline \"weights\"");
    }
    m = std::move(lsg);
  } else {
    bad_input(where, "unknown family \"" + fam + "\"");
  }
  validate_model(m);
  return m;
}

ModelSpec load_model_json(const std::string& path) {
  const std::string dir = std::filesystem::path(path).parent_path().string();
  try {
    return parse_model_json(read_text(path), dir.empty() ? "." : dir);
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    const std::string tag = "<model json>";
    if (const auto at = msg.find(tag); at != std::string::npos)
      msg.replace(at, tag.size(), path);
    throw std::invalid_argument(msg);
  }
}

std::string serialize_model_json(const ModelSpec& m) {
  json j;
  j["family"] = family_name(m);
  append_model_params(m, j);
  return j.dump(2) + "\n";
}

void write_samples_csv(const std::string& path, const SampleMatrix& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (int c = 0; c < s.cols; ++c) out << (c ? "," : "") << "site_" << c;
  out << "\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::int64_t r = 0; r < s.rows; ++r) {
    const double* row = s.data.data() + r * s.cols;
    for (int c = 0; c < s.cols; ++c) out << (c ? "," : "") << row[c];
    out << "\n";
  }
  if (!out) throw std::runtime_error("cannot write " + path);
}

SampleMatrix read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string header;
  if (!std::getline(in, header)) bad_input(path, "missing header line");
  int cols = header.empty() ? 0 : 1;
  for (const char c : header) cols += c == ',';
  if (cols < 1 || header.rfind("site_0", 0) != 0)
    bad_input(path, "header must name columns site_0,...");
  SampleMatrix s;
  s.cols = cols;
  std::string line;
  std::int64_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const char* p = line.c_str();
    for (int c = 0; c < cols; ++c) {
      char* end = nullptr;
      s.data.push_back(std::strtod(p, &end));
      if (end == p)
        bad_input(path, "line " + std::to_string(lineno) + ": bad number");
      p = *end == ',' ? end + 1 : end;
    }
    ++s.rows;
  }
  if (in.bad()) throw std::runtime_error("cannot read " + path);
  return s;
}

void write_samples_cgs1(const std::string& path, const SampleMatrix& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write("CGS1", 4);
  const auto n = static_cast<std::uint32_t>(s.cols);
  const auto rows = static_cast<std::uint64_t>(s.rows);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(s.data.data()),
            static_cast<std::streamsize>(s.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("cannot write " + path);
}

SampleMatrix read_samples_cgs1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t n = 0;
  std::uint64_t rows = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  if (!in || std::string_view(magic, 4) != "CGS1")
    bad_input(path, "not a CGS1 sample file");
  if (n == 0 || n > (1u << 28) || rows > (std::uint64_t{1} << 40))
    bad_input(path, "implausible CGS1 header");
  SampleMatrix s;
  s.cols = static_cast<int>(n);
  s.rows = static_cast<std::int64_t>(rows);
  s.data.resize(static_cast<std::size_t>(rows) * n);
  in.read(reinterpret_cast<char*>(s.data.data()),
          static_cast<std::streamsize>(s.data.size() * sizeof(double)));
  if (in.gcount() !=
      static_cast<std::streamsize>(s.data.size() * sizeof(double)))
    bad_input(path, "truncated CGS1 payload");
  return s;
}

void write_timing_json(const std::string& path, const TimingRecord& t) {
  json j;
  j["sampler"] = t.sampler;
  j["family"] = t.family;
  j["n"] = t.n;
  j["Q"] = t.q;
  j["M"] = t.iterations;
  j["iterations"] = t.iterations;
  j["burn_in"] = t.burn_in;
  j["thinning"] = t.thinning;
  j["retained"] = t.retained;
  j["threads"] = t.threads;
  j["seed"] = t.seed;
  j["seconds_total"] = t.seconds_total;
  j["seconds_per_iteration"] = t.seconds_per_iteration;
  j["draws_per_second"] = t.draws_per_second;
  j["overhead_seconds"] = t.overhead_seconds;
  write_text(path, j.dump(2) + "\n");
}

std::vector<double> load_vector_csv(const std::string& path) {
  std::vector<double> out;
  for (const auto& row : numeric_lines(path))
    out.insert(out.end(), row.begin(), row.end());
  if (out.empty()) bad_input(path, "no numeric data");
  return out;
}

SampleMatrix load_matrix_csv(const std::string& path) {
  const auto rows = numeric_lines(path);
  if (rows.empty()) bad_input(path, "no numeric data");
  SampleMatrix s;
  s.cols = static_cast<int>(rows[0].size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != s.cols)
      bad_input(path, "ragged rows");
    s.data.insert(s.data.end(), row.begin(), row.end());
    ++s.rows;
  }
  return s;
}

std::vector<std::array<double, 3>> load_covariates_csv(const std::string& path) {
  const auto rows = numeric_lines(path);
  if (rows.empty()) bad_input(path, "no covariate rows");
  const std::size_t width = rows[0].size();
  if (width != 3 && width != 4)
    bad_input(path,
              "covariate rows must be \"x1, x2, x3\" or \"site, x1, x2, x3\"");
  std::vector<std::array<double, 3>> out(rows.size());
  std::vector<bool> seen(rows.size(), false);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    if (row.size() != width) bad_input(path, "ragged covariate rows");
    if (width == 3) {
      out[k] = {row[0], row[1], row[2]};
      continue;
    }
    const double sd = row[0];
    const auto s = static_cast<std::int64_t>(sd);
    if (sd != std::floor(sd) || s < 0 ||
        s >= static_cast<std::int64_t>(rows.size()))
      bad_input(path, "bad site index " + std::to_string(sd));
    if (seen[static_cast<std::size_t>(s)])
      bad_input(path, "duplicate site index " + std::to_string(s));
    seen[static_cast<std::size_t>(s)] = true;
    out[static_cast<std::size_t>(s)] = {row[1], row[2], row[3]};
  }
  return out;
}

std::vector<double> load_edge_weights_csv(const std::string& path,
                                          const NeighborhoodGraph& g) {
  const auto rows = numeric_lines(path);
  const double unset = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> w(g.adjacency.size(), unset);
  auto slot = [&](int i, int j) -> double* {
    const auto nbrs = g.neighbors(i);
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
    if (it == nbrs.end() || *it != j) return nullptr;
    return w.data() + g.offsets[i] + (it - nbrs.begin());
  };
  for (const auto& row : rows) {
    if (row.size() != 3) bad_input(path, "weight rows must be \"i, j, w\"");
    const int i = static_cast<int>(row[0]), j = static_cast<int>(row[1]);
    if (row[0] != i || row[1] != j || i < 0 || j < 0 || i >= g.n || j >= g.n ||
        i == j)
      bad_input(path, "bad edge " + std::to_string(row[0]) + ", " +
                          std::to_string(row[1]));
    double* a = slot(i, j);
    double* b = slot(j, i);
    if (a == nullptr || b == nullptr)
      bad_input(path, "no such edge: " + std::to_string(i) + ", " +
                          std::to_string(j));
    if (!std::isnan(*a))
      bad_input(path, "duplicate edge: " + std::to_string(i) + ", " +
                          std::to_string(j));
    *a = *b = row[2];
  }
  for (std::size_t k = 0; k < w.size(); ++k)
    if (std::isnan(w[k]))
      bad_input(path, "missing weight for some graph edge");
  return w;
}

}  // namespace conclique::io
