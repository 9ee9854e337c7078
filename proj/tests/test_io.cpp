#include "doctest.h"

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conclique/cover.hpp"
#include "conclique/graph.hpp"
#include "conclique/io.hpp"
#include "conclique/model.hpp"

using namespace conclique;
namespace fs = std::filesystem;

namespace {

const fs::path& tmp_dir() {
  static const struct Holder {
    fs::path p;
    Holder() : p(fs::temp_directory_path() / "conclique_io_tests") {
      fs::remove_all(p);
      fs::create_directories(p);
    }
    ~Holder() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } h;
  return h.p;
}

std::string at(const std::string& name) { return (tmp_dir() / name).string(); }

void put(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return s;
}

bool message_names_path(const std::invalid_argument& e, const std::string& p) {
  return std::string(e.what()).find(p) != std::string::npos;
}

}  // namespace

TEST_CASE("graph JSON keeps structure and lattice metadata") {
  const auto g = build_lattice(3, 4, LatticeKind::EightNearest);
  const std::string p = at("lattice.json");
  io::save_graph_json(p, g);
  const auto h = io::load_graph_json(p);
  CHECK(h.n == 12);
  CHECK(h.offsets == g.offsets);
  CHECK(h.adjacency == g.adjacency);
  CHECK(h.lattice_rows == 3);
  CHECK(h.lattice_cols == 4);
  CHECK(h.lattice_kind == LatticeKind::EightNearest);
  CHECK(h.coord_u == g.coord_u);
  CHECK(h.coord_v == g.coord_v);
  CHECK_NOTHROW(h.validate());
}

TEST_CASE("graph JSON keeps incidence metadata") {
  const auto g = build_incidence(5);
  const std::string p = at("incidence.json");
  io::save_graph_json(p, g);
  const auto h = io::load_graph_json(p);
  CHECK(h.n == 10);
  CHECK(h.incidence_vertices == 5);
  CHECK(h.vertex_pairs == g.vertex_pairs);
  CHECK(h.adjacency == g.adjacency);
}

TEST_CASE("graph JSON rejects malformed documents") {
  const std::string p = at("bad_graph.json");
  put(p, "{\"n\": 2}");
  try {
    io::load_graph_json(p);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(message_names_path(e, p));
  }
  put(p, "{\"n\": 2, \"adjacency\": [[1], [0, 0]]}");
  CHECK_THROWS_AS(io::load_graph_json(p), std::invalid_argument);
  put(p, "not json at all {");
  CHECK_THROWS_AS(io::load_graph_json(p), std::invalid_argument);
  CHECK_THROWS_AS(io::load_graph_json(at("absent.json")), std::runtime_error);
}

TEST_CASE("edge lists accept comments and merge duplicate rows") {
  const std::string p = at("toy.edges");
  put(p, "# toy graph\n5\n0 1\n1 2   # chain\n3 4\n1 0\n\n");
  const auto g = io::load_graph_edge_list(p);
  CHECK(g.n == 5);
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(0) == 1);
  CHECK(g.degree(1) == 2);
  CHECK(g.adjacent(3, 4));
  CHECK_FALSE(g.adjacent(2, 3));

  put(p, "5\n0 1 2\n");
  CHECK_THROWS_AS(io::load_graph_edge_list(p), std::invalid_argument);
  put(p, "5\n0 0\n");
  CHECK_THROWS_AS(io::load_graph_edge_list(p), std::invalid_argument);
  put(p, "# nothing\n");
  CHECK_THROWS_AS(io::load_graph_edge_list(p), std::invalid_argument);
}

TEST_CASE("load_graph dispatches on the file extension") {
  const auto g = build_lattice(2, 3, LatticeKind::FourNearest);
  io::save_graph_json(at("disp.json"), g);
  const auto a = io::load_graph(at("disp.json"));
  CHECK(a.is_lattice());
  CHECK(a.n == 6);
  put(at("disp.edges"), "3\n0 1\n1 2\n");
  const auto b = io::load_graph(at("disp.edges"));
  CHECK_FALSE(b.is_lattice());
  CHECK(b.n == 3);
}

TEST_CASE("cover JSON round trips and is verified against the graph") {
  const auto g = build_lattice(4, 4, LatticeKind::FourNearest);
  const auto cover = dsatur(g);
  const std::string p = at("cover.json");
  io::save_cover_json(p, cover);
  const auto back = io::load_cover_json(p, g);
  CHECK(back.num_classes == cover.num_classes);
  CHECK(back.assignment == cover.assignment);
  CHECK(back.classes == cover.classes);

  // Wrong graph size.
  const auto g5 = build_lattice(5, 5, LatticeKind::FourNearest);
  CHECK_THROWS_AS(io::load_cover_json(p, g5), std::invalid_argument);
}

TEST_CASE("cover JSON normalizes labels and rejects clashes") {
  const auto g2 = build_lattice(2, 2, LatticeKind::FourNearest);
  put(at("cover_ok.json"), "{\"assignment\": [5, 2, 2, 5]}");
  const auto cv = io::load_cover_json(at("cover_ok.json"), g2);
  CHECK(cv.num_classes == 2);
  CHECK(cv.assignment == std::vector<std::int32_t>{0, 1, 1, 0});

  put(at("cover_clash.json"), "{\"assignment\": [0, 0, 0, 0]}");
  CHECK_THROWS_AS(io::load_cover_json(at("cover_clash.json"), g2),
                  std::invalid_argument);
  put(at("cover_q.json"), "{\"num_classes\": 3, \"assignment\": [0, 1, 1, 0]}");
  CHECK_THROWS_AS(io::load_cover_json(at("cover_q.json"), g2),
                  std::invalid_argument);
}

TEST_CASE("model JSON round trips every family") {
  const std::vector<ModelSpec> specs = {
      Gaussian{0.123456789012345, 0.181, 2.75},
      AutologisticIso{0.123, 0.816},
      AutologisticAniso{0.125, 0.958, 0.66},
      AutologisticRegression{-1.6, -0.001, 0.0, 0.004},
      AutologisticUncentered{0.5, 0.88},
      TriadIncidence{0.2, 0.5, 0.5},
  };
  for (const ModelSpec& m : specs) {
    const ModelSpec back = io::parse_model_json(io::serialize_model_json(m));
    CHECK(back.index() == m.index());
    CHECK(io::serialize_model_json(back) == io::serialize_model_json(m));
  }

  LocalStructureGraphical lsg;
  lsg.beta = {0.1, -0.2, 0.3, -0.4};
  lsg.eta = 0.15;
  lsg.covariates = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  lsg.weights = {1.0, 1.0, 0.5, 0.5};
  const ModelSpec back = io::parse_model_json(io::serialize_model_json(lsg));
  const auto& b = std::get<LocalStructureGraphical>(back);
  CHECK(b.beta == lsg.beta);
  CHECK(b.eta == lsg.eta);
  CHECK(b.covariates == lsg.covariates);
  CHECK(b.weights == lsg.weights);
}

TEST_CASE("model files resolve covariate references next to themselves") {
  put(at("cov_indexed.csv"),
      "# site, x1, x2, x3\n1, 4.5, 5.5, 6.5\n0, 1.5, 2.5, 3.5\n");
  put(at("lsg.json"),
      "{\"family\": \"local_structure\", \"beta\": [0.1, 0.2, 0.3, 0.4], "
      "\"eta\": 0.15, \"covariates_csv\": \"cov_indexed.csv\"}");
  const auto m = io::load_model_json(at("lsg.json"));
  const auto& lsg = std::get<LocalStructureGraphical>(m);
  REQUIRE(lsg.covariates.size() == 2);
  CHECK(lsg.covariates[0] == std::array<double, 3>{1.5, 2.5, 3.5});
  CHECK(lsg.covariates[1] == std::array<double, 3>{4.5, 5.5, 6.5});

  // Plain three-column files are taken in site order.
  put(at("cov_plain.csv"), "1.5 2.5 3.5\n4.5 5.5 6.5\n");
  put(at("lsg2.json"),
      "{\"family\": \"local_structure\", \"beta\": [0, 0, 0, 0], "
      "\"eta\": 0.1, \"covariates_csv\": \"cov_plain.csv\"}");
  const auto m2 = io::load_model_json(at("lsg2.json"));
  CHECK(std::get<LocalStructureGraphical>(m2).covariates == lsg.covariates);

  // Edge weights cannot be expanded without a graph.
  put(at("lsg3.json"),
      "{\"family\": \"local_structure\", \"beta\": [0, 0, 0, 0], "
      "\"eta\": 0.1, \"weights_csv\": \"w.csv\"}");
  CHECK_THROWS_AS(io::load_model_json(at("lsg3.json")), std::invalid_argument);
}

TEST_CASE("covariate files validate their site indices") {
  put(at("cov_dup.csv"), "0, 1, 2, 3\n0, 4, 5, 6\n");
  CHECK_THROWS_AS(io::load_covariates_csv(at("cov_dup.csv")),
                  std::invalid_argument);
  put(at("cov_gap.csv"), "0, 1, 2, 3\n2, 4, 5, 6\n");
  CHECK_THROWS_AS(io::load_covariates_csv(at("cov_gap.csv")),
                  std::invalid_argument);
  put(at("cov_width.csv"), "1, 2\n");
  CHECK_THROWS_AS(io::load_covariates_csv(at("cov_width.csv")),
                  std::invalid_argument);
}

TEST_CASE("model JSON rejects unknown families and missing parameters") {
  CHECK_THROWS_AS(io::parse_model_json("{\"family\": \"banana\"}"),
                  std::invalid_argument);
  try {
    io::parse_model_json("{\"family\": \"gaussian\", \"alpha\": 0, \"eta\": 0}");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("tau2") != std::string::npos);
  }
  // load_model_json swaps the placeholder for the real path in messages.
  const std::string p = at("gauss_short.json");
  put(p, "{\"family\": \"gaussian\", \"alpha\": 0, \"eta\": 0}");
  try {
    io::load_model_json(p);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(message_names_path(e, p));
  }
  CHECK_THROWS_AS(io::load_model_json(at("absent_model.json")),
                  std::runtime_error);
  // Out-of-range parameters fail validation on load.
  CHECK_THROWS_AS(
      io::parse_model_json(
          "{\"family\": \"autologistic_iso\", \"kappa\": 1.5, \"eta\": 0}"),
      std::invalid_argument);
}

TEST_CASE("samples CSV writes the site header and round trips exactly") {
  io::SampleMatrix s;
  s.rows = 2;
  s.cols = 3;
  s.data = {0.1, -2.5e-17, 3.0, 1e300, 0.30000000000000004, -0.0};
  const std::string p = at("samples.csv");
  io::write_samples_csv(p, s);
  CHECK(slurp(p).rfind("site_0,site_1,site_2\n", 0) == 0);
  const auto back = io::read_samples_csv(p);
  CHECK(back.rows == 2);
  CHECK(back.cols == 3);
  CHECK(back.data == s.data);
}

TEST_CASE("samples CSV rejects malformed input") {
  const std::string p = at("bad_samples.csv");
  put(p, "a,b\n1,2\n");
  try {
    io::read_samples_csv(p);
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(message_names_path(e, p));
  }
  put(p, "site_0,site_1\n1,x\n");
  CHECK_THROWS_AS(io::read_samples_csv(p), std::invalid_argument);
  put(p, "site_0,site_1\n1\n");
  CHECK_THROWS_AS(io::read_samples_csv(p), std::invalid_argument);
  put(p, "");
  CHECK_THROWS_AS(io::read_samples_csv(p), std::invalid_argument);
}

TEST_CASE("CGS1 binary files round trip bitwise") {
  io::SampleMatrix s;
  s.rows = 3;
  s.cols = 2;
  s.data = {3.141592653589793, -0.0, 5e-324, 1.0, -1e308, 0.1};
  const std::string p = at("samples.cgs1");
  io::write_samples_cgs1(p, s);
  const auto back = io::read_samples_cgs1(p);
  CHECK(back.rows == s.rows);
  CHECK(back.cols == s.cols);
  REQUIRE(back.data.size() == s.data.size());
  CHECK(std::memcmp(back.data.data(), s.data.data(),
                    s.data.size() * sizeof(double)) == 0);

  // Truncated payload.
  fs::resize_file(p, fs::file_size(p) - 8);
  CHECK_THROWS_AS(io::read_samples_cgs1(p), std::invalid_argument);
  // Wrong magic.
  put(at("bad.cgs1"), "XGS1somethingelse entirely, long enough for a header");
  CHECK_THROWS_AS(io::read_samples_cgs1(at("bad.cgs1")), std::invalid_argument);
}

TEST_CASE("timing JSON carries the whole run summary") {
  io::TimingRecord t;
  t.sampler = "conclique";
  t.family = "gaussian";
  t.n = 2500;
  t.q = 2;
  t.iterations = 1000;
  t.burn_in = 100;
  t.thinning = 3;
  t.retained = 300;
  t.threads = 4;
  t.seed = 1234567890123456789ull;
  t.seconds_total = 1.5;
  t.seconds_per_iteration = 0.0015;
  t.draws_per_second = 1.6666e6;
  t.overhead_seconds = 0.25;
  const std::string p = at("timing.json");
  io::write_timing_json(p, t);
  const auto j = nlohmann::json::parse(slurp(p));
  CHECK(j.at("sampler") == "conclique");
  CHECK(j.at("family") == "gaussian");
  CHECK(j.at("n") == 2500);
  CHECK(j.at("Q") == 2);
  CHECK(j.at("M") == 1000);
  CHECK(j.at("iterations") == 1000);
  CHECK(j.at("burn_in") == 100);
  CHECK(j.at("thinning") == 3);
  CHECK(j.at("retained") == 300);
  CHECK(j.at("threads") == 4);
  CHECK(j.at("seed").get<std::uint64_t>() == t.seed);
  CHECK(j.at("seconds_total").get<double>() == 1.5);
  CHECK(j.at("seconds_per_iteration").get<double>() == 0.0015);
  CHECK(j.at("draws_per_second").get<double>() == 1.6666e6);
  CHECK(j.at("overhead_seconds").get<double>() == 0.25);
}

TEST_CASE("numeric vector and matrix loaders") {
  put(at("vec.csv"), "1, 2\n3\n# comment\n4\t5\n");
  CHECK(io::load_vector_csv(at("vec.csv")) ==
        std::vector<double>{1, 2, 3, 4, 5});
  put(at("empty.csv"), "# nothing\n");
  CHECK_THROWS_AS(io::load_vector_csv(at("empty.csv")), std::invalid_argument);

  put(at("mat.csv"), "1 2\n3 4\n5 6\n");
  const auto m = io::load_matrix_csv(at("mat.csv"));
  CHECK(m.rows == 3);
  CHECK(m.cols == 2);
  CHECK(m.data == std::vector<double>{1, 2, 3, 4, 5, 6});
  put(at("ragged.csv"), "1 2\n3\n");
  CHECK_THROWS_AS(io::load_matrix_csv(at("ragged.csv")), std::invalid_argument);
  put(at("notnum.csv"), "1 two\n");
  CHECK_THROWS_AS(io::load_matrix_csv(at("notnum.csv")), std::invalid_argument);
}

TEST_CASE("edge weight files expand into adjacency order") {
  const auto g = build_lattice(1, 3, LatticeKind::TwoNearest);
  put(at("w.csv"), "0, 1, 2.5\n2, 1, -1.25\n");  // either orientation works
  const auto w = io::load_edge_weights_csv(at("w.csv"), g);
  REQUIRE(w.size() == g.adjacency.size());
  CHECK(w == std::vector<double>{2.5, 2.5, -1.25, -1.25});

  put(at("w_missing.csv"), "0, 1, 2.5\n");
  CHECK_THROWS_AS(io::load_edge_weights_csv(at("w_missing.csv"), g),
                  std::invalid_argument);
  put(at("w_dup.csv"), "0, 1, 2.5\n1, 0, 2.5\n1, 2, 1\n");
  CHECK_THROWS_AS(io::load_edge_weights_csv(at("w_dup.csv"), g),
                  std::invalid_argument);
  put(at("w_nonedge.csv"), "0, 2, 1.0\n0, 1, 1\n1, 2, 1\n");
  CHECK_THROWS_AS(io::load_edge_weights_csv(at("w_nonedge.csv"), g),
                  std::invalid_argument);
}
