#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/field.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"
#include "conclique/sampler.hpp"

// On-disk formats.  Everything throws std::invalid_argument with a
// path-qualified message on malformed input and std::runtime_error on I/O
// failure.
//
//   graph JSON      {"n", "adjacency": [[neighbors]...], optional "coords"
//                    [[u,v]...], "lattice" {rows, cols, kind},
//                    "incidence_vertices", "vertex_pairs" [[a,b]...]}
//   edge list text  first line "n", then one "i j" pair per line,
//                   '#' comments allowed
//   cover JSON      {"num_classes", "assignment": [class per site]}
//   model JSON      {"family": <name>, <parameters>...}; the local-structure
//                   family may reference a "covariates_csv" file resolved
//                   against the JSON file's directory.  Edge weights are
//                   either inline ("weights", adjacency order) or a
//                   "weights_csv" reference that a graph-holding caller
//                   expands through load_edge_weights_csv (the CLI does)
//   samples CSV     header "site_0,...,site_{n-1}", one retained state per row
//   samples CGS1    magic "CGS1" | u32 n | u64 rows | rows*n float64,
//                   all little-endian
//   timing JSON     run metadata + wall-clock summary, written next to
//                   sample outputs

namespace conclique::io {

struct SampleMatrix {
  std::vector<double> data;  // rows x cols, row-major
  std::int64_t rows = 0;
  int cols = 0;
};

void save_graph_json(const std::string& path, const NeighborhoodGraph& g);
NeighborhoodGraph load_graph_json(const std::string& path);
NeighborhoodGraph load_graph_edge_list(const std::string& path);
// Dispatches on extension: .json -> JSON, anything else -> edge list.
NeighborhoodGraph load_graph(const std::string& path);

void save_cover_json(const std::string& path, const ConcliqueCover& cover);
ConcliqueCover load_cover_json(const std::string& path, const NeighborhoodGraph& g);

// JSON text <-> model.  base_dir resolves covariate/weight file references.
ModelSpec parse_model_json(const std::string& json_text,
                           const std::string& base_dir = ".");
ModelSpec load_model_json(const std::string& path);
std::string serialize_model_json(const ModelSpec& m);

void write_samples_csv(const std::string& path, const SampleMatrix& s);
SampleMatrix read_samples_csv(const std::string& path);
void write_samples_cgs1(const std::string& path, const SampleMatrix& s);
SampleMatrix read_samples_cgs1(const std::string& path);

struct TimingRecord {
  std::string sampler;  // "conclique" | "single-site"
  std::string family;
  int n = 0;
  int q = 0;  // conclique classes; 0 for the single-site sampler
  std::int64_t iterations = 0;
  std::int64_t burn_in = 0;
  std::int64_t thinning = 1;
  std::int64_t retained = 0;
  int threads = 1;
  std::uint64_t seed = 0;
  double seconds_total = 0.0;
  double seconds_per_iteration = 0.0;
  double draws_per_second = 0.0;
  // One-time setup cost (graph build, coloring, plan compilation), kept
  // apart from the sampling clock.
  double overhead_seconds = 0.0;
};
void write_timing_json(const std::string& path, const TimingRecord& t);

// Whitespace/comma separated numeric files.
std::vector<double> load_vector_csv(const std::string& path);
SampleMatrix load_matrix_csv(const std::string& path);
// One row of three covariate values per site, optionally led by a 0-based
// site index (then rows may come in any order but must cover every site).
std::vector<std::array<double, 3>> load_covariates_csv(const std::string& path);
// Rows "i,j,w" (one per undirected edge, either orientation); returns the
// weight vector aligned with g's adjacency storage.  Every graph edge must
// receive a weight, and no row may name a non-edge.
std::vector<double> load_edge_weights_csv(const std::string& path,
                                          const NeighborhoodGraph& g);

}  // namespace conclique::io
