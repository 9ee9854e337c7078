#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace conclique {

enum class LatticeKind { TwoNearest, FourNearest, EightNearest };

// Symmetric neighborhood structure over sites 0..n-1, stored in compressed
// sparse rows.  Neighbor lists are sorted ascending and never contain the
// site itself.  Depending on how the graph was built it may carry extra
// per-site metadata:
//   - lattice builds record (rows, cols, kind) and planar coordinates
//     coord_u = column + 1, coord_v = row + 1;
//   - incidence builds record for every site the unordered vertex pair it
//     represents.
struct NeighborhoodGraph {
  int n = 0;
  std::vector<std::int64_t> offsets;   // n + 1
  std::vector<std::int32_t> adjacency;

  std::vector<double> coord_u;  // empty unless a lattice build
  std::vector<double> coord_v;
  int lattice_rows = 0;  // 0 when not a lattice build
  int lattice_cols = 0;
  LatticeKind lattice_kind = LatticeKind::FourNearest;

  int incidence_vertices = 0;  // 0 unless an incidence build
  std::vector<std::array<std::int32_t, 2>> vertex_pairs;

  std::span<const std::int32_t> neighbors(int site) const {
    return {adjacency.data() + offsets[site],
            adjacency.data() + offsets[site + 1]};
  }
  int degree(int site) const {
    return static_cast<int>(offsets[site + 1] - offsets[site]);
  }
  std::int64_t edge_count() const {
    return static_cast<std::int64_t>(adjacency.size()) / 2;
  }
  bool is_lattice() const { return lattice_rows > 0; }
  bool is_incidence() const { return incidence_vertices > 0; }
  bool adjacent(int a, int b) const;
  // Throws std::invalid_argument if the CSR arrays are malformed
  // (unsorted rows, asymmetry, self loops, out-of-range entries).
  void validate() const;
};

// rows x cols regular lattice, sites in row-major order.
//   TwoNearest:   left/right neighbors only
//   FourNearest:  horizontal + vertical
//   EightNearest: four-nearest plus the diagonals
NeighborhoodGraph build_lattice(int rows, int cols, LatticeKind kind);

// Line graph of the complete graph K_V: one site per unordered vertex pair
// {a, b}, 0 <= a < b < V, sites adjacent when the pairs share a vertex.
// Sites are ordered lexicographically by (a, b); incidence_edge_index gives
// that position.  Every site has degree 2(V - 2).
NeighborhoodGraph build_incidence(int vertices);
int incidence_edge_index(int vertices, int a, int b);

// Thresholded distance graph: i ~ j iff 0 < distances[i*n + j] <= threshold.
// The matrix must be symmetric with a zero diagonal.
NeighborhoodGraph build_threshold_graph(std::span<const double> distances,
                                        int n, double threshold);

// Generic constructor from an undirected edge list (no duplicates required;
// they are merged).  Self loops are rejected.
NeighborhoodGraph graph_from_edges(
    int n, std::span<const std::array<std::int32_t, 2>> edges);

// Unordered pairs of neighbors that bound a triangle with `site`, ordered
// lexicographically.  On incidence-built graphs a triangle means a triangle
// of the underlying vertex set: for site {a,b} the pairs are
// ({a,c}, {b,c}) over third vertices c, and pairs of sites that merely
// share an endpoint are excluded.  Elsewhere it is the plain reading:
// pairs of neighbors that are themselves adjacent.
std::vector<std::array<std::int32_t, 2>> triangle_pairs(
    const NeighborhoodGraph& g, int site);

}  // namespace conclique
