#include "doctest.h"

#include <array>
#include <stdexcept>
#include <vector>

#include "conclique/graph.hpp"

using namespace conclique;

TEST_CASE("four-nearest lattice structure") {
  const auto g = build_lattice(3, 4, LatticeKind::FourNearest);
  CHECK(g.n == 12);
  // rows*(cols-1) horizontal + cols*(rows-1) vertical bonds.
  CHECK(g.edge_count() == 3 * 3 + 4 * 2);
  CHECK(g.degree(0) == 2);       // corner
  CHECK(g.degree(1) == 3);       // edge
  CHECK(g.degree(5) == 4);       // interior
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(0, 4));
  CHECK_FALSE(g.adjacent(0, 5));  // diagonal is not a neighbor
  CHECK(g.is_lattice());
  CHECK_FALSE(g.is_incidence());
  // Planar coordinates are 1-based (column, row).
  CHECK(g.coord_u[6] == 3.0);
  CHECK(g.coord_v[6] == 2.0);
  g.validate();
}

TEST_CASE("two-nearest keeps rows disconnected from each other") {
  const auto g = build_lattice(3, 5, LatticeKind::TwoNearest);
  CHECK(g.edge_count() == 3 * 4);
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(0, 5));
}

TEST_CASE("eight-nearest adds the diagonals") {
  const auto g = build_lattice(4, 4, LatticeKind::EightNearest);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(5) == 8);
  CHECK(g.adjacent(0, 5));
  CHECK(g.edge_count() == 4 * 3 + 4 * 3 + 2 * 3 * 3);
}

TEST_CASE("degenerate lattice sizes are rejected") {
  CHECK_THROWS_AS(build_lattice(0, 5, LatticeKind::FourNearest),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_lattice(3, -1, LatticeKind::FourNearest),
                  std::invalid_argument);
}

TEST_CASE("incidence graph of K_V") {
  const int V = 6;
  const auto g = build_incidence(V);
  CHECK(g.n == V * (V - 1) / 2);
  CHECK(g.is_incidence());
  CHECK(g.incidence_vertices == V);
  for (int i = 0; i < g.n; ++i) CHECK(g.degree(i) == 2 * (V - 2));
  // Pair list is lexicographic and indexable.
  int idx = 0;
  for (int a = 0; a < V; ++a)
    for (int b = a + 1; b < V; ++b) {
      CHECK(g.vertex_pairs[idx][0] == a);
      CHECK(g.vertex_pairs[idx][1] == b);
      CHECK(incidence_edge_index(V, a, b) == idx);
      ++idx;
    }
  // {0,1} and {1,2} share vertex 1; {0,1} and {2,3} are disjoint.
  CHECK(g.adjacent(incidence_edge_index(V, 0, 1), incidence_edge_index(V, 1, 2)));
  CHECK_FALSE(
      g.adjacent(incidence_edge_index(V, 0, 1), incidence_edge_index(V, 2, 3)));
  g.validate();
}

TEST_CASE("triangle pairs on an incidence graph close real triangles") {
  const int V = 5;
  const auto g = build_incidence(V);
  const int site = incidence_edge_index(V, 1, 3);
  const auto pairs = triangle_pairs(g, site);
  CHECK(pairs.size() == static_cast<std::size_t>(V - 2));
  for (const auto& pr : pairs) {
    // Each pair is ({1,c},{3,c}) for a third vertex c.
    const auto& pa = g.vertex_pairs[pr[0]];
    const auto& pb = g.vertex_pairs[pr[1]];
    const bool a_has_1 = pa[0] == 1 || pa[1] == 1;
    const bool b_has_3 = pb[0] == 3 || pb[1] == 3;
    CHECK(a_has_1);
    CHECK(b_has_3);
    const int ca = pa[0] == 1 ? pa[1] : pa[0];
    const int cb = pb[0] == 3 ? pb[1] : pb[0];
    CHECK(ca == cb);
  }
}

TEST_CASE("triangle pairs on a plain graph are adjacent neighbor pairs") {
  // Triangle 0-1-2 plus a pendant 3.
  const std::array<std::int32_t, 2> edges[] = {{0, 1}, {1, 2}, {0, 2}, {2, 3}};
  const auto g = graph_from_edges(4, edges);
  const auto t0 = triangle_pairs(g, 0);
  REQUIRE(t0.size() == 1);
  CHECK(t0[0][0] == 1);
  CHECK(t0[0][1] == 2);
  CHECK(triangle_pairs(g, 3).empty());
}

TEST_CASE("threshold graph links within radius only") {
  // Three points on a line at 0, 2, 5.
  const double d[] = {0, 2, 5, 2, 0, 3, 5, 3, 0};
  const auto g = build_threshold_graph(d, 3, 3.0);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 2));
  CHECK_FALSE(g.adjacent(0, 2));
}

TEST_CASE("edge list constructor merges duplicates and rejects loops") {
  const std::array<std::int32_t, 2> edges[] = {{0, 1}, {1, 0}, {1, 2}};
  const auto g = graph_from_edges(3, edges);
  CHECK(g.edge_count() == 2);
  const std::array<std::int32_t, 2> loop[] = {{1, 1}};
  CHECK_THROWS_AS(graph_from_edges(3, loop), std::invalid_argument);
}

TEST_CASE("validate rejects malformed storage") {
  NeighborhoodGraph g;
  g.n = 2;
  g.offsets = {0, 1, 1};  // edge 0->1 without the mirror entry
  g.adjacency = {1};
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
