#include "conclique/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace conclique {

namespace {

NeighborhoodGraph from_neighbor_lists(int n,
                                      std::vector<std::vector<std::int32_t>> lists) {
  NeighborhoodGraph g;
  g.n = n;
  g.offsets.resize(static_cast<std::size_t>(n) + 1, 0);
  std::size_t total = 0;
  for (int i = 0; i < n; ++i) {
    auto& l = lists[static_cast<std::size_t>(i)];
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    total += l.size();
  }
  g.adjacency.reserve(total);
  for (int i = 0; i < n; ++i) {
    const auto& l = lists[static_cast<std::size_t>(i)];
    g.adjacency.insert(g.adjacency.end(), l.begin(), l.end());
    g.offsets[static_cast<std::size_t>(i) + 1] =
        static_cast<std::int64_t>(g.adjacency.size());
  }
  return g;
}

}  // namespace

bool NeighborhoodGraph::adjacent(int a, int b) const {
  const auto row = neighbors(a);
  return std::binary_search(row.begin(), row.end(), b);
}

void NeighborhoodGraph::validate() const {
  if (n < 0) throw std::invalid_argument("graph: negative site count");
  if (offsets.size() != static_cast<std::size_t>(n) + 1 || offsets[0] != 0 ||
      offsets[static_cast<std::size_t>(n)] !=
          static_cast<std::int64_t>(adjacency.size()))
    throw std::invalid_argument("graph: malformed offset array");
  for (int i = 0; i < n; ++i) {
    if (offsets[i] > offsets[i + 1])
      throw std::invalid_argument("graph: offsets not monotone");
    const auto row = neighbors(i);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const std::int32_t j = row[k];
      if (j < 0 || j >= n)
        throw std::invalid_argument("graph: neighbor index out of range");
      if (j == i) throw std::invalid_argument("graph: self loop at site " +
                                              std::to_string(i));
      if (k > 0 && row[k - 1] >= j)
        throw std::invalid_argument("graph: neighbor list not strictly sorted");
      if (!adjacent(j, i))
        throw std::invalid_argument("graph: asymmetric edge " +
                                    std::to_string(i) + "-" + std::to_string(j));
    }
  }
}

NeighborhoodGraph build_lattice(int rows, int cols, LatticeKind kind) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("lattice: rows and cols must be positive");
  const int n = rows * cols;
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  auto at = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      auto& l = lists[static_cast<std::size_t>(at(r, c))];
      auto push = [&](int rr, int cc) {
        if (rr >= 0 && rr < rows && cc >= 0 && cc < cols)
          l.push_back(static_cast<std::int32_t>(at(rr, cc)));
      };
      push(r, c - 1);
      push(r, c + 1);
      if (kind != LatticeKind::TwoNearest) {
        push(r - 1, c);
        push(r + 1, c);
      }
      if (kind == LatticeKind::EightNearest) {
        push(r - 1, c - 1);
        push(r - 1, c + 1);
        push(r + 1, c - 1);
        push(r + 1, c + 1);
      }
    }
  }
  NeighborhoodGraph g = from_neighbor_lists(n, std::move(lists));
  g.lattice_rows = rows;
  g.lattice_cols = cols;
  g.lattice_kind = kind;
  g.coord_u.resize(static_cast<std::size_t>(n));
  g.coord_v.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      g.coord_u[static_cast<std::size_t>(at(r, c))] = c + 1;
      g.coord_v[static_cast<std::size_t>(at(r, c))] = r + 1;
    }
  return g;
}

int incidence_edge_index(int vertices, int a, int b) {
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= vertices || a == b)
    throw std::invalid_argument("incidence: bad vertex pair");
  // pairs (0,1), (0,2), ..., (0,V-1), (1,2), ...
  return a * vertices - a * (a + 1) / 2 + (b - a - 1);
}

NeighborhoodGraph build_incidence(int vertices) {
  if (vertices < 2)
    throw std::invalid_argument("incidence: need at least two vertices");
  const int n = vertices * (vertices - 1) / 2;
  std::vector<std::array<std::int32_t, 2>> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < vertices; ++a)
    for (int b = a + 1; b < vertices; ++b)
      pairs.push_back({static_cast<std::int32_t>(a), static_cast<std::int32_t>(b)});
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool share = pairs[i][0] == pairs[j][0] || pairs[i][0] == pairs[j][1] ||
                         pairs[i][1] == pairs[j][0] || pairs[i][1] == pairs[j][1];
      if (share) {
        lists[static_cast<std::size_t>(i)].push_back(j);
        lists[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  NeighborhoodGraph g = from_neighbor_lists(n, std::move(lists));
  g.incidence_vertices = vertices;
  g.vertex_pairs = std::move(pairs);
  return g;
}

NeighborhoodGraph build_threshold_graph(std::span<const double> distances,
                                        int n, double threshold) {
  if (n < 0 || distances.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("threshold graph: distance matrix shape");
  if (!(threshold > 0.0))
    throw std::invalid_argument("threshold graph: threshold must be positive");
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (distances[static_cast<std::size_t>(i) * n + i] != 0.0)
      throw std::invalid_argument("threshold graph: nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      const double d = distances[static_cast<std::size_t>(i) * n + j];
      const double dt = distances[static_cast<std::size_t>(j) * n + i];
      if (d != dt)
        throw std::invalid_argument("threshold graph: asymmetric distances");
      if (d > 0.0 && d <= threshold) {
        lists[static_cast<std::size_t>(i)].push_back(j);
        lists[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }
  return from_neighbor_lists(n, std::move(lists));
}

NeighborhoodGraph graph_from_edges(
    int n, std::span<const std::array<std::int32_t, 2>> edges) {
  if (n < 0) throw std::invalid_argument("graph: negative site count");
  std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    if (e[0] < 0 || e[0] >= n || e[1] < 0 || e[1] >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e[0] == e[1]) throw std::invalid_argument("graph: self loop");
    lists[static_cast<std::size_t>(e[0])].push_back(e[1]);
    lists[static_cast<std::size_t>(e[1])].push_back(e[0]);
  }
  return from_neighbor_lists(n, std::move(lists));
}

std::vector<std::array<std::int32_t, 2>> triangle_pairs(
    const NeighborhoodGraph& g, int site) {
  std::vector<std::array<std::int32_t, 2>> out;
  if (g.is_incidence()) {
    // sites are vertex pairs; a triangle through {a,b} is a third vertex c,
    // contributing the co-neighbor pair ({a,c}, {b,c}).  Pairs of sites that
    // merely share an endpoint are mutually adjacent but bound no triangle
    // of the underlying vertex set, so they do not appear here.
    const int v = g.incidence_vertices;
    const auto [a, b] = g.vertex_pairs[static_cast<std::size_t>(site)];
    out.reserve(static_cast<std::size_t>(v) - 2);
    for (int c = 0; c < v; ++c) {
      if (c == a || c == b) continue;
      std::int32_t ja = static_cast<std::int32_t>(incidence_edge_index(v, a, c));
      std::int32_t jb = static_cast<std::int32_t>(incidence_edge_index(v, b, c));
      if (ja > jb) std::swap(ja, jb);
      out.push_back({ja, jb});
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  const auto row = g.neighbors(site);
  for (std::size_t a = 0; a < row.size(); ++a)
    for (std::size_t b = a + 1; b < row.size(); ++b)
      if (g.adjacent(row[a], row[b])) out.push_back({row[a], row[b]});
  return out;
}

}  // namespace conclique
