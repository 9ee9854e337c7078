#include "conclique/cover.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace conclique {

ConcliqueCover cover_from_assignment(int n, std::vector<std::int32_t> labels) {
  if (labels.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("cover: assignment length != n");
  // relabel so classes are numbered by first appearance, dropping gaps
  std::vector<std::int32_t> remap;
  ConcliqueCover c;
  c.assignment.resize(labels.size());
  for (int i = 0; i < n; ++i) {
    const std::int32_t raw = labels[static_cast<std::size_t>(i)];
    if (raw < 0) throw std::invalid_argument("cover: negative class label");
    if (static_cast<std::size_t>(raw) >= remap.size())
      remap.resize(static_cast<std::size_t>(raw) + 1, -1);
    if (remap[static_cast<std::size_t>(raw)] < 0) {
      remap[static_cast<std::size_t>(raw)] = c.num_classes++;
      c.classes.emplace_back();
    }
    const std::int32_t cls = remap[static_cast<std::size_t>(raw)];
    c.assignment[static_cast<std::size_t>(i)] = cls;
    c.classes[static_cast<std::size_t>(cls)].push_back(i);
  }
  return c;
}

CoverCheck verify_cover(const NeighborhoodGraph& g, const ConcliqueCover& c) {
  CoverCheck out;
  if (c.assignment.size() != static_cast<std::size_t>(g.n)) {
    out.ok = false;
    out.reason = "assignment length does not match the graph";
    return out;
  }
  if (c.num_classes != static_cast<int>(c.classes.size())) {
    out.ok = false;
    out.reason = "class count disagrees with class list";
    return out;
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  for (int cls = 0; cls < c.num_classes; ++cls) {
    if (c.classes[static_cast<std::size_t>(cls)].empty()) {
      out.ok = false;
      out.reason = "empty class " + std::to_string(cls);
      return out;
    }
    for (const std::int32_t s : c.classes[static_cast<std::size_t>(cls)]) {
      if (s < 0 || s >= g.n || c.assignment[static_cast<std::size_t>(s)] != cls ||
          seen[static_cast<std::size_t>(s)]) {
        out.ok = false;
        out.reason = "class lists do not partition the sites";
        return out;
      }
      seen[static_cast<std::size_t>(s)] = 1;
    }
  }
  for (int i = 0; i < g.n; ++i) {
    for (const std::int32_t j : g.neighbors(i)) {
      if (j > i) continue;
      if (c.assignment[static_cast<std::size_t>(i)] ==
          c.assignment[static_cast<std::size_t>(j)]) {
        out.ok = false;
        out.site_a = j;
        out.site_b = i;
        out.reason = "adjacent sites " + std::to_string(j) + " and " +
                     std::to_string(i) + " share class " +
                     std::to_string(c.assignment[static_cast<std::size_t>(i)]);
        return out;
      }
    }
  }
  return out;
}

int delta_n_bound(const NeighborhoodGraph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.n));
  for (int i = 0; i < g.n; ++i) deg[static_cast<std::size_t>(i)] = g.degree(i);
  std::sort(deg.begin(), deg.end(), std::greater<>());
  int bound = 0;
  for (int i = 1; i <= g.n; ++i)
    bound = std::max(bound, std::min(deg[static_cast<std::size_t>(i - 1)] + 1, i));
  return bound;
}

namespace {

// Lowest class not used by any already-assigned neighbor.
std::int32_t lowest_free(const NeighborhoodGraph& g,
                         const std::vector<std::int32_t>& label, int site,
                         std::vector<char>& used) {
  std::fill(used.begin(), used.end(), 0);
  for (const std::int32_t j : g.neighbors(site)) {
    const std::int32_t l = label[static_cast<std::size_t>(j)];
    if (l >= 0) used[static_cast<std::size_t>(l)] = 1;
  }
  std::int32_t c = 0;
  while (used[static_cast<std::size_t>(c)]) ++c;
  return c;
}

}  // namespace

ConcliqueCover greedy_welsh_powell(const NeighborhoodGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  std::vector<std::int32_t> label(static_cast<std::size_t>(g.n), -1);
  std::vector<char> used(static_cast<std::size_t>(g.n) + 1, 0);
  for (const int site : order) label[static_cast<std::size_t>(site)] = lowest_free(g, label, site, used);
  return cover_from_assignment(g.n, std::move(label));
}

ConcliqueCover dsatur(const NeighborhoodGraph& g) {
  std::vector<std::int32_t> label(static_cast<std::size_t>(g.n), -1);
  if (g.n == 0) return cover_from_assignment(0, {});
  std::vector<std::vector<char>> nbr_class(static_cast<std::size_t>(g.n));
  std::vector<int> sat(static_cast<std::size_t>(g.n), 0);
  std::vector<char> used(static_cast<std::size_t>(g.n) + 1, 0);
  for (int step = 0; step < g.n; ++step) {
    int pick = -1;
    for (int i = 0; i < g.n; ++i) {
      if (label[static_cast<std::size_t>(i)] >= 0) continue;
      if (pick < 0) {
        pick = i;
        continue;
      }
      const int si = sat[static_cast<std::size_t>(i)];
      const int sp = sat[static_cast<std::size_t>(pick)];
      if (si > sp || (si == sp && g.degree(i) > g.degree(pick))) pick = i;
      // equal saturation and degree keeps the smaller index
    }
    const std::int32_t cls = lowest_free(g, label, pick, used);
    label[static_cast<std::size_t>(pick)] = cls;
    for (const std::int32_t j : g.neighbors(pick)) {
      if (label[static_cast<std::size_t>(j)] >= 0) continue;
      auto& mask = nbr_class[static_cast<std::size_t>(j)];
      if (mask.size() <= static_cast<std::size_t>(cls))
        mask.resize(static_cast<std::size_t>(cls) + 1, 0);
      if (!mask[static_cast<std::size_t>(cls)]) {
        mask[static_cast<std::size_t>(cls)] = 1;
        ++sat[static_cast<std::size_t>(j)];
      }
    }
  }
  return cover_from_assignment(g.n, std::move(label));
}

ConcliqueCover analytic_lattice_cover(const NeighborhoodGraph& g) {
  if (!g.is_lattice())
    throw std::invalid_argument("analytic cover: graph was not built as a lattice");
  const int rows = g.lattice_rows, cols = g.lattice_cols;
  std::vector<std::int32_t> label(static_cast<std::size_t>(g.n));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      label[i] = g.lattice_kind == LatticeKind::EightNearest
                     ? static_cast<std::int32_t>(2 * (r % 2) + (c % 2))
                     : static_cast<std::int32_t>((r + c) % 2);
    }
  return cover_from_assignment(g.n, std::move(label));
}

ConcliqueCover round_robin_edge_cover(const NeighborhoodGraph& g) {
  if (!g.is_incidence())
    throw std::invalid_argument(
        "round-robin cover: graph was not built as an incidence structure");
  const int v = g.incidence_vertices;
  // circle method: with an odd vertex count add a bye slot
  const int m = v + (v % 2);  // players including the bye
  std::vector<std::int32_t> label(static_cast<std::size_t>(g.n), -1);
  auto site_of = [&](int a, int b) { return incidence_edge_index(v, a, b); };
  for (int round = 0; round < m - 1; ++round) {
    // fixed player m-1 meets `round`; the rest pair off symmetrically
    if (m - 1 < v)
      label[static_cast<std::size_t>(site_of(m - 1, round))] = round;
    for (int k = 1; k <= m / 2 - 1; ++k) {
      const int a = (round + k) % (m - 1);
      const int b = (round - k + (m - 1)) % (m - 1);
      if (a < v && b < v)
        label[static_cast<std::size_t>(site_of(a, b))] = round;
    }
  }
  return cover_from_assignment(g.n, std::move(label));
}

}  // namespace conclique
