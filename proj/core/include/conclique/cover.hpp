#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conclique/graph.hpp"

namespace conclique {

// Partition of the sites into classes such that no two sites in the same
// class are neighbors.  Conditioned on the rest of the field, the sites of
// one class are independent, which is what lets a sampler update a whole
// class at once.
//
// Covers are kept in normalized form: class labels are contiguous from 0,
// every class is nonempty with sorted members, and classes are ordered by
// their smallest site.  All constructors here return normalized covers.
struct ConcliqueCover {
  int num_classes = 0;
  std::vector<std::int32_t> assignment;            // site -> class
  std::vector<std::vector<std::int32_t>> classes;  // class -> sorted sites
};

// Builds the normalized cover for an arbitrary labeling.
// Throws std::invalid_argument on negative labels or size mismatch.
ConcliqueCover cover_from_assignment(int n, std::vector<std::int32_t> labels);

struct CoverCheck {
  bool ok = true;
  // First offending pair when !ok: two adjacent sites sharing a class.
  std::int32_t site_a = -1;
  std::int32_t site_b = -1;
  std::string reason;
};

// Checks that the cover is a valid conclique partition of g.
CoverCheck verify_cover(const NeighborhoodGraph& g, const ConcliqueCover& c);

// Degeneracy-style upper bound for the number of classes a greedy coloring
// can use: with degrees sorted descending d_(1) >= d_(2) >= ...,
//   bound = max_i min(d_(i) + 1, i)      (i counted from 1).
int delta_n_bound(const NeighborhoodGraph& g);

// Greedy coloring, sites visited by non-increasing degree (ties: smaller
// index first), each site taking the lowest class unused by its neighbors.
ConcliqueCover greedy_welsh_powell(const NeighborhoodGraph& g);

// Saturation-guided greedy coloring: repeatedly color the uncolored site
// whose neighborhood already shows the most distinct classes, breaking ties
// by larger degree and then smaller index, again with the lowest feasible
// class.  Tends to hit the optimum on the structured graphs used here.
ConcliqueCover dsatur(const NeighborhoodGraph& g);

// Closed-form covers for lattice graphs:
//   two/four-nearest: 2 classes by checkerboard parity (row + col) % 2
//   eight-nearest:    4 classes, 2 * (row % 2) + (col % 2)
// Requires a graph built by build_lattice.
ConcliqueCover analytic_lattice_cover(const NeighborhoodGraph& g);

// Cover for incidence graphs of K_V via round-robin scheduling: the classes
// are the rounds of a circle-method tournament on V players (V odd: V
// rounds of (V-1)/2 pairs; V even: V-1 rounds of V/2 pairs).  Classes are
// perfect/near-perfect matchings, so the count 2*ceil(V/2) - 1 is optimal.
// Requires a graph built by build_incidence.
ConcliqueCover round_robin_edge_cover(const NeighborhoodGraph& g);

}  // namespace conclique
