#pragma once

// Internal compiled form of a (model, graph, cover) triple.  Not installed.
//
// The conclique sampler's per-iteration work is expressed as flat passes
// over these arrays.  Three execution tiers, picked at build time:
//
//   - checkerboard lattice kernel: two/four-nearest lattices under the
//     parity cover with direction-uniform coefficients; the field lives as
//     one dense array per parity class, so neighbor values are shifted
//     contiguous loads from the opposite array and the hot loop has no
//     index arrays at all;
//   - incidence kernel: binary pair-interaction models on incidence
//     structures; each vertex keeps a bitmask of its incident site values,
//     which turns triangle sums into AND + popcount and neighbor sums into
//     two popcounts;
//   - generic pass: per-site compressed rows of (index, coefficient),
//     evaluated as written.  Always built, also serves as the reference
//     for the specialized tiers in tests.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "conclique/cover.hpp"
#include "conclique/graph.hpp"
#include "conclique/model.hpp"

namespace conclique::detail {

enum class DrawKind { Gaussian, Binary };

struct ClassLinear {
  std::vector<std::int32_t> sites;
  std::vector<double> cst;         // per listed site
  std::vector<std::int64_t> off;   // sites.size() + 1
  std::vector<std::int32_t> idx;
  std::vector<double> coef;
};

struct Plan {
  int n = 0;
  DrawKind kind = DrawKind::Binary;
  double sigma = 1.0;  // Gaussian conditional sd

  std::vector<ClassLinear> linear;  // one entry per class

  // incidence tier
  bool use_bitrows = false;
  int vertices = 0;
  int words_per_row = 0;  // ceil(vertices / 64)
  std::vector<std::array<std::int32_t, 2>> site_vertices;
  std::vector<std::vector<double>> pair_c2;  // per class, per listed site

  // lattice tier
  bool use_lattice = false;
  int rows = 0, cols = 0;
  double coef_h = 0.0, coef_v = 0.0;
  std::vector<double> site_cst;  // site-indexed, padded with 16 zeros
  // Stationary models share one interior cst once off-grid neighbors are
  // treated as phantom sites pinned at the centering value: the vector
  // kernel then broadcasts cst0 and loads `phantom` from the pads and the
  // shifted-in boundary lanes instead of streaming a per-site array.
  bool uniform_cst = false;
  double cst0 = 0.0;
  double phantom = 0.0;
  // Checkerboard split of the lattice: the vector kernel keeps one dense
  // array per parity class, so a pass stores to its own class and loads
  // neighbors from the other with plain contiguous vectors.  row_off[c][r]
  // is where row r's run of class-c sites starts inside that array; cap
  // bounds the run length and doubles as the virtual row offset for the
  // phantom rows above and below the lattice.
  std::array<std::vector<std::int32_t>, 2> row_off;
  std::array<std::int32_t, 2> class_total{0, 0};
  int cap = 0;

  std::size_t pad() const {
    return use_lattice ? static_cast<std::size_t>(cols) + 16 : 16;
  }
  std::size_t split_pad() const { return static_cast<std::size_t>(cap) + 16; }
};

Plan build_plan(const ModelSpec& m, const NeighborhoodGraph& g,
                const ConcliqueCover& cover);

// Chain-owned state: the field copy and the iteration's uniforms.  The
// vector lattice kernel works on the checkerboard split (`half`/`yc`);
// every other tier, and every build without the vector kernel, works on
// the single padded site-ordered copy (`padded`/`y`).  reset() allocates
// whichever form the plan's kernel will touch.
struct Workspace {
  std::vector<double> padded;
  std::array<std::vector<double>, 2> half;
  std::vector<double> u;  // site-indexed, 16 slack entries
  std::vector<std::uint64_t> bitrows;
  double* y = nullptr;
  std::array<double*, 2> yc{nullptr, nullptr};

  void reset(const Plan& p);
  void load_field(const Plan& p, const double* values);
  void store_field(const Plan& p, double* values) const;
};

// Thread-owned scratch.  Gaussian lattice passes queue draws whose uniform
// falls outside the vectorized central range; the driver flushes the queue
// after its units complete.  The queue arrays are capacity-managed flat
// buffers (appends happen with compress-stores), `patches` counts the live
// entries.  a_buf stages log-odds for the incidence tier.
struct ThreadScratch {
  std::vector<std::int64_t> patch_site;
  std::vector<double> patch_acc;
  std::vector<double> patch_u;
  std::size_t patches = 0;
  std::vector<double> a_buf;
  std::vector<double> u_buf;

  void ensure_patch_capacity(std::size_t cap) {
    if (patch_site.size() < cap) {
      patch_site.resize(cap);
      patch_acc.resize(cap);
      patch_u.resize(cap);
    }
  }
};

// Work units a class pass splits into: lattice tier -> lattice rows,
// otherwise positions in the class's site list.
std::size_t unit_count(const Plan& p, int cls);

// Executes units [u0, u1) of class `cls`.  Units of one class touch
// disjoint state, so disjoint ranges may run concurrently, each with its
// own scratch.
void run_units(const Plan& p, int cls, std::size_t u0, std::size_t u1,
               Workspace& ws, ThreadScratch& ts);

// Completes the pass's queued non-central normal draws.
void flush_patches(const Plan& p, int cls, Workspace& ws, ThreadScratch& ts);

}  // namespace conclique::detail
