#include "plan.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "conclique/math.hpp"
#include "simd_math.hpp"

namespace conclique::detail {

namespace {

struct EdgeTerm {
  std::int32_t j;
  double coef;
};

// Per-site linear decomposition A_i (or mu_i) = cst + sum coef_j * y_j of
// every family; the pair term of the incidence family is handled separately.
struct SiteTerms {
  double cst = 0.0;
  std::vector<EdgeTerm> edges;
  double c1 = 0.0;  // incidence family only
  double c2 = 0.0;
};

SiteTerms site_terms(const ModelSpec& m, const NeighborhoodGraph& g, int site) {
  SiteTerms out;
  const auto nbrs = g.neighbors(site);
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Gaussian>) {
          out.cst = spec.alpha * (1.0 - spec.eta * static_cast<double>(nbrs.size()));
          for (const std::int32_t j : nbrs) out.edges.push_back({j, spec.eta});
        } else if constexpr (std::is_same_v<T, AutologisticIso>) {
          out.cst = math::logit(spec.kappa) -
                    spec.eta * spec.kappa * static_cast<double>(nbrs.size());
          for (const std::int32_t j : nbrs) out.edges.push_back({j, spec.eta});
        } else if constexpr (std::is_same_v<T, AutologisticAniso>) {
          double fold = 0.0;
          const double v0 = g.coord_v[static_cast<std::size_t>(site)];
          for (const std::int32_t j : nbrs) {
            const bool horiz = g.coord_v[static_cast<std::size_t>(j)] == v0;
            const double c = horiz ? spec.eta_u : spec.eta_v;
            out.edges.push_back({j, c});
            fold += c * spec.kappa;
          }
          out.cst = math::logit(spec.kappa) - fold;
        } else if constexpr (std::is_same_v<T, AutologisticRegression>) {
          double fold = 0.0;
          const double v0 = g.coord_v[static_cast<std::size_t>(site)];
          for (const std::int32_t j : nbrs) {
            const bool horiz = g.coord_v[static_cast<std::size_t>(j)] == v0;
            const double c = horiz ? spec.eta_u : spec.eta_v;
            const double kj = math::logistic(
                spec.beta0 + spec.beta1 * g.coord_u[static_cast<std::size_t>(j)]);
            out.edges.push_back({j, c});
            fold += c * kj;
          }
          out.cst = spec.beta0 +
                    spec.beta1 * g.coord_u[static_cast<std::size_t>(site)] - fold;
        } else if constexpr (std::is_same_v<T, AutologisticUncentered>) {
          out.cst = math::logit(spec.kappa);
          for (const std::int32_t j : nbrs) out.edges.push_back({j, spec.eta});
        } else if constexpr (std::is_same_v<T, TriadIncidence>) {
          const double c1 = spec.eta1 / static_cast<double>(nbrs.size());
          out.cst = math::logit(spec.kappa) - spec.eta1 * spec.kappa -
                    spec.eta2 * spec.kappa * spec.kappa;
          for (const std::int32_t j : nbrs) out.edges.push_back({j, c1});
          out.c1 = c1;
          out.c2 = spec.eta2 / static_cast<double>(g.incidence_vertices - 2);
        } else {
          static_assert(std::is_same_v<T, LocalStructureGraphical>);
          auto logit_kappa = [&](int s) {
            if (spec.covariates.empty()) return spec.beta[0];
            const auto& x = spec.covariates[static_cast<std::size_t>(s)];
            return spec.beta[0] + spec.beta[1] * x[0] + spec.beta[2] * x[1] +
                   spec.beta[3] * x[2];
          };
          const std::int64_t base = g.offsets[static_cast<std::size_t>(site)];
          double fold = 0.0;
          for (std::size_t k = 0; k < nbrs.size(); ++k) {
            const std::int32_t j = nbrs[k];
            const double w =
                spec.weights.empty() ? 1.0
                                     : spec.weights[static_cast<std::size_t>(base) + k];
            out.edges.push_back({j, spec.eta * w});
            fold += spec.eta * w * math::logistic(logit_kappa(j));
          }
          out.cst = logit_kappa(site) - fold;
        }
      },
      m);
  return out;
}

inline double draw_binary(double a, double u) {
  const double p = math::logistic(a);
  return u > 1.0 - p ? 1.0 : 0.0;
}

}  // namespace

Plan build_plan(const ModelSpec& m, const NeighborhoodGraph& g,
                const ConcliqueCover& cover) {
  Plan p;
  p.n = g.n;
  p.kind = std::holds_alternative<Gaussian>(m) ? DrawKind::Gaussian
                                               : DrawKind::Binary;
  if (const auto* gauss = std::get_if<Gaussian>(&m))
    p.sigma = std::sqrt(gauss->tau2);

  const bool triad = std::holds_alternative<TriadIncidence>(m);
  p.use_bitrows = triad;
  if (triad) {
    p.vertices = g.incidence_vertices;
    p.words_per_row = (p.vertices + 63) / 64;
    p.site_vertices = g.vertex_pairs;
    p.pair_c2.resize(static_cast<std::size_t>(cover.num_classes));
  }

  p.site_cst.assign(static_cast<std::size_t>(g.n) + 16, 0.0);
  p.linear.resize(static_cast<std::size_t>(cover.num_classes));

  // candidate direction-uniform coefficients for the lattice tier
  bool dir_uniform = g.is_lattice() && g.lattice_kind != LatticeKind::EightNearest;
  bool have_h = false, have_v = false;
  double ch = 0.0, cv = 0.0;

  for (int cls = 0; cls < cover.num_classes; ++cls) {
    auto& L = p.linear[static_cast<std::size_t>(cls)];
    L.sites = cover.classes[static_cast<std::size_t>(cls)];
    L.off.push_back(0);
    auto* c2v = triad ? &p.pair_c2[static_cast<std::size_t>(cls)] : nullptr;
    for (const std::int32_t site : L.sites) {
      SiteTerms t = site_terms(m, g, site);
      L.cst.push_back(t.cst);
      p.site_cst[static_cast<std::size_t>(site)] = t.cst;
      for (const EdgeTerm& e : t.edges) {
        L.idx.push_back(e.j);
        L.coef.push_back(e.coef);
        if (dir_uniform) {
          const bool horiz = g.coord_v[static_cast<std::size_t>(e.j)] ==
                             g.coord_v[static_cast<std::size_t>(site)];
          double& slot = horiz ? ch : cv;
          bool& have = horiz ? have_h : have_v;
          if (!have) {
            slot = e.coef;
            have = true;
          } else if (slot != e.coef) {
            dir_uniform = false;
          }
        }
      }
      L.off.push_back(static_cast<std::int64_t>(L.idx.size()));
      if (c2v) c2v->push_back(t.c2);
    }
  }

  // lattice tier applies when the cover is exactly the parity checkerboard
  if (dir_uniform && cover.num_classes == 2) {
    bool parity = true;
    for (int r = 0; r < g.lattice_rows && parity; ++r)
      for (int c = 0; c < g.lattice_cols; ++c)
        if (cover.assignment[static_cast<std::size_t>(r) * g.lattice_cols + c] !=
            (r + c) % 2) {
          parity = false;
          break;
        }
    if (parity) {
      p.use_lattice = true;
      p.rows = g.lattice_rows;
      p.cols = g.lattice_cols;
      p.coef_h = have_h ? ch : 0.0;
      p.coef_v = have_v ? cv : 0.0;
      p.cap = (p.cols + 1) >> 1;
      for (int c = 0; c < 2; ++c) {
        auto& off = p.row_off[static_cast<std::size_t>(c)];
        off.resize(static_cast<std::size_t>(p.rows));
        std::int32_t at = 0;
        for (int r = 0; r < p.rows; ++r) {
          off[static_cast<std::size_t>(r)] = at;
          at += (p.cols - ((c + r) & 1) + 1) >> 1;
        }
        p.class_total[static_cast<std::size_t>(c)] = at;
      }
      if (g.lattice_rows >= 3 && g.lattice_cols >= 3) {
        std::visit(
            [&](const auto& spec) {
              using T = std::decay_t<decltype(spec)>;
              if constexpr (std::is_same_v<T, Gaussian>) {
                p.uniform_cst = true;
                p.phantom = spec.alpha;
              } else if constexpr (std::is_same_v<T, AutologisticIso> ||
                                   std::is_same_v<T, AutologisticAniso>) {
                p.uniform_cst = true;
                p.phantom = spec.kappa;
              } else if constexpr (std::is_same_v<T, AutologisticUncentered>) {
                p.uniform_cst = true;
                p.phantom = 0.0;
              }
            },
            m);
        // interior site (1,1) carries the full-degree cst
        if (p.uniform_cst)
          p.cst0 = p.site_cst[static_cast<std::size_t>(g.lattice_cols) + 1];
      }
    }
  }
  return p;
}

void Workspace::reset(const Plan& p) {
#ifdef CONCLIQUE_SIMD_AVX512
  if (p.use_lattice) {
    // Pads hold the phantom value: vertical neighbor loads for the edge
    // rows and the substituted boundary lanes then need no special cases.
    const std::size_t sp = p.split_pad();
    for (int c = 0; c < 2; ++c) {
      auto& h = half[static_cast<std::size_t>(c)];
      h.assign(2 * sp + static_cast<std::size_t>(
                            p.class_total[static_cast<std::size_t>(c)]),
               p.phantom);
      yc[static_cast<std::size_t>(c)] = h.data() + sp;
    }
    u.assign(static_cast<std::size_t>(p.n) + 16, 0.0);
    return;
  }
#endif
  const std::size_t pad = p.pad();
  padded.assign(static_cast<std::size_t>(p.n) + 2 * pad, 0.0);
  y = padded.data() + pad;
  u.assign(static_cast<std::size_t>(p.n) + 16, 0.0);
  if (p.use_bitrows)
    bitrows.assign(static_cast<std::size_t>(p.vertices) * p.words_per_row, 0);
}

void Workspace::load_field(const Plan& p, const double* values) {
#ifdef CONCLIQUE_SIMD_AVX512
  if (p.use_lattice) {
    // site (r, c) has class (r + c) & 1 and sits at slot c / 2 of its
    // row's run in that class's array
    for (int r = 0; r < p.rows; ++r) {
      const double* src = values + static_cast<std::int64_t>(r) * p.cols;
      double* d0 = yc[static_cast<std::size_t>(r & 1)] +
                   p.row_off[static_cast<std::size_t>(r & 1)][static_cast<std::size_t>(r)];
      double* d1 = yc[static_cast<std::size_t>(1 - (r & 1))] +
                   p.row_off[static_cast<std::size_t>(1 - (r & 1))][static_cast<std::size_t>(r)];
      for (int c = 0; c < p.cols; ++c)
        ((c & 1) ? d1 : d0)[c >> 1] = src[c];
    }
    return;
  }
#endif
  std::memcpy(y, values, sizeof(double) * static_cast<std::size_t>(p.n));
  if (p.use_bitrows) {
    std::fill(bitrows.begin(), bitrows.end(), 0);
    const int w = p.words_per_row;
    for (int i = 0; i < p.n; ++i) {
      if (values[i] == 0.0) continue;
      const auto [a, b] = p.site_vertices[static_cast<std::size_t>(i)];
      bitrows[static_cast<std::size_t>(a) * w + (b >> 6)] |= 1ull << (b & 63);
      bitrows[static_cast<std::size_t>(b) * w + (a >> 6)] |= 1ull << (a & 63);
    }
  }
}

void Workspace::store_field(const Plan& p, double* values) const {
#ifdef CONCLIQUE_SIMD_AVX512
  if (p.use_lattice) {
    for (int r = 0; r < p.rows; ++r) {
      double* dst = values + static_cast<std::int64_t>(r) * p.cols;
      const double* s0 = yc[static_cast<std::size_t>(r & 1)] +
                         p.row_off[static_cast<std::size_t>(r & 1)][static_cast<std::size_t>(r)];
      const double* s1 = yc[static_cast<std::size_t>(1 - (r & 1))] +
                         p.row_off[static_cast<std::size_t>(1 - (r & 1))][static_cast<std::size_t>(r)];
      for (int c = 0; c < p.cols; ++c)
        dst[c] = ((c & 1) ? s1 : s0)[c >> 1];
    }
    return;
  }
#endif
  std::memcpy(values, y, sizeof(double) * static_cast<std::size_t>(p.n));
}

std::size_t unit_count(const Plan& p, int cls) {
  if (p.use_lattice) return static_cast<std::size_t>(p.rows);
  return p.linear[static_cast<std::size_t>(cls)].sites.size();
}

namespace {

// Scalar evaluation of one lattice site with boundary checks; the pads
// cover the vertical edges, columns need explicit guards.
inline double lattice_acc(const Plan& p, const double* y, std::int64_t site,
                          int col) {
  double h = 0.0;
  if (col > 0) h += y[site - 1];
  if (col < p.cols - 1) h += y[site + 1];
  const double v = y[site - p.cols] + y[site + p.cols];
  return p.site_cst[static_cast<std::size_t>(site)] + p.coef_h * h + p.coef_v * v;
}

inline double lattice_draw(const Plan& p, double acc, double u) {
  if (p.kind == DrawKind::Gaussian)
    return acc + p.sigma * math::normal_quantile(u);
  return draw_binary(acc, u);
}

void lattice_row_scalar(const Plan& p, int cls, int r, int k0, int k1,
                        Workspace& ws) {
  const int c0 = (cls + r) & 1;
  const std::int64_t base = static_cast<std::int64_t>(r) * p.cols + c0;
  for (int k = k0; k < k1; ++k) {
    const std::int64_t site = base + 2 * k;
    const double acc = lattice_acc(p, ws.y, site, c0 + 2 * k);
    ws.y[site] = lattice_draw(p, acc, ws.u[static_cast<std::size_t>(site)]);
  }
}

#ifdef CONCLIQUE_SIMD_AVX512

// Slot k of a row's class run is site (r, c0 + 2k); its horizontal
// neighbors sit at slots k + c0 - 1 and k + c0 of the other class's run
// for the same row, its vertical neighbors at slot k of the runs for the
// rows above and below (their runs start on the same column parity).
// Rows beyond the lattice resolve into the pads, which hold the phantom
// value, so only the two in-row boundary lanes need substitution: their
// loads land on a real site of the adjacent run, not on a pad.
template <bool kGauss>
void lattice_units_avx(const Plan& p, int cls, std::size_t u0, std::size_t u1,
                       Workspace& ws, ThreadScratch& ts) {
  const double* opp = ws.yc[static_cast<std::size_t>(1 - cls)];
  const std::int32_t* ooff = p.row_off[static_cast<std::size_t>(1 - cls)].data();
  const std::int32_t* coff = p.row_off[static_cast<std::size_t>(cls)].data();
  double* const mine = ws.yc[static_cast<std::size_t>(cls)];
  const __m512d vch = _mm512_set1_pd(p.coef_h);
  const __m512d vcv = _mm512_set1_pd(p.coef_v);
  const __m512d vsig = _mm512_set1_pd(p.sigma);
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d vphi = _mm512_set1_pd(p.phantom);
  const __m512d cst0 = _mm512_set1_pd(p.cst0);
  const __m512i lane_off = _mm512_set_epi64(7, 6, 5, 4, 3, 2, 1, 0);
  for (std::size_t ur = u0; ur < u1; ++ur) {
    const int r = static_cast<int>(ur);
    const int c0 = (cls + r) & 1;
    const int cnt = (p.cols - c0 + 1) >> 1;
    const std::int64_t base = static_cast<std::int64_t>(r) * p.cols + c0;
    const std::int32_t o_n = r > 0 ? ooff[r - 1] : ooff[0] - p.cap;
    const std::int32_t o_s =
        r + 1 < p.rows ? ooff[r + 1] : ooff[p.rows - 1] + p.cap;
    const double* wp = opp + ooff[r] + c0 - 1;
    const double* np = opp + o_n;
    const double* sp = opp + o_s;
    const std::int64_t own0 = coff[r];
    double* own = mine + own0;
    const bool fix_w = c0 == 0;
    const bool fix_e = c0 + 2 * (cnt - 1) == p.cols - 1;
    for (int k = 0; k < cnt; k += 8) {
      const int rem = std::min(8, cnt - k);
      const __mmask8 ml = static_cast<__mmask8>((1u << rem) - 1u);
      __m512d w = _mm512_loadu_pd(wp + k);
      __m512d e = _mm512_loadu_pd(wp + k + 1);
      if (k == 0 && fix_w) w = _mm512_mask_mov_pd(w, 0x01, vphi);
      if (k + 8 >= cnt && fix_e)
        e = _mm512_mask_mov_pd(e, static_cast<__mmask8>(1u << (rem - 1)), vphi);
      const __m512d nn = _mm512_loadu_pd(np + k);
      const __m512d ss = _mm512_loadu_pd(sp + k);
      const __m512d cst =
          p.uniform_cst ? cst0
                        : simd::load_even(p.site_cst.data() + base + 2 * k);
      const __m512d uu = simd::load_even(ws.u.data() + base + 2 * k);
      __m512d acc = _mm512_fmadd_pd(vch, _mm512_add_pd(w, e), cst);
      acc = _mm512_fmadd_pd(vcv, _mm512_add_pd(nn, ss), acc);
      __m512d yv;
      if constexpr (kGauss) {
        __m512d z;
        const __mmask8 patch = simd::vnormal_quantile_central(uu, &z) & ml;
        yv = _mm512_fmadd_pd(z, vsig, acc);
        if (patch) {
          const __m512i slots =
              _mm512_add_epi64(_mm512_set1_epi64(own0 + k), lane_off);
          _mm512_mask_compressstoreu_epi64(ts.patch_site.data() + ts.patches,
                                           patch, slots);
          _mm512_mask_compressstoreu_pd(ts.patch_acc.data() + ts.patches,
                                        patch, acc);
          _mm512_mask_compressstoreu_pd(ts.patch_u.data() + ts.patches, patch,
                                        uu);
          ts.patches += static_cast<std::size_t>(
              std::popcount(static_cast<unsigned>(patch)));
        }
      } else {
        const __m512d thr = simd::vlogistic_complement(acc);
        const __mmask8 onebit = _mm512_cmp_pd_mask(uu, thr, _CMP_GT_OQ);
        yv = _mm512_maskz_mov_pd(onebit, one);
      }
      if (rem == 8)
        _mm512_storeu_pd(own + k, yv);
      else
        _mm512_mask_storeu_pd(own + k, ml, yv);
    }
  }
}

// Middle branch of the normal quantile for the queued lanes
// (1.6 < sqrt(-log(tail)) <= 5); far-tail lanes fall back to scalar.
inline __m512d vquantile_middle(__m512d u, __mmask8* far_tail) {
  const __m512d half = _mm512_set1_pd(0.5);
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d tail = _mm512_min_pd(u, _mm512_sub_pd(one, u));
  const __m512d r =
      _mm512_sqrt_pd(_mm512_sub_pd(_mm512_setzero_pd(), simd::vlog(tail)));
  *far_tail = _mm512_cmp_pd_mask(r, _mm512_set1_pd(5.0), _CMP_GT_OQ);
  const __m512d s = _mm512_sub_pd(r, _mm512_set1_pd(1.6));
  __m512d num = _mm512_set1_pd(7.74545014278341407640e-4);
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(2.27238449892691845833e-2));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(2.41780725177450611770e-1));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(1.27045825245236838258e0));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(3.64784832476320460504e0));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(5.76949722146069140550e0));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(4.63033784615654529590e0));
  num = _mm512_fmadd_pd(num, s, _mm512_set1_pd(1.42343711074968357734e0));
  __m512d den = _mm512_set1_pd(1.05075007164441684324e-9);
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(5.47593808499534494600e-4));
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(1.51986665636164571966e-2));
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(1.48103976427480074590e-1));
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(6.89767334985100004550e-1));
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(1.67638483018380384940e0));
  den = _mm512_fmadd_pd(den, s, _mm512_set1_pd(2.05319162663775882187e0));
  den = _mm512_fmadd_pd(den, s, one);
  __m512d z = _mm512_div_pd(num, den);
  const __mmask8 lower = _mm512_cmp_pd_mask(u, half, _CMP_LT_OQ);
  return _mm512_mask_sub_pd(z, lower, _mm512_setzero_pd(), z);
}

#endif  // CONCLIQUE_SIMD_AVX512

void incidence_units(const Plan& p, int cls, std::size_t u0, std::size_t u1,
                     Workspace& ws, ThreadScratch& ts) {
  const ClassLinear& L = p.linear[static_cast<std::size_t>(cls)];
  const auto& c2 = p.pair_c2[static_cast<std::size_t>(cls)];
  const std::size_t cnt = u1 - u0;
  ts.a_buf.resize(cnt);
  ts.u_buf.resize(cnt);
  const int w = p.words_per_row;
  for (std::size_t k = u0; k < u1; ++k) {
    const std::int32_t site = L.sites[k];
    const auto [a, b] = p.site_vertices[static_cast<std::size_t>(site)];
    double lin, pair_sum;
    if (w == 1) {
      const std::uint64_t ra = ws.bitrows[static_cast<std::size_t>(a)];
      const std::uint64_t rb = ws.bitrows[static_cast<std::size_t>(b)];
      lin = static_cast<double>(std::popcount(ra) + std::popcount(rb)) -
            2.0 * ws.y[site];
      pair_sum = static_cast<double>(std::popcount(ra & rb));
    } else {
      int cl = 0, cp = 0;
      for (int t = 0; t < w; ++t) {
        const std::uint64_t ra = ws.bitrows[static_cast<std::size_t>(a) * w + t];
        const std::uint64_t rb = ws.bitrows[static_cast<std::size_t>(b) * w + t];
        cl += std::popcount(ra) + std::popcount(rb);
        cp += std::popcount(ra & rb);
      }
      lin = static_cast<double>(cl) - 2.0 * ws.y[site];
      pair_sum = static_cast<double>(cp);
    }
    // coefficient of the neighbor sum is uniform per site: first CSR entry
    const double c1 = L.coef[static_cast<std::size_t>(L.off[k])];
    ts.a_buf[k - u0] = L.cst[k] + c1 * lin + c2[k] * pair_sum;
    ts.u_buf[k - u0] = ws.u[static_cast<std::size_t>(L.sites[k])];
  }
  // log-odds -> draws
  std::size_t j = 0;
#ifdef CONCLIQUE_SIMD_AVX512
  const __m512d one = _mm512_set1_pd(1.0);
  for (; j + 8 <= cnt; j += 8) {
    const __m512d a = _mm512_loadu_pd(ts.a_buf.data() + j);
    const __m512d uu = _mm512_loadu_pd(ts.u_buf.data() + j);
    const __m512d thr = simd::vlogistic_complement(a);
    const __mmask8 onebit = _mm512_cmp_pd_mask(uu, thr, _CMP_GT_OQ);
    _mm512_storeu_pd(ts.a_buf.data() + j, _mm512_maskz_mov_pd(onebit, one));
  }
#endif
  for (; j < cnt; ++j) ts.a_buf[j] = draw_binary(ts.a_buf[j], ts.u_buf[j]);
  for (std::size_t k = u0; k < u1; ++k) {
    const std::int32_t site = L.sites[k];
    const double v = ts.a_buf[k - u0];
    ws.y[site] = v;
    const auto [a, b] = p.site_vertices[static_cast<std::size_t>(site)];
    std::uint64_t& wa = ws.bitrows[static_cast<std::size_t>(a) * w + (b >> 6)];
    std::uint64_t& wb = ws.bitrows[static_cast<std::size_t>(b) * w + (a >> 6)];
    const std::uint64_t ma = 1ull << (b & 63);
    const std::uint64_t mb = 1ull << (a & 63);
    wa = v != 0.0 ? (wa | ma) : (wa & ~ma);
    wb = v != 0.0 ? (wb | mb) : (wb & ~mb);
  }
}

void generic_units(const Plan& p, int cls, std::size_t u0, std::size_t u1,
                   Workspace& ws) {
  const ClassLinear& L = p.linear[static_cast<std::size_t>(cls)];
  for (std::size_t k = u0; k < u1; ++k) {
    const std::int32_t site = L.sites[k];
    double acc = L.cst[k];
    for (std::int64_t e = L.off[k]; e < L.off[k + 1]; ++e)
      acc += L.coef[static_cast<std::size_t>(e)] *
             ws.y[L.idx[static_cast<std::size_t>(e)]];
    const double u = ws.u[static_cast<std::size_t>(site)];
    ws.y[site] = p.kind == DrawKind::Gaussian
                     ? acc + p.sigma * math::normal_quantile(u)
                     : draw_binary(acc, u);
  }
}

}  // namespace

void run_units(const Plan& p, int cls, std::size_t u0, std::size_t u1,
               Workspace& ws, ThreadScratch& ts) {
  if (p.use_lattice) {
#ifdef CONCLIQUE_SIMD_AVX512
    if (p.kind == DrawKind::Gaussian) {
      ts.ensure_patch_capacity(static_cast<std::size_t>(p.n) + 8);
      lattice_units_avx<true>(p, cls, u0, u1, ws, ts);
    } else {
      lattice_units_avx<false>(p, cls, u0, u1, ws, ts);
    }
#else
    for (std::size_t r = u0; r < u1; ++r) {
      const int c0 = (cls + static_cast<int>(r)) & 1;
      const int cnt = (p.cols - c0 + 1) >> 1;
      lattice_row_scalar(p, cls, static_cast<int>(r), 0, cnt, ws);
    }
#endif
    return;
  }
  if (p.use_bitrows) {
    incidence_units(p, cls, u0, u1, ws, ts);
    return;
  }
  generic_units(p, cls, u0, u1, ws);
}

void flush_patches(const Plan& p, int cls, Workspace& ws, ThreadScratch& ts) {
  const std::size_t cnt = ts.patches;
  if (cnt == 0) return;
#ifdef CONCLIQUE_SIMD_AVX512
  // Queued entries address slots of the pass's class array.  The ragged
  // final block runs masked so every queued lane goes through the same
  // arithmetic no matter how the queue was partitioned across threads.
  double* dest = ws.yc[static_cast<std::size_t>(cls)];
  for (std::size_t j = 0; j < cnt; j += 8) {
    const int rem = static_cast<int>(std::min<std::size_t>(8, cnt - j));
    const __mmask8 ml = static_cast<__mmask8>((1u << rem) - 1u);
    const __m512d uu =
        _mm512_mask_loadu_pd(_mm512_set1_pd(0.5), ml, ts.patch_u.data() + j);
    __mmask8 far = 0;
    const __m512d z = vquantile_middle(uu, &far);
    alignas(64) double z_a[8];
    _mm512_store_pd(z_a, z);
    for (int l = 0; l < rem; ++l) {
      const double zl = (far & (1u << l))
                            ? math::normal_quantile(ts.patch_u[j + l])
                            : z_a[l];
      dest[ts.patch_site[j + l]] = ts.patch_acc[j + l] + p.sigma * zl;
    }
  }
#else
  (void)cls;
  for (std::size_t j = 0; j < cnt; ++j)
    ws.y[ts.patch_site[j]] =
        ts.patch_acc[j] + p.sigma * math::normal_quantile(ts.patch_u[j]);
#endif
  ts.patches = 0;
}

}  // namespace conclique::detail
