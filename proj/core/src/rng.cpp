#include "conclique/rng.hpp"

#include <cstdint>

#if defined(__AVX512F__) && defined(__AVX512DQ__)
#include <immintrin.h>
#define CONCLIQUE_RNG_AVX512 1
#endif

namespace conclique::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::uint32_t& x0, std::uint32_t& x1,
                         std::uint32_t& x2, std::uint32_t& x3,
                         std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * x0;
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * x2;
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x0 = hi1 ^ x1 ^ k0;
  x1 = lo1;
  x2 = hi0 ^ x3 ^ k1;
  x3 = lo0;
}

// (v >> 11 + 0.5) * 2^-53, the exact sequence the batch path mirrors.
inline double to_unit(std::uint64_t v) {
  return (static_cast<double>(v >> 11) + 0.5) * 0x1p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> key) {
  std::uint32_t k0 = key[0];
  std::uint32_t k1 = key[1];
  for (int r = 0; r < 10; ++r) {
    philox_round(c[0], c[1], c[2], c[3], k0, k1);
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return c;
}

double uniform_at(std::uint64_t seed, std::uint64_t iteration,
                  std::uint32_t site, std::uint32_t purpose) {
  const auto b = philox4x32(
      {static_cast<std::uint32_t>(iteration),
       static_cast<std::uint32_t>(iteration >> 32), site >> 1, purpose},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t v =
      (site & 1u) ? (static_cast<std::uint64_t>(b[2]) << 32) | b[3]
                  : (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  return to_unit(v);
}

#ifdef CONCLIQUE_RNG_AVX512

namespace {

// Eight counter blocks per pass, i.e. sixteen consecutive sites.  Counter
// words live zero-extended in 64-bit lanes so the 32x32 products come from
// one vpmuludq each.
void fill_pairs_avx512(std::uint64_t seed, std::uint64_t iteration,
                       std::uint32_t pair_begin, std::uint32_t pair_end,
                       std::uint32_t purpose, double* out) {
  std::uint32_t ks0 = static_cast<std::uint32_t>(seed);
  std::uint32_t ks1 = static_cast<std::uint32_t>(seed >> 32);
  alignas(64) std::uint64_t key0[10], key1[10];
  for (int r = 0; r < 10; ++r) {
    key0[r] = ks0;
    key1[r] = ks1;
    ks0 += kWeyl0;
    ks1 += kWeyl1;
  }

  const __m512i m0 = _mm512_set1_epi64(kMul0);
  const __m512i m1 = _mm512_set1_epi64(kMul1);
  const __m512i c0 = _mm512_set1_epi64(static_cast<std::uint32_t>(iteration));
  const __m512i c1 = _mm512_set1_epi64(static_cast<std::uint32_t>(iteration >> 32));
  const __m512i c3 = _mm512_set1_epi64(purpose);
  const __m512i step = _mm512_set1_epi64(8);
  const __m512d vhalf = _mm512_set1_pd(0.5);
  const __m512d vscale = _mm512_set1_pd(0x1p-53);
  const __m512i lo_idx = _mm512_set_epi64(11, 3, 10, 2, 9, 1, 8, 0);
  const __m512i hi_idx = _mm512_set_epi64(15, 7, 14, 6, 13, 5, 12, 4);

  __m512i ctr = _mm512_add_epi64(_mm512_set1_epi64(pair_begin),
                                 _mm512_set_epi64(7, 6, 5, 4, 3, 2, 1, 0));
  std::uint32_t p = pair_begin;
  for (; p + 8 <= pair_end; p += 8) {
    __m512i x0 = c0, x1 = c1, x2 = ctr, x3 = c3;
    // The low-word states x1/x3 keep the full products: their upper junk
    // is invisible to the 32x32 multiplies and the xors only smear it into
    // upper halves that the extraction shifts discard, so one mask at the
    // end replaces two per round.
    for (int r = 0; r < 10; ++r) {
      const __m512i p0 = _mm512_mul_epu32(x0, m0);
      const __m512i p1 = _mm512_mul_epu32(x2, m1);
      const __m512i hi0 = _mm512_srli_epi64(p0, 32);
      const __m512i hi1 = _mm512_srli_epi64(p1, 32);
      x0 = _mm512_ternarylogic_epi64(hi1, x1, _mm512_set1_epi64(static_cast<long long>(key0[r])), 0x96);
      x1 = p1;
      x2 = _mm512_ternarylogic_epi64(hi0, x3, _mm512_set1_epi64(static_cast<long long>(key1[r])), 0x96);
      x3 = p0;
    }
    // even-site double from (w0, w1), odd-site double from (w2, w3)
    const __m512i mask32 = _mm512_set1_epi64(0xFFFFFFFFu);
    const __m512i v_even = _mm512_ternarylogic_epi64(
        _mm512_slli_epi64(x0, 32), x1, mask32, 0xF8);
    const __m512i v_odd = _mm512_ternarylogic_epi64(
        _mm512_slli_epi64(x2, 32), x3, mask32, 0xF8);
    const __m512d u_even = _mm512_mul_pd(
        _mm512_add_pd(_mm512_cvtepu64_pd(_mm512_srli_epi64(v_even, 11)), vhalf),
        vscale);
    const __m512d u_odd = _mm512_mul_pd(
        _mm512_add_pd(_mm512_cvtepu64_pd(_mm512_srli_epi64(v_odd, 11)), vhalf),
        vscale);
    // interleave to site order: e0 o0 e1 o1 ...
    const __m512d lo = _mm512_permutex2var_pd(u_even, lo_idx, u_odd);
    const __m512d hi = _mm512_permutex2var_pd(u_even, hi_idx, u_odd);
    _mm512_storeu_pd(out, lo);
    _mm512_storeu_pd(out + 8, hi);
    out += 16;
    ctr = _mm512_add_epi64(ctr, step);
  }
  for (; p < pair_end; ++p) {
    const auto b = philox4x32({static_cast<std::uint32_t>(iteration),
                               static_cast<std::uint32_t>(iteration >> 32), p,
                               purpose},
                              {static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32)});
    out[0] = to_unit((static_cast<std::uint64_t>(b[0]) << 32) | b[1]);
    out[1] = to_unit((static_cast<std::uint64_t>(b[2]) << 32) | b[3]);
    out += 2;
  }
}

}  // namespace

#endif  // CONCLIQUE_RNG_AVX512

void uniform_fill(std::uint64_t seed, std::uint64_t iteration,
                  std::uint32_t site_begin, std::uint32_t site_end,
                  std::uint32_t purpose, double* out) {
  if (site_begin >= site_end) return;
  std::uint32_t s = site_begin;
  if (s & 1u) {  // leading odd site: half a block
    *out++ = uniform_at(seed, iteration, s, purpose);
    ++s;
  }
  const std::uint32_t whole_end = site_end & ~1u;
#ifdef CONCLIQUE_RNG_AVX512
  if (whole_end > s) {
    fill_pairs_avx512(seed, iteration, s >> 1, whole_end >> 1, purpose, out);
    out += whole_end - s;
    s = whole_end;
  }
#else
  for (; s < whole_end; s += 2) {
    const auto b = philox4x32({static_cast<std::uint32_t>(iteration),
                               static_cast<std::uint32_t>(iteration >> 32),
                               s >> 1, purpose},
                              {static_cast<std::uint32_t>(seed),
                               static_cast<std::uint32_t>(seed >> 32)});
    *out++ = to_unit((static_cast<std::uint64_t>(b[0]) << 32) | b[1]);
    *out++ = to_unit((static_cast<std::uint64_t>(b[2]) << 32) | b[3]);
  }
#endif
  for (; s < site_end; ++s) *out++ = uniform_at(seed, iteration, s, purpose);
}

}  // namespace conclique::rng
