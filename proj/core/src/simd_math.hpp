#pragma once

// Internal vector math used by the compiled update kernels.  Not installed.
//
// The vector transcendentals here trade bit-compatibility with libm for
// throughput: results agree with the scalar routines to ~1 ulp of relative
// error, except the central normal quantile, whose wider-range minimax fit
// is good to ~1e-10 relative; the tests pin both bounds down.  Builds
// without AVX-512 fall back to the scalar code paths in plan.cpp and never
// include the intrinsics below.

#if defined(__AVX512F__) && defined(__AVX512DQ__)
#define CONCLIQUE_SIMD_AVX512 1

#include <immintrin.h>

namespace conclique::simd {

// exp(x) for x in [-708.39, 0].  Callers clamp; inputs below the cutoff
// would need subnormal scaling the bit trick does not provide.
inline __m512d vexp_nonpos(__m512d x) {
  const __m512d log2e = _mm512_set1_pd(1.4426950408889634074);
  const __m512d ln2_hi = _mm512_set1_pd(6.93147180369123816490e-01);
  const __m512d ln2_lo = _mm512_set1_pd(1.90821492927058770002e-10);
  x = _mm512_max_pd(x, _mm512_set1_pd(-708.0));
  const __m512d k = _mm512_roundscale_pd(_mm512_mul_pd(x, log2e), 0x08);
  __m512d r = _mm512_fnmadd_pd(k, ln2_hi, x);
  r = _mm512_fnmadd_pd(k, ln2_lo, r);
  // exp(r) on [-ln2/2, ln2/2], Horner in 1/k!
  __m512d p = _mm512_set1_pd(2.505210838544172e-8);  // 1/11!
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(2.755731922398589e-7));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(2.7557319223985893e-6));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(2.48015873015873e-5));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.984126984126984e-4));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.3888888888888889e-3));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(8.333333333333333e-3));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(4.1666666666666664e-2));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.6666666666666666e-1));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(0.5));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0));
  p = _mm512_fmadd_pd(p, r, _mm512_set1_pd(1.0));
  const __m512i ki = _mm512_cvtpd_epi64(k);
  const __m512i scale =
      _mm512_slli_epi64(_mm512_add_epi64(ki, _mm512_set1_epi64(1023)), 52);
  return _mm512_mul_pd(p, _mm512_castsi512_pd(scale));
}

// P(Y=0) = 1 - logistic(a), the inverse-CDF draw threshold (draw 1 iff
// u > threshold).  Computed directly so no cancellation happens near p = 1,
// with the division replaced by a refined reciprocal: two Newton steps on
// rcp14 give full double precision at a fraction of vdivpd's latency.
inline __m512d vlogistic_complement(__m512d a) {
  const __m512d zero = _mm512_setzero_pd();
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d neg_abs = _mm512_min_pd(a, _mm512_sub_pd(zero, a));
  const __m512d t = vexp_nonpos(neg_abs);
  const __m512d denom = _mm512_add_pd(one, t);
  const __mmask8 nonneg = _mm512_cmp_pd_mask(a, zero, _CMP_GE_OQ);
  const __m512d num = _mm512_mask_blend_pd(nonneg, one, t);
  __m512d r = _mm512_rcp14_pd(denom);
  r = _mm512_fmadd_pd(r, _mm512_fnmadd_pd(denom, r, one), r);
  r = _mm512_fmadd_pd(r, _mm512_fnmadd_pd(denom, r, one), r);
  return _mm512_mul_pd(num, r);
}

// Normal quantile, central branch: z for the lanes with |u - 0.5| <= 0.48,
// and the returned mask flags the tail lanes (u outside [0.02, 0.98]) the
// caller must finish through the tail branches.  The rational in t = q^2
// is a minimax fit with relative error under 8e-11 across the branch; the
// wide central range keeps the tail queue short.
inline __mmask8 vnormal_quantile_central(__m512d u, __m512d* z) {
  const __m512d q = _mm512_sub_pd(u, _mm512_set1_pd(0.5));
  const __m512d t = _mm512_mul_pd(q, q);
  __m512d num = _mm512_set1_pd(7.3637463389190629e1);
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(-5.3998905874195532e2));
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(8.9902634987706597e2));
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(-6.3368966927472866e2));
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(2.2056971429695110e2));
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(-3.7572920962471216e1));
  num = _mm512_fmadd_pd(num, t, _mm512_set1_pd(2.5066282747437350e0));
  __m512d den = _mm512_set1_pd(1.1288404767999035e2);
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(-4.3117704121585655e2));
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(5.4911205452915363e2));
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(-3.2944734912631986e2));
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(1.0248518837270014e2));
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(-1.6036624296548808e1));
  den = _mm512_fmadd_pd(den, t, _mm512_set1_pd(1.0));
  // num/den via reciprocal refinement: two Newton steps put the quotient
  // well inside the fit's own error, and the fmadd chain pipelines across
  // blocks where the divider unit would not.
  const __m512d one = _mm512_set1_pd(1.0);
  const __m512d qn = _mm512_mul_pd(q, num);
  __m512d rec = _mm512_rcp14_pd(den);
  rec = _mm512_fmadd_pd(rec, _mm512_fnmadd_pd(den, rec, one), rec);
  rec = _mm512_fmadd_pd(rec, _mm512_fnmadd_pd(den, rec, one), rec);
  *z = _mm512_mul_pd(qn, rec);
  const __m512d abs_q = _mm512_abs_pd(q);
  return _mm512_cmp_pd_mask(abs_q, _mm512_set1_pd(0.48), _CMP_GT_OQ);
}

// Stride-two deinterleave: elements 0,2,...,14 of the 16 doubles at p.
inline __m512d load_even(const double* p) {
  const __m512i idx = _mm512_set_epi64(14, 12, 10, 8, 6, 4, 2, 0);
  return _mm512_permutex2var_pd(_mm512_loadu_pd(p), idx, _mm512_loadu_pd(p + 8));
}

// log(x) for normal positive finite x, ~1 ulp.
inline __m512d vlog(__m512d x) {
  const __m512i bits = _mm512_castpd_si512(x);
  const __m512i exp_raw = _mm512_srli_epi64(bits, 52);
  __m512i e = _mm512_sub_epi64(exp_raw, _mm512_set1_epi64(1023));
  const __m512i mant_mask = _mm512_set1_epi64(0x000FFFFFFFFFFFFFll);
  const __m512i one_bits = _mm512_set1_epi64(0x3FF0000000000000ll);
  __m512d m = _mm512_castsi512_pd(
      _mm512_or_epi64(_mm512_and_epi64(bits, mant_mask), one_bits));
  // fold m into [sqrt(1/2), sqrt(2))
  const __mmask8 big =
      _mm512_cmp_pd_mask(m, _mm512_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm512_mask_mul_pd(m, big, m, _mm512_set1_pd(0.5));
  e = _mm512_mask_add_epi64(e, big, e, _mm512_set1_epi64(1));
  const __m512d ed = _mm512_cvtepi64_pd(e);
  const __m512d s = _mm512_div_pd(_mm512_sub_pd(m, _mm512_set1_pd(1.0)),
                                  _mm512_add_pd(m, _mm512_set1_pd(1.0)));
  const __m512d s2 = _mm512_mul_pd(s, s);
  // atanh series: log(m) = 2s * sum s^(2k)/(2k+1)
  __m512d q = _mm512_set1_pd(1.0 / 15.0);
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 13.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 11.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 9.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 7.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 5.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0 / 3.0));
  q = _mm512_fmadd_pd(q, s2, _mm512_set1_pd(1.0));
  const __m512d log_m = _mm512_mul_pd(_mm512_add_pd(s, s), q);
  const __m512d ln2_hi = _mm512_set1_pd(6.93147180369123816490e-01);
  const __m512d ln2_lo = _mm512_set1_pd(1.90821492927058770002e-10);
  return _mm512_add_pd(_mm512_fmadd_pd(ed, ln2_lo, log_m),
                       _mm512_mul_pd(ed, ln2_hi));
}

}  // namespace conclique::simd

#endif  // AVX512
