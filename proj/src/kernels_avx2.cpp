// AVX2 kernel variants. Elementwise kernels mirror the scalar reference
// operation-for-operation (separate mul+add, never fused) so results are
// bitwise identical; reductions keep 4 lane accumulators and differ from
// the scalar sum only by association.
#include "subheat/kernels.hpp"

#ifdef SUBHEAT_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstdint>

namespace subheat::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, vx));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), va));
  for (; i < n; ++i) y[i] *= a;
}

void flux_interior(double* y, const double* u, const double* um, const double* up,
                   const double* w, const double* wm, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vu = _mm256_loadu_pd(u + i);
    __m256d a = _mm256_mul_pd(_mm256_loadu_pd(w + i),
                              _mm256_sub_pd(_mm256_loadu_pd(up + i), vu));
    __m256d b = _mm256_mul_pd(_mm256_loadu_pd(wm + i),
                              _mm256_sub_pd(vu, _mm256_loadu_pd(um + i)));
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_sub_pd(a, b)));
  }
  for (; i < n; ++i)
    y[i] += w[i] * (up[i] - u[i]) - wm[i] * (u[i] - um[i]);
}

void flux_edge(double* y, const double* u, const double* un, const double* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(un + i), _mm256_loadu_pd(u + i));
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(_mm256_loadu_pd(w + i), d)));
  }
  for (; i < n; ++i) y[i] += w[i] * (un[i] - u[i]);
}

inline __m256d exp2_scale(__m256d s) {
  // 2^s for integer-valued s with s+1023 in (0, 2046)
  __m128i e32 = _mm256_cvtpd_epi32(_mm256_add_pd(s, _mm256_set1_pd(1023.0)));
  __m256i e64 = _mm256_cvtepi32_epi64(e32);
  return _mm256_castsi256_pd(_mm256_slli_epi64(e64, 52));
}

__m256d pow_positive(__m256d x, __m256d valpha) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256i bits = _mm256_castpd_si256(x);
  __m256i expf = _mm256_srli_epi64(bits, 52);
  // exponent field to double via int64->double trick (values < 2^51)
  __m256i magic = _mm256_set1_epi64x(0x4330000000000000ll);  // 2^52
  __m256d expd = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(expf, magic)),
      _mm256_castsi256_pd(magic));
  __m256d k = _mm256_sub_pd(expd, _mm256_set1_pd(1023.0));
  __m256i mbits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
      _mm256_set1_epi64x(0x3FF0000000000000ll));
  __m256d m = _mm256_castsi256_pd(mbits);
  __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  k = _mm256_blendv_pd(k, _mm256_add_pd(k, one), big);

  __m256d r = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  __m256d r2 = _mm256_mul_pd(r, r);
  __m256d s = _mm256_set1_pd(1.0 / 13.0);
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), _mm256_set1_pd(1.0 / 11.0));
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), _mm256_set1_pd(1.0 / 9.0));
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), _mm256_set1_pd(1.0 / 7.0));
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), _mm256_set1_pd(1.0 / 5.0));
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), _mm256_set1_pd(1.0 / 3.0));
  s = _mm256_add_pd(_mm256_mul_pd(s, r2), one);
  __m256d log2x = _mm256_add_pd(
      k, _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(detail::kLog2InvAtanh), r), s));

  __m256d y = _mm256_mul_pd(valpha, log2x);
  __m256d hi = _mm256_cmp_pd(y, _mm256_set1_pd(1024.0), _CMP_GE_OQ);
  __m256d lo = _mm256_cmp_pd(y, _mm256_set1_pd(-1074.0), _CMP_LE_OQ);
  // clamp so the scale construction stays valid; blended away afterwards
  y = _mm256_max_pd(_mm256_min_pd(y, _mm256_set1_pd(1023.0)), _mm256_set1_pd(-1073.0));

  __m256d kr = _mm256_round_pd(y, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d f = _mm256_sub_pd(y, kr);
  __m256d p = _mm256_set1_pd(detail::kExp2C[11]);
  for (int i = 10; i >= 0; --i)
    p = _mm256_add_pd(_mm256_mul_pd(p, f), _mm256_set1_pd(detail::kExp2C[i]));
  __m256d s1 = _mm256_floor_pd(_mm256_mul_pd(kr, _mm256_set1_pd(0.5)));
  __m256d s2 = _mm256_sub_pd(kr, s1);
  __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, exp2_scale(s1)), exp2_scale(s2));
  res = _mm256_blendv_pd(res, _mm256_set1_pd(HUGE_VAL), hi);
  res = _mm256_andnot_pd(lo, res);
  return res;
}

void pow_elem(double* y, const double* x, double alpha, std::size_t n) {
  const __m256d valpha = _mm256_set1_pd(alpha);
  const __m256d tiny = _mm256_set1_pd(2.2250738585072014e-308);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d ok = _mm256_cmp_pd(vx, tiny, _CMP_GE_OQ);
    __m256d r = pow_positive(vx, valpha);
    _mm256_storeu_pd(y + i, _mm256_and_pd(ok, r));
  }
  if (i < n) {
    const Ops& sc = scalar_ops();
    sc.pow_elem(y + i, x + i, alpha, n - i);
  }
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, _mm256_loadu_pd(x + i)));
  double m = 0.0;
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  for (double v : lanes)
    if (v > m) m = v;
  for (; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double max_val(const double* x, std::size_t n) {
  double m = -HUGE_VAL;
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    for (double v : lanes)
      if (v > m) m = v;
  }
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double min_val(const double* x, std::size_t n) {
  double m = HUGE_VAL;
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_loadu_pd(x);
    for (i = 4; i + 4 <= n; i += 4) acc = _mm256_min_pd(acc, _mm256_loadu_pd(x + i));
    double lanes[4];
    _mm256_storeu_pd(lanes, acc);
    for (double v : lanes)
      if (v < m) m = v;
  }
  for (; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops table{axpy,    scal,    flux_interior, flux_edge, pow_elem,
                         sum,     dot,     max_abs,       max_val,   min_val,
                         "avx2"};
  return &table;
}

}  // namespace subheat::kernels

#endif  // SUBHEAT_HAVE_AVX2
