#include "subheat/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>

namespace subheat::kernels {
namespace {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void flux_interior(double* y, const double* u, const double* um, const double* up,
                   const double* w, const double* wm, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] += w[i] * (up[i] - u[i]) - wm[i] * (u[i] - um[i]);
}

void flux_edge(double* y, const double* u, const double* un, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += w[i] * (un[i] - u[i]);
}

inline double bits_to_double(std::uint64_t b) {
  double d;
  std::memcpy(&d, &b, sizeof d);
  return d;
}

inline std::uint64_t double_to_bits(double d) {
  std::uint64_t b;
  std::memcpy(&b, &d, sizeof b);
  return b;
}

double pow_positive(double x, double alpha) {
  // x = 2^k * m with m in [sqrt(1/2), sqrt(2))
  std::uint64_t bits = double_to_bits(x);
  std::int64_t k = static_cast<std::int64_t>((bits >> 52) & 0x7FF) - 1023;
  double m = bits_to_double((bits & 0x000FFFFFFFFFFFFFull) | 0x3FF0000000000000ull);
  if (m > 1.4142135623730951) {
    m = m * 0.5;
    k += 1;
  }
  double r = (m - 1.0) / (m + 1.0);
  double r2 = r * r;
  double s = 1.0 / 13.0;
  s = s * r2 + 1.0 / 11.0;
  s = s * r2 + 1.0 / 9.0;
  s = s * r2 + 1.0 / 7.0;
  s = s * r2 + 1.0 / 5.0;
  s = s * r2 + 1.0 / 3.0;
  s = s * r2 + 1.0;
  double log2x = static_cast<double>(k) + detail::kLog2InvAtanh * r * s;

  double y = alpha * log2x;
  if (y >= 1024.0) return HUGE_VAL;
  if (y <= -1074.0) return 0.0;
  double kr = std::nearbyint(y);
  double f = y - kr;
  double p = detail::kExp2C[11];
  for (int i = 10; i >= 0; --i) p = p * f + detail::kExp2C[i];
  // 2^kr applied as two exact power-of-two factors so the subnormal range
  // needs no separate branch (kr in [-1074, 1024], halves stay normal)
  double s1 = std::floor(kr * 0.5);
  double s2 = kr - s1;
  std::uint64_t e1 = static_cast<std::uint64_t>(static_cast<std::int64_t>(s1) + 1023) << 52;
  std::uint64_t e2 = static_cast<std::uint64_t>(static_cast<std::int64_t>(s2) + 1023) << 52;
  return p * bits_to_double(e1) * bits_to_double(e2);
}

void pow_elem(double* y, const double* x, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    y[i] = x[i] >= 2.2250738585072014e-308 ? pow_positive(x[i], alpha) : 0.0;
}

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_abs(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

double max_val(const double* x, std::size_t n) {
  double m = -HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

double min_val(const double* x, std::size_t n) {
  double m = HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] < m) m = x[i];
  return m;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{axpy,    scal,    flux_interior, flux_edge, pow_elem,
                         sum,     dot,     max_abs,       max_val,   min_val,
                         "scalar"};
  return table;
}

}  // namespace subheat::kernels
