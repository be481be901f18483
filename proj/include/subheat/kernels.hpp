#ifndef SUBHEAT_KERNELS_HPP
#define SUBHEAT_KERNELS_HPP

#include <cstddef>

namespace subheat::kernels {

// Flat-array arithmetic kernels behind the PDE hot loops. Two backends:
// a scalar reference and an AVX2 variant picked at runtime. Elementwise
// kernels produce bitwise-identical results across backends (no FMA, same
// per-element operation order); reductions may differ by accumulation
// order and are equivalence-tested to a tolerance instead.
struct Ops {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] *= a
  void (*scal)(double a, double* y, std::size_t n);
  // y[i] += w[i]*(up[i] - u[i]) - wm[i]*(u[i] - um[i])
  void (*flux_interior)(double* y, const double* u, const double* um, const double* up,
                        const double* w, const double* wm, std::size_t n);
  // y[i] += w[i]*(un[i] - u[i])
  void (*flux_edge)(double* y, const double* u, const double* un, const double* w, std::size_t n);
  // y[i] = max(x[i], 0)^alpha, alpha > 0
  void (*pow_elem)(double* y, const double* x, double alpha, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*max_val)(const double* x, std::size_t n);
  double (*min_val)(const double* x, std::size_t n);
  const char* name;
};

// Backend chosen at startup: AVX2 when the CPU supports it, else scalar.
// Environment variable SUBHEAT_KERNELS=scalar|avx2 forces a backend.
const Ops& ops();

const Ops& scalar_ops();
// nullptr when the binary lacks the AVX2 translation unit or the CPU lacks AVX2.
const Ops* avx2_ops();

namespace detail {

// x^a for x > 0 via exp2(a * log2 x). Both backends run this exact operation
// sequence so results match bitwise. Relative error ~1e-12 over the field
// value range; x <= 0 maps to 0 (fields are nonnegative up to round-off).
//
// log2(m), m in [sqrt(1/2), sqrt(2)]: atanh series in r = (m-1)/(m+1).
inline constexpr double kLog2InvAtanh = 2.8853900817779268;  // 2/ln(2)
// 2^f on [-0.5, 0.5]: Taylor in f*ln2, degree 11.
inline constexpr double kExp2C[12] = {
    1.0,
    6.9314718055994531e-01, 2.4022650695910072e-01, 5.5504108664821580e-02,
    9.6181291076284772e-03, 1.3333558146428443e-03, 1.5403530393381610e-04,
    1.5252733804059841e-05, 1.3215486790144309e-06, 1.0178086009239700e-07,
    7.0549116208011233e-09, 4.4455382718708116e-10};

}  // namespace detail

}  // namespace subheat::kernels

#endif
