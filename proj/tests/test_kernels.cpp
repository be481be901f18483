#include "subheat/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace subheat;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo = -3.0,
                               double hi = 3.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar/avx2 elementwise kernels agree bitwise") {
  const kernels::Ops& sc = kernels::scalar_ops();
  const kernels::Ops* vx = kernels::avx2_ops();
  if (vx == nullptr) {
    MESSAGE("AVX2 backend unavailable on this host; skipping equivalence checks");
    return;
  }
  std::mt19937 rng(12345);
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 64u, 257u, 1000u}) {
    auto x = random_vec(rng, n);
    auto w = random_vec(rng, n, 0.0, 2.0);
    auto wm = random_vec(rng, n, 0.0, 2.0);
    auto um = random_vec(rng, n);
    auto up = random_vec(rng, n);
    auto y0 = random_vec(rng, n);

    auto ya = y0, yb = y0;
    sc.axpy(1.7, x.data(), ya.data(), n);
    vx->axpy(1.7, x.data(), yb.data(), n);
    CHECK(ya == yb);

    ya = y0;
    yb = y0;
    sc.scal(-0.37, ya.data(), n);
    vx->scal(-0.37, yb.data(), n);
    CHECK(ya == yb);

    ya = y0;
    yb = y0;
    sc.flux_interior(ya.data(), x.data(), um.data(), up.data(), w.data(), wm.data(), n);
    vx->flux_interior(yb.data(), x.data(), um.data(), up.data(), w.data(), wm.data(), n);
    CHECK(ya == yb);

    ya = y0;
    yb = y0;
    sc.flux_edge(ya.data(), x.data(), up.data(), w.data(), n);
    vx->flux_edge(yb.data(), x.data(), up.data(), w.data(), n);
    CHECK(ya == yb);

    // pow over a wide positive range, plus zeros and negatives
    std::vector<double> px(n);
    std::uniform_real_distribution<double> logu(-25.0, 10.0);
    for (auto& v : px) v = std::exp(logu(rng));
    if (n > 2) {
      px[0] = 0.0;
      px[1] = -1.5;
    }
    for (double alpha : {1.3, 2.0, 2.5, 10.0 / 3.0}) {
      std::vector<double> pa(n), pb(n);
      sc.pow_elem(pa.data(), px.data(), alpha, n);
      vx->pow_elem(pb.data(), px.data(), alpha, n);
      CHECK(pa == pb);
    }
  }
}

TEST_CASE("scalar/avx2 reductions agree to rounding") {
  const kernels::Ops& sc = kernels::scalar_ops();
  const kernels::Ops* vx = kernels::avx2_ops();
  if (vx == nullptr) return;
  std::mt19937 rng(99);
  for (std::size_t n : {5u, 127u, 4096u}) {
    auto x = random_vec(rng, n);
    auto y = random_vec(rng, n);
    CHECK(sc.sum(x.data(), n) == doctest::Approx(vx->sum(x.data(), n)).epsilon(1e-12));
    CHECK(sc.dot(x.data(), y.data(), n) ==
          doctest::Approx(vx->dot(x.data(), y.data(), n)).epsilon(1e-12));
    CHECK(sc.max_abs(x.data(), n) == vx->max_abs(x.data(), n));
    CHECK(sc.max_val(x.data(), n) == vx->max_val(x.data(), n));
    CHECK(sc.min_val(x.data(), n) == vx->min_val(x.data(), n));
  }
}

TEST_CASE("pow_elem matches std::pow") {
  for (const kernels::Ops* ops : {&kernels::scalar_ops(), kernels::avx2_ops()}) {
    if (ops == nullptr) continue;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> logu(-30.0, 13.0);
    std::uniform_real_distribution<double> ad(1.05, 4.0);
    std::vector<double> x(512), y(512);
    for (auto& v : x) v = std::exp(logu(rng));
    for (int rep = 0; rep < 8; ++rep) {
      const double alpha = ad(rng);
      ops->pow_elem(y.data(), x.data(), alpha, x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double ref = std::pow(x[i], alpha);
        CHECK(y[i] == doctest::Approx(ref).epsilon(5e-12));
      }
    }
    // domain edges
    std::vector<double> edge{0.0, -2.0, 1.0, 4.0};
    std::vector<double> out(4);
    ops->pow_elem(out.data(), edge.data(), 2.0, 4);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(1.0));
    CHECK(out[3] == doctest::Approx(16.0));
  }
}

TEST_CASE("dispatch honours the environment override") {
  // ops() must return one of the two tables
  const kernels::Ops& chosen = kernels::ops();
  const bool is_scalar = &chosen == &kernels::scalar_ops();
  const bool is_avx2 = kernels::avx2_ops() != nullptr && &chosen == kernels::avx2_ops();
  CHECK((is_scalar || is_avx2));
}
