#include "subheat/errors.hpp"
#include "subheat/heat.hpp"
#include "subheat/numerics.hpp"
#include "subheat/parser.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace subheat;

namespace {

VectorFieldSystem euclid2() { return parse_system_text("weights 1 1\n1 ; 0\n0 ; 1\n"); }
VectorFieldSystem grushin1() { return parse_system_text("weights 1 2\n1 ; 0\n0 ; x1\n"); }

Field from_fn(const GridSpec& g, double (*fn)(const std::vector<double>&)) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = fn(g.node_coords(i));
  return f;
}

double dot_cellvol(const Field& a, const Field& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
  return s * a.grid.cell_volume();
}

}  // namespace

TEST_CASE("stencil reproduces L on quadratics") {
  GridSpec g({-1.0, -1.0}, {1.0, 1.0}, {21, 21});

  SUBCASE("euclidean: L(x^2 + y^2) = 4 exactly at interior nodes") {
    auto L = assemble_operator(euclid2(), g);
    auto u = from_fn(g, [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; });
    Field out(g);
    L.apply(u, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (g.on_boundary(i)) continue;
      CHECK(out.values[i] == doctest::Approx(4.0).epsilon(1e-10));
    }
  }

  SUBCASE("grushin: L(x2^2) = 2 x1^2 exactly at interior nodes") {
    auto L = assemble_operator(grushin1(), g);
    auto u = from_fn(g, [](const std::vector<double>& x) { return x[1] * x[1]; });
    Field out(g);
    L.apply(u, out);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (g.on_boundary(i)) continue;
      const double x1 = g.node_coords(i)[0];
      CHECK(out.values[i] == doctest::Approx(2.0 * x1 * x1).epsilon(1e-10));
    }
  }

  SUBCASE("constants are annihilated everywhere") {
    auto L = assemble_operator(grushin1(), g);
    Field u(g);
    std::fill(u.values.begin(), u.values.end(), 3.7);
    Field out(g);
    L.apply(u, out);
    for (double v : out.values) CHECK(std::fabs(v) < 1e-12);
  }
}

TEST_CASE("multi-axis fields are rejected with a diagnostic") {
  auto rotated = parse_system_text("weights 1 1\n1 ; 1\n1 ; 0\n");
  GridSpec g({-1.0, -1.0}, {1.0, 1.0}, {9, 9});
  CHECK_THROWS_AS(assemble_operator(rotated, g), ValidationError);
}

TEST_CASE("grids need at least 3 nodes per axis") {
  CHECK_THROWS(GridSpec({-1.0, -1.0}, {1.0, 1.0}, {2, 9}));
  CHECK_THROWS(GridSpec({-1.0}, {-2.0}, {9}));  // empty box
}

TEST_CASE("operator is self-adjoint and dissipative in the cell-volume product") {
  GridSpec g({-1.0, -1.0}, {1.0, 1.0}, {17, 17});
  auto L = assemble_operator(grushin1(), g);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1, 1);
  Field u(g), v(g), Lu(g), Lv(g);
  for (int rep = 0; rep < 5; ++rep) {
    for (auto& x : u.values) x = dist(rng);
    for (auto& x : v.values) x = dist(rng);
    L.apply(u, Lu);
    L.apply(v, Lv);
    CHECK(dot_cellvol(Lu, v) == doctest::Approx(dot_cellvol(u, Lv)).epsilon(1e-11));
    CHECK(dot_cellvol(Lu, u) <= 1e-12);
  }
}

TEST_CASE("evolution preserves constants, mass, positivity, ordering") {
  GridSpec g({-2.0, -2.0}, {2.0, 2.0}, {33, 33});
  auto L = assemble_operator(grushin1(), g);
  SolverConfig cfg;

  SUBCASE("constant data stays constant") {
    Field u(g);
    std::fill(u.values.begin(), u.values.end(), 1.0);
    auto snaps = evolve(L, u, cfg, {0.5});
    for (double v : snaps[0].second.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("interior data conserves discrete mass exactly") {
    Field u = mollified_delta(g, {0.3, -0.2});
    auto snaps = evolve(L, u, cfg, {0.2});
    CHECK(snaps[0].second.mass() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("positivity and comparison") {
    Field u = mollified_delta(g, {0.0, 0.0});
    Field v = u;
    for (auto& x : v.values) x *= 2.0;  // v0 >= u0
    auto su = evolve(L, u, cfg, {0.1});
    auto sv = evolve(L, v, cfg, {0.1});
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(su[0].second.values[i] >= -1e-14);
      CHECK(sv[0].second.values[i] >= su[0].second.values[i] - 1e-14);
    }
  }
}

TEST_CASE("explicit semigroup property is exact for matching step sequences") {
  GridSpec g({-2.0, -2.0}, {2.0, 2.0}, {25, 25});
  auto L = assemble_operator(euclid2(), g);
  SolverConfig cfg;
  cfg.dt = 0.4 * L.stable_dt();
  Field u = mollified_delta(g, {0.0, 0.0});

  Evolver ev(L, cfg);
  Field a = u;
  ev.advance(a, 512 * cfg.dt);  // one span

  Field b = u;
  ev.advance(b, 256 * cfg.dt);
  ev.advance(b, 256 * cfg.dt);  // split span, same step sequence
  CHECK(a.values == b.values);
}

TEST_CASE("explicit instability is detected") {
  GridSpec g({-1.0}, {1.0}, {33});
  auto sys = parse_system_text("weights 1\n1\n");
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  cfg.dt = 3.0 * L.stable_dt();
  CHECK_THROWS_AS(Evolver(L, cfg), NumericalError);
}

TEST_CASE("1d gaussian matches the closed form") {
  GridSpec g({-8.0}, {8.0}, {257});
  auto sys = parse_system_text("weights 1\n1\n");
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  const double s0 = 0.25;
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g.node_coords(i)[0];
    u.values[i] = std::exp(-x * x / (2 * s0)) / std::sqrt(2 * M_PI * s0);
  }
  auto snaps = evolve(L, u, cfg, {0.5, 1.0});
  for (auto& [t, f] : snaps) {
    const double st = s0 + 2 * t;
    double worst = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = g.node_coords(i)[0];
      const double exact = std::exp(-x * x / (2 * st)) / std::sqrt(2 * M_PI * st);
      worst = std::max(worst, std::fabs(f.values[i] - exact));
    }
    CHECK(worst / (1.0 / std::sqrt(2 * M_PI * (s0 + 2 * t))) < 0.01);
  }
}

TEST_CASE("implicit euler agrees with explicit at matched tolerance") {
  GridSpec g({-2.0, -2.0}, {2.0, 2.0}, {25, 25});
  auto L = assemble_operator(grushin1(), g);
  Field u = mollified_delta(g, {0.0, 0.0});

  SolverConfig ex;
  auto se = evolve(L, u, ex, {0.2});

  SolverConfig im;
  im.scheme = SolverConfig::Scheme::ImplicitEuler;
  im.dt = 0.4 * L.stable_dt();  // same step size: O(dt) schemes stay close
  auto si = evolve(L, u, im, {0.2});
  double diff = 0, scale = se[0].second.sup_norm();
  for (std::size_t i = 0; i < u.size(); ++i)
    diff = std::max(diff, std::fabs(se[0].second.values[i] - si[0].second.values[i]));
  CHECK(diff / scale < 0.02);
  CHECK(si[0].second.mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kernel mass, symmetry, reproduction at test scale") {
  GridSpec g({-2.0, -1.4}, {2.0, 1.4}, {65, 65});
  auto L = assemble_operator(grushin1(), g);
  SolverConfig cfg;

  Field k = heat_kernel(L, {0.0, 0.0}, 0.15, cfg);
  CHECK(k.mass() == doctest::Approx(1.0).epsilon(5e-3));

  CHECK(kernel_symmetry_residual(L, {0.25, 0.1}, {-0.3, -0.15}, 0.2, cfg) < 0.01);
  CHECK(kernel_reproduction_residual(L, {0.0, 0.0}, 0.12, 0.1, cfg) < 0.02);

  CHECK_THROWS_AS(heat_kernel(L, {0.0, 0.0}, 1e-9, cfg), NumericalError);
}

TEST_CASE("gaussian-bound shape: log kernel decreases along rays") {
  GridSpec g({-2.0, -1.4}, {2.0, 1.4}, {65, 65});
  auto L = assemble_operator(grushin1(), g);
  SolverConfig cfg;
  Field k = heat_kernel(L, {0.0, 0.0}, 0.2, cfg);
  // along +x1 from the center the kernel is monotone decreasing
  auto c = g.unflat(g.snap({0.0, 0.0}));
  double prev = HUGE_VAL;
  for (int i = c[0]; i < g.points[0] - 2; ++i) {
    auto idx = c;
    idx[0] = i;
    const double v = k.values[g.flat(idx)];
    CHECK(v <= prev * (1 + 1e-9));
    prev = v;
  }
}

TEST_CASE("1d decay slope -1/2 and conserved-norm slope 0") {
  auto sys = parse_system_text("weights 1\n1\n");
  GridSpec g({-12.0}, {12.0}, {257});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  Field u = mollified_delta(g, {0.0});
  auto fit = decay_exponent(L, u, geomspace(0.5, 5.0, 9), cfg);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.1));

  // L1 norm of nonnegative data is conserved: slope of log ||.||_1 is 0
  auto snaps = evolve(L, u, cfg, geomspace(0.5, 5.0, 5));
  for (auto& [t, f] : snaps) CHECK(f.l1_norm() == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(decay_exponent(L, u, geomspace(200.0, 400.0, 5), cfg), NumericalError);
}
