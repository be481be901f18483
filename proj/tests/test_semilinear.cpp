#include "subheat/errors.hpp"
#include "subheat/numerics.hpp"
#include "subheat/parser.hpp"
#include "subheat/semilinear.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace subheat;

namespace {

VectorFieldSystem grushin1() { return parse_system_text("weights 1 2\n1 ; 0\n0 ; x1\n"); }

Field gaussian_bump(const GridSpec& g, double amp, double width) {
  Field f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto x = g.node_coords(i);
    double r2 = 0;
    for (double c : x) r2 += c * c;
    f.values[i] = amp * std::exp(-r2 / (2 * width * width));
  }
  return f;
}

}  // namespace

TEST_CASE("nonlinearity validation") {
  CHECK_THROWS_AS(Nonlinearity::power(0.9, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(Nonlinearity::power(2.0, 1.0, 2.0), ValidationError);  // A < B
  CHECK_NOTHROW(Nonlinearity::power(2.0, 2.0, 1.0));
  CHECK(Nonlinearity::zero().is_zero());

  // f(u)/u must be non-decreasing: u^2 table passes, a dip is rejected
  CHECK_NOTHROW(Nonlinearity::tabulated({0, 1, 2, 3}, {0, 1, 4, 9}));
  CHECK_THROWS_AS(Nonlinearity::tabulated({0, 1, 2, 3}, {0, 2, 2, 9}), ValidationError);
  CHECK_THROWS_AS(Nonlinearity::tabulated({0, 1}, {1, 1}), ValidationError);  // f(0) != 0

  auto tab = Nonlinearity::tabulated({0, 1, 2}, {0, 1, 4});
  CHECK(tab.eval(1.5) == doctest::Approx(2.5));  // linear interpolation
  CHECK_THROWS_AS(tab.eval(5.0), ValidationError);
}

TEST_CASE("time weight validation and evaluation") {
  CHECK_THROWS_AS(TimeWeight::constant(-1.0), ValidationError);
  CHECK_THROWS_AS(TimeWeight::power(-1.0), ValidationError);
  CHECK(TimeWeight::power(2.0).eval(3.0) == doctest::Approx(9.0));
  CHECK(TimeWeight::power(1.0).eval(0.0) == 0.0);
  CHECK(TimeWeight::constant(0.0).is_zero());
}

TEST_CASE("majorant closed form and limit diagnostic") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> vd(0.0, 10.0);
  auto f = Nonlinearity::power(2.5, 3.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double v = vd(rng);
    CHECK(majorant(f, v) == std::pow(v, 2.5));  // A cancels exactly
  }
  CHECK(majorant(f, 1.0) == doctest::Approx(1.0));

  auto tab = Nonlinearity::tabulated({0, 0.5, 1, 2, 4}, {0, 0.25, 1, 4, 16});  // u^2 sampled
  CHECK(majorant(tab, 1.0) == doctest::Approx(1.0).epsilon(0.05));

  // power alpha > 1: f_M(v)/v = v^{alpha-1} -> 0
  auto diag = majorant_limit_diagnostic(f, 1.0, 10);
  for (std::size_t i = 1; i < diag.size(); ++i) CHECK(diag[i].second < diag[i - 1].second);
  CHECK(diag.back().second < 1e-3);
}

TEST_CASE("smallness certificate: zero data, scaling, tail marker") {
  auto sys = grushin1();
  GridSpec g({-3.2, -3.2}, {3.2, 3.2}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;

  SUBCASE("zero data is trivially satisfied") {
    Field zero(g);
    auto tr = sup_trace(L, zero, 2.0, 16, cfg);
    auto cert = smallness_certificate(tr, 3.0, 1.0, 3, 0.5);
    CHECK(cert.value == 0.0);
    CHECK(cert.satisfied);
  }

  SUBCASE("quadrature part scales exactly with theta^(alpha-1), alpha = 2") {
    Field u = gaussian_bump(g, 0.25, 0.6);
    Field u2 = u;
    for (auto& v : u2.values) v *= 2.0;  // power-of-two scaling is exact in fp
    auto tr1 = sup_trace(L, u, 2.0, 32, cfg);
    auto tr2 = sup_trace(L, u2, 2.0, 32, cfg);
    auto c1 = smallness_certificate(tr1, 2.0, 1.0, 3, 0.5);
    auto c2 = smallness_certificate(tr2, 2.0, 1.0, 3, 0.5);
    CHECK(c2.value == doctest::Approx(2.0 * c1.value).epsilon(1e-14));
  }

  SUBCASE("tail is infinite at and below the critical exponent") {
    Field u = gaussian_bump(g, 0.25, 0.6);
    auto tr = sup_trace(L, u, 2.0, 32, cfg);
    auto sub = smallness_certificate(tr, 5.0 / 3.0, 1.0, 3, 0.5);
    CHECK_FALSE(sub.tail_finite);
    CHECK_FALSE(sub.satisfied);
    CHECK(std::isinf(sub.tail));
    auto super = smallness_certificate(tr, 3.0, 1.0, 3, 0.5);
    CHECK(super.tail_finite);
  }
}

TEST_CASE("barrier envelope: chi(0) = 1, A -> 0 gives chi == 1, monotone") {
  auto sys = grushin1();
  GridSpec g({-3.2, -3.2}, {3.2, 3.2}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  Field u = gaussian_bump(g, 0.2, 0.6);
  auto tr = sup_trace(L, u, 2.0, 64, cfg);

  auto env = barrier_envelope(tr, 3.0, 1.0);
  CHECK(env.chi.front() == 1.0);
  CHECK(env.finite);
  for (std::size_t i = 1; i < env.chi.size(); ++i) CHECK(env.chi[i] >= env.chi[i - 1]);
  CHECK(env.identity_residual < 1e-3);

  auto env0 = barrier_envelope(tr, 3.0, 1e-14);
  for (double c : env0.chi) CHECK(c == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("weissler iteration: f == 0 reduces to the linear semigroup exactly") {
  auto sys = grushin1();
  GridSpec g({-3.2, -3.2}, {3.2, 3.2}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  Field u = gaussian_bump(g, 0.3, 0.6);
  auto res = weissler_iterate(L, u, Nonlinearity::zero(), TimeWeight::constant(1.0), 1.0, 8, 5,
                              1e-12, cfg);
  CHECK(res.state.converged);
  for (std::size_t s = 0; s < res.solution.size(); ++s)
    CHECK(res.solution[s].values == res.linear[s].values);
  CHECK(res.state.sandwich_factor == doctest::Approx(1.0));
}

TEST_CASE("weissler iteration is monotone and sandwiched by the envelope") {
  auto sys = grushin1();
  GridSpec g({-6.4, -6.4}, {6.4, 6.4}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  Field u = gaussian_bump(g, 0.2, 0.7);
  const double alpha = 3.0, A = 1.0;
  auto res = weissler_iterate(L, u, Nonlinearity::power(alpha, A, A), TimeWeight::constant(1.0),
                              2.0, 16, 10, 1e-11, cfg);
  CHECK(res.state.converged);
  CHECK(res.state.monotonicity_residual >= -1e-13);

  auto tr = sup_trace(L, u, 2.0, 128, cfg);
  auto env = barrier_envelope(tr, alpha, A);
  REQUIRE(env.finite);
  // chi at the snapshot times: the dense grid contains them (128 = 8 * 16)
  for (std::size_t s = 0; s < res.times.size(); ++s) {
    const std::size_t j = s * 8;
    const double chi = env.chi[j];
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double lin = res.linear[s].values[i];
      const double sol = res.solution[s].values[i];
      CHECK(sol >= lin - 1e-13);
      CHECK(sol <= chi * lin + 1e-13 + 0.02 * std::max(lin, 0.0));
    }
  }
  CHECK(res.state.sandwich_factor <= env.chi.back() * 1.02);
}

TEST_CASE("blow-up simulation verdicts") {
  auto sys = grushin1();
  GridSpec g({-6.4, -6.4}, {6.4, 6.4}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;
  Field u = gaussian_bump(g, 0.5, 0.7);

  SUBCASE("linear evolution stays bounded") {
    auto rep = blow_up_simulate(L, u, Nonlinearity::zero(), TimeWeight::constant(1.0),
                                1e6 * u.sup_norm(), 5.0, cfg);
    CHECK(rep.verdict == BlowUpReport::Verdict::Bounded);
  }

  SUBCASE("subcritical power blows up in finite time") {
    auto rep = blow_up_simulate(L, u, Nonlinearity::power(1.3, 1.0, 1.0),
                                TimeWeight::constant(1.0), 1e6 * u.sup_norm(), 100.0, cfg);
    CHECK(rep.verdict == BlowUpReport::Verdict::BlowUp);
    CHECK(rep.t_blowup > 0.0);
    CHECK(rep.t_blowup < 100.0);
  }

  SUBCASE("threshold precondition") {
    CHECK_THROWS_AS(blow_up_simulate(L, u, Nonlinearity::zero(), TimeWeight::constant(1.0),
                                     u.sup_norm(), 1.0, cfg),
                    ValidationError);
  }
}

TEST_CASE("necessary-condition certificate") {
  auto sys = grushin1();
  GridSpec g({-6.4, -6.4}, {6.4, 6.4}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;

  SUBCASE("zero data is never violated") {
    Field zero(g);
    auto rep = necessary_condition_certificate(L, zero, 1.3, 1.0, geomspace(0.5, 20.0, 10), cfg);
    CHECK_FALSE(rep.violated);
    CHECK(rep.max_value == 0.0);
  }

  SUBCASE("positive constants are violated once t^(1/(alpha-1)) c crosses C_alpha") {
    Field c(g);
    std::fill(c.values.begin(), c.values.end(), 1.0);
    auto rep = necessary_condition_certificate(L, c, 1.3, 1.0, geomspace(0.5, 20.0, 12), cfg);
    CHECK(rep.violated);
    // crossing time for constant data: (C_alpha / c)^(alpha-1)
    const double expected = std::pow(rep.c_alpha, 1.3 - 1.0);
    CHECK(rep.first_violation_t <= expected * 1.6);
  }

  SUBCASE("empty time list is refused") {
    Field zero(g);
    CHECK_THROWS_AS(necessary_condition_certificate(L, zero, 1.3, 1.0, {}, cfg), ValidationError);
  }
}

TEST_CASE("divergence classifier pinned cases and closed form") {
  const int q = 3;
  auto phi1 = TimeWeight::power(1.0);

  auto d2 = divergence_classification(phi1, Nonlinearity::power(2.0, 1.0, 1.0), 1.0, q, 10.0);
  CHECK(d2.quadrature == IntegralClass::Divergent);
  REQUIRE(d2.closed_form_divergent.has_value());
  CHECK(*d2.closed_form_divergent);

  auto d3 = divergence_classification(phi1, Nonlinearity::power(3.0, 1.0, 1.0), 1.0, q, 10.0);
  CHECK(d3.quadrature == IntegralClass::Convergent);
  CHECK_FALSE(*d3.closed_form_divergent);

  // logarithmic boundary: phi == 1, alpha = 1 + 2/q gives integrand ~ 1/tau
  auto dlog = divergence_classification(TimeWeight::constant(1.0),
                                        Nonlinearity::power(1.0 + 2.0 / q, 1.0, 1.0), 1.0, q,
                                        10.0);
  CHECK(dlog.quadrature == IntegralClass::Divergent);

  // zero weight: integral vanishes
  auto d0 = divergence_classification(TimeWeight::constant(0.0),
                                      Nonlinearity::power(2.0, 1.0, 1.0), 1.0, q, 10.0);
  CHECK(d0.verdict() == IntegralClass::Convergent);
  CHECK(d0.partials.back() == 0.0);

  CHECK_THROWS_AS(
      divergence_classification(phi1, Nonlinearity::power(2.0, 1.0, 1.0), 1.0, q, 5.0),
      ValidationError);
}

TEST_CASE("closed form and quadrature agree off the neutral band") {
  const int q = 3;
  for (double sigma : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double boundary = 1.0 + 2.0 * (1.0 + sigma) / q;
    for (double alpha : {1.6, 2.0, 7.0 / 3.0, 2.8, 3.2}) {
      if (std::fabs(alpha - boundary) <= 0.05) continue;
      auto rep = divergence_classification(sigma == 0.0 ? TimeWeight::constant(1.0)
                                                        : TimeWeight::power(sigma),
                                           Nonlinearity::power(alpha, 1.0, 1.0), 1.0, q, 10.0);
      REQUIRE(rep.closed_form_divergent.has_value());
      const auto expected =
          *rep.closed_form_divergent ? IntegralClass::Divergent : IntegralClass::Convergent;
      CHECK(rep.quadrature == expected);
    }
  }
}

TEST_CASE("gaussian domination") {
  auto sys = grushin1();
  GridSpec g({-6.4, -6.4}, {6.4, 6.4}, {33, 33});
  auto L = assemble_operator(sys, g);
  SolverConfig cfg;

  SUBCASE("theta = 0 holds trivially") {
    auto rep = gaussian_domination_check(L, 0.0, 0.2, Nonlinearity::power(3.0, 1.0, 1.0), 3, 1.0,
                                         8, cfg);
    CHECK(rep.holds);
    CHECK(rep.worst_ratio == 0.0);
  }

  SUBCASE("f == 0 keeps the ratio pinned at theta") {
    auto rep = gaussian_domination_check(L, 0.05, 0.2, Nonlinearity::zero(), 3, 1.0, 8, cfg);
    CHECK(rep.holds);
    CHECK(rep.worst_ratio == doctest::Approx(0.05).epsilon(1e-6));
  }

  SUBCASE("small theta with alpha = 3 holds with finite ratio") {
    auto rep = gaussian_domination_check(L, 0.05, 0.2, Nonlinearity::power(3.0, 1.0, 1.0), 3, 1.5,
                                         12, cfg);
    CHECK(rep.holds);
    CHECK(rep.worst_ratio > 0.0);
    CHECK(rep.worst_ratio < 0.1);
  }

  SUBCASE("subcritical alpha is refused") {
    CHECK_THROWS_AS(gaussian_domination_check(L, 0.05, 0.2, Nonlinearity::power(1.3, 1.0, 1.0), 3,
                                              1.0, 8, cfg),
                    ValidationError);
  }
}
