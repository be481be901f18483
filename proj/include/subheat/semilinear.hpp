#ifndef SUBHEAT_SEMILINEAR_HPP
#define SUBHEAT_SEMILINEAR_HPP

#include "subheat/heat.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace subheat {

/// Nonlinearity f(u). Power kind: f(u) = A u^alpha with the lower-bound
/// constant B (B u^alpha <= f(u) <= A u^alpha). Tabulated kind: piecewise
/// linear through samples, validated at load: f(0) = 0, f >= 0, and
/// u -> f(u)/u non-decreasing on the sampled range.
class Nonlinearity {
 public:
  enum class Kind { Power, Tabulated };

  static Nonlinearity power(double alpha, double a, double b);
  static Nonlinearity tabulated(std::vector<double> u, std::vector<double> f);
  static Nonlinearity zero();  // f == 0 (A = B = 0)

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Power && a_ == 0.0; }
  double alpha() const { return alpha_; }
  double upper_const() const { return a_; }
  double lower_const() const { return b_; }

  double eval(double u) const;
  /// out[i] = f(max(u[i], 0)); vectorized for the power kind.
  void eval_field(const double* u, double* out, std::size_t n) const;

  double table_max() const;

 private:
  Kind kind_ = Kind::Power;
  double alpha_ = 2.0, a_ = 1.0, b_ = 1.0;
  std::vector<double> us_, fs_;
};

/// Time weight phi(t) >= 0, locally integrable.
class TimeWeight {
 public:
  enum class Kind { Constant, Power, Tabulated };

  static TimeWeight constant(double c);
  static TimeWeight power(double sigma);  // phi(t) = t^sigma, sigma > -1
  static TimeWeight tabulated(std::vector<double> t, std::vector<double> phi);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  bool is_constant_one() const { return kind_ == Kind::Constant && c_ == 1.0; }
  bool is_zero() const { return kind_ == Kind::Constant && c_ == 0.0; }

  double eval(double t) const;

 private:
  Kind kind_ = Kind::Constant;
  double c_ = 1.0;
  double sigma_ = 0.0;
  std::vector<double> ts_, ps_;
};

/// Majorant f_M(v) = sup_{a in (0,1)} f(a v)/f(a). Closed form v^alpha for the
/// power kind; geometric a-grid lower bound for tabulated f (a_min = 1e-3).
double majorant(const Nonlinearity& f, double v, int alpha_grid_size = 64);

/// Diagnostic for the small-v limit f_M(v)/v -> 0: values along a decreasing
/// geometric v sequence.
std::vector<std::pair<double, double>> majorant_limit_diagnostic(const Nonlinearity& f, double v0,
                                                                 int count);

/// Sup-norm trace of the linear evolution with boundary-contamination window.
struct SupTrace {
  std::vector<double> t;
  std::vector<double> sup;          // interior sup norm (2-cell margin)
  std::vector<double> mass_fraction;
  int usable = 0;                   // prefix length with fraction >= floor
};
SupTrace sup_trace(const OperatorStencil& L, const Field& u0, double horizon, int samples,
                   const SolverConfig& cfg, double mass_floor = 0.95);

/// Smallness certificate for global existence: trapezoid quadrature of
/// sup^{alpha-1} over the usable window plus an analytic power-law tail bound
/// fitted from the measured decay. The tail is finite only for
/// alpha > 1 + 2/q.
struct SmallnessCertificate {
  double value = 0.0;        // quadrature over [0, window_end]
  double tail = 0.0;         // +inf marker when alpha <= 1 + 2/q
  bool tail_finite = false;
  double bound = 0.0;        // 1/(A(alpha-1))
  bool satisfied = false;
  double window_end = 0.0;
  double fitted_k = 0.0;     // max of sup * t^{q/2} over [t_split, window_end]
};
SmallnessCertificate smallness_certificate(const SupTrace& trace, double alpha, double a, int q,
                                           double t_split);

/// Barrier envelope chi(t) = (1 - A(alpha-1) I(t))^{-1/(alpha-1)} on the trace
/// grid, plus the quadrature residual of the integral identity
/// chi = 1 + A int sup^{alpha-1} chi^alpha.
struct BarrierEnvelope {
  std::vector<double> t;
  std::vector<double> chi;
  bool finite = true;           // false if the envelope blows inside the span
  double identity_residual = 0.0;  // max relative residual over finite samples
};
BarrierEnvelope barrier_envelope(const SupTrace& trace, double alpha, double a);

struct MildIterationState {
  int iterations = 0;
  double final_increment = 0.0;
  double monotonicity_residual = 0.0;  // most negative pointwise h_{k+1}-h_k
  double sandwich_factor = 1.0;        // sup_t ||h||_inf / ||e^{tL}u0||_inf
  bool converged = false;
  bool inconclusive = false;           // increments grew instead of shrinking
};

struct WeisslerResult {
  std::vector<double> times;
  std::vector<Field> solution;  // final iterate h_k at each snapshot
  std::vector<Field> linear;    // e^{tL}u0 at each snapshot
  MildIterationState state;
};

/// Monotone mild-solution iteration h_{k+1} = e^{tL}u0 + int_0^t
/// e^{(t-s)L} phi(s) f(h_k(s)) ds, trapezoid in s on the snapshot grid
/// (evaluated by the exact one-pass recurrence of the trapezoid sum).
WeisslerResult weissler_iterate(const OperatorStencil& L, const Field& u0, const Nonlinearity& f,
                                const TimeWeight& phi, double horizon, int snapshots, int k_max,
                                double tol, const SolverConfig& cfg);

struct BlowUpReport {
  enum class Verdict { BlowUp, Bounded, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  double t_blowup = std::nan("");
  double horizon = 0.0;
  double threshold = 0.0;
  double sup_final = 0.0;
  std::vector<std::pair<double, double>> sup_samples;  // (t, sup)
  std::string note;
};

/// Direct forward-Euler reaction-diffusion stepping with adaptive halving of
/// dt whenever a step would change the solution by more than 20% in sup norm.
/// Threshold crossing is evidence of (not proof of) finite-time blow-up.
BlowUpReport blow_up_simulate(const OperatorStencil& L, const Field& u0, const Nonlinearity& f,
                              const TimeWeight& phi, double threshold, double horizon,
                              const SolverConfig& cfg, int trace_samples = 256);

struct NecessaryConditionReport {
  double max_value = 0.0;  // max over sampled times of t^{1/(alpha-1)} sup
  double c_alpha = 0.0;    // (B(alpha-1))^{-1/(alpha-1)}
  bool violated = false;
  double first_violation_t = std::nan("");
  std::vector<std::pair<double, double>> samples;
};

/// Quantity bounded by C_alpha for every global mild supersolution; exceeding
/// it certifies that no global supersolution with this data exists.
NecessaryConditionReport necessary_condition_certificate(const OperatorStencil& L, const Field& v0,
                                                         double alpha, double b,
                                                         const std::vector<double>& times,
                                                         const SolverConfig& cfg);

enum class IntegralClass { Divergent, Convergent, Inconclusive };
const char* to_string(IntegralClass c);

struct DivergenceReport {
  IntegralClass quadrature = IntegralClass::Inconclusive;
  double growth_slope = 0.0;  // fitted log-increment slope over log-cutoff
  double r2 = 1.0;
  std::vector<double> cutoffs;
  std::vector<double> partials;
  std::optional<bool> closed_form_divergent;  // both power kind only
  IntegralClass verdict() const;              // closed form when available
};

/// Classifies int_1^inf phi(t) t^{q/2} f(omega t^{-q/2}) dt by partial
/// integrals at geometrically growing cutoffs. Increments behave like
/// T^{s+1} for power data; the fitted slope >= -0.02 marks divergence
/// (slope 0 is the logarithmic case), <= -0.05 convergence.
DivergenceReport divergence_classification(const TimeWeight& phi, const Nonlinearity& f,
                                           double omega, int q, double horizon,
                                           int n_cutoffs = 10);

struct DominationReport {
  bool holds = false;
  double worst_ratio = 0.0;
  double trend = 0.0;  // relative drift of the ratio over the horizon
  std::vector<std::pair<double, double>> ratios;  // (t, max u/Gamma(t+rho))
};

/// For data theta * Gamma(0,0;rho,.), checks that the mild solution stays
/// dominated by a multiple of the time-shifted kernel. Refuses (throws
/// ValidationError) if the smallness certificate fails for this data.
DominationReport gaussian_domination_check(const OperatorStencil& L, double theta, double rho_time,
                                           const Nonlinearity& f, int q, double horizon,
                                           int snapshots, const SolverConfig& cfg);

}  // namespace subheat

#endif
