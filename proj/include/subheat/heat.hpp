#ifndef SUBHEAT_HEAT_HPP
#define SUBHEAT_HEAT_HPP

#include "subheat/grid.hpp"
#include "subheat/vector_field.hpp"

#include <utility>
#include <vector>

namespace subheat {

/// Discrete L = sum_i -D_i^T D_i for single-axis fields X_i = c_i(x) d/dx_{a_i},
/// coefficients squared at staggered midpoints, homogeneous Neumann closure.
/// Symmetric negative semidefinite in the cell-volume inner product; constants
/// are annihilated and discrete mass is conserved exactly.
class OperatorStencil {
 public:
  OperatorStencil(GridSpec grid, std::vector<std::vector<double>> edge_weights);

  const GridSpec& grid() const { return grid_; }

  /// out = L u. Arrays are full grid fields.
  void apply(const double* u, double* out) const;
  void apply(const Field& u, Field& out) const;

  /// Largest row sum of |off-diagonal| entries; explicit Euler is stable and
  /// positivity-preserving for dt <= 1/max_row (Gershgorin).
  double max_row() const { return max_row_; }
  double stable_dt() const { return 1.0 / max_row_; }

  const std::vector<double>& edge_weights(int axis) const { return edge_w_[axis]; }

 private:
  GridSpec grid_;
  std::vector<std::vector<double>> edge_w_;  // [axis], extent points[axis]-1 along axis
  double max_row_ = 0.0;
};

/// Builds the stencil. Every field must act along a single axis (exactly one
/// nonzero coefficient); anything else is rejected with a diagnostic.
OperatorStencil assemble_operator(const VectorFieldSystem& sys, const GridSpec& grid);

struct SolverConfig {
  enum class Scheme { ExplicitEuler, ImplicitEuler };
  Scheme scheme = Scheme::ExplicitEuler;
  double dt = 0.0;            // 0: derive from cfl_fraction * stable_dt
  double cfl_fraction = 0.4;  // explicit default
  double cg_tol = 1e-12;      // implicit solve, relative residual
  int cg_max_iter = 20000;

  double resolve_dt(const OperatorStencil& L) const;
};

/// Time stepper with a fixed step; spans are advanced by whole steps
/// (round(span/dt)), so equal spans replay identical step sequences.
class Evolver {
 public:
  Evolver(const OperatorStencil& L, const SolverConfig& cfg);

  double dt() const { return dt_; }
  /// Advances u in place; returns the time actually advanced (multiple of dt).
  double advance(Field& u, double span) const;
  void step(Field& u) const;

 private:
  const OperatorStencil& L_;
  SolverConfig cfg_;
  double dt_;
  mutable Field scratch_;
  mutable Field cg_r_, cg_p_, cg_ap_;

  void step_explicit(Field& u) const;
  void step_implicit(Field& u) const;
};

/// Snapshots of e^{tL}u0 at the requested times, each snapped to the nearest
/// whole step; returned times are the actual ones.
std::vector<std::pair<double, Field>> evolve(const OperatorStencil& L, const Field& u0,
                                             const SolverConfig& cfg,
                                             const std::vector<double>& times);

/// Normalized tent bump at y: per-axis weights (1/2, 1, 1/2) on node offsets
/// (-1, 0, 1), product across axes, unit discrete mass.
Field mollified_delta(const GridSpec& grid, const std::vector<double>& y);

/// Heat kernel column Gamma(0, y; t, .): mollified delta evolved to time t.
Field heat_kernel(const OperatorStencil& L, const std::vector<double>& y, double t,
                  const SolverConfig& cfg);

/// Normalized tent smoothing (the mollifier applied as an operator).
Field mollify(const Field& u);

/// |Gamma(0,x;t,y) - Gamma(0,y;t,x)| / max(|.|,|.|), kernels from mollified
/// deltas sampled pointwise.
double kernel_symmetry_residual(const OperatorStencil& L, const std::vector<double>& x,
                                const std::vector<double>& y, double t, const SolverConfig& cfg);

/// L1 residual of the two-step reproduction of Gamma(0,y;t+s,.) from
/// Gamma(0,y;s,.): evolve the mollified snapshot for the remaining time and
/// compare (relative L1).
double kernel_reproduction_residual(const OperatorStencil& L, const std::vector<double>& y,
                                    double s, double t, const SolverConfig& cfg);

struct DecaySample {
  double t;
  double sup;
  double mass_fraction;  // mass inside the 0.9-scaled box
};

struct DecayFit {
  double slope = 0.0;
  double r2 = 0.0;
  std::vector<DecaySample> samples;
  int used = 0;  // samples inside the pre-contamination window
};

/// Least-squares slope of log sup_interior(e^{tL}u0) against log t over the
/// samples whose 0.9-box mass fraction stays >= mass_floor (the documented
/// boundary-contamination heuristic). Throws NumericalError if fewer than
/// four samples qualify.
DecayFit decay_exponent(const OperatorStencil& L, const Field& u0, const std::vector<double>& times,
                        const SolverConfig& cfg, double mass_floor = 0.95);

}  // namespace subheat

#endif
