#ifndef SUBHEAT_REACH_GRAPH_HPP
#define SUBHEAT_REACH_GRAPH_HPP

#include "subheat/grid.hpp"
#include "subheat/vector_field.hpp"

#include <limits>
#include <vector>

namespace subheat {

/// Discretization of the admissible-curve family behind the control distance:
/// nodes are grid points, edges realize short flows of sum_j a_j X_j for the
/// unit-max-norm control stencil (singles +-e_i and all diagonal pairs), cost
/// step * |a|_inf = step. The graph is symmetrized so the induced metric is
/// symmetric exactly.
class ReachGraph {
 public:
  ReachGraph(GridSpec grid, double step);

  const GridSpec& grid() const { return grid_; }
  double step() const { return step_; }
  std::size_t edge_count() const { return heads_.size(); }

  /// Reported metric resolution: 2 max_h + 2 step.
  double distance_resolution() const { return 2.0 * grid_.max_h() + 2.0 * step_; }

  void add_edge(std::size_t a, std::size_t b, double cost);
  void finalize();  // sort, dedupe (min cost), build CSR

  /// Shortest-path distances from a node to every node; unreachable = +inf.
  std::vector<double> distances_from(std::size_t src) const;

  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }

 private:
  GridSpec grid_;
  double step_;
  bool finalized_ = false;
  std::vector<std::pair<std::size_t, std::pair<std::size_t, double>>> staging_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> heads_;
  std::vector<double> costs_;
};

/// Midpoint flows of every stencil control from every node, snapped to the
/// nearest node; out-of-box and stationary flows dropped. Throws if the graph
/// ends up with no edges at all.
ReachGraph build_reach_graph(const VectorFieldSystem& sys, const GridSpec& grid, double step);

/// Graph metric between the snapped points; +inf if unreachable.
double cc_distance(const ReachGraph& graph, const std::vector<double>& x,
                   const std::vector<double>& y);

/// (#nodes with d <= r) * cell volume. Throws if the ball touches the box
/// boundary (a boundary node with d <= r exists).
double ball_volume(const ReachGraph& graph, const std::vector<double>& center, double r);

struct VolumeGrowth {
  double exponent;
  std::vector<double> radii;
  std::vector<double> volumes;
};

/// Least-squares slope of log volume against log radius; >= 4 increasing
/// radii, every ball unclipped.
VolumeGrowth volume_growth_exponent(const ReachGraph& graph, const std::vector<double>& center,
                                    const std::vector<double>& radii);

}  // namespace subheat

#endif
