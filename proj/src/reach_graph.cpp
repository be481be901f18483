#include "subheat/reach_graph.hpp"

#include "subheat/errors.hpp"
#include "subheat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace subheat {

ReachGraph::ReachGraph(GridSpec grid, double step) : grid_(std::move(grid)), step_(step) {
  if (step <= 0) throw ValidationError("reach graph: step must be positive");
}

void ReachGraph::add_edge(std::size_t a, std::size_t b, double cost) {
  staging_.push_back({a, {b, cost}});
  staging_.push_back({b, {a, cost}});
}

void ReachGraph::finalize() {
  // lexicographic sort puts duplicates of (node, head) adjacent, cheapest first
  std::sort(staging_.begin(), staging_.end());
  const std::size_t n = grid_.node_count();
  offsets_.assign(n + 1, 0);
  heads_.clear();
  costs_.clear();
  std::size_t i = 0;
  for (std::size_t node = 0; node < n; ++node) {
    while (i < staging_.size() && staging_[i].first == node) {
      const std::size_t head = staging_[i].second.first;
      heads_.push_back(head);
      costs_.push_back(staging_[i].second.second);
      while (i < staging_.size() && staging_[i].first == node &&
             staging_[i].second.first == head)
        ++i;
    }
    offsets_[node + 1] = heads_.size();
  }
  staging_.clear();
  staging_.shrink_to_fit();
  finalized_ = true;
}

std::vector<double> ReachGraph::distances_from(std::size_t src) const {
  if (!finalized_) throw ValidationError("reach graph not finalized");
  const std::size_t n = grid_.node_count();
  std::vector<double> dist(n, infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
      const double nd = d + costs_[e];
      if (nd < dist[heads_[e]]) {
        dist[heads_[e]] = nd;
        pq.push({nd, heads_[e]});
      }
    }
  }
  return dist;
}

ReachGraph build_reach_graph(const VectorFieldSystem& sys, const GridSpec& grid, double step) {
  if (sys.dim() != grid.dim())
    throw ValidationError("build_reach_graph: system/grid dimension mismatch");
  const int m = sys.num_fields();
  const int dim = grid.dim();

  // control stencil: +-e_i, then +-e_i +- e_j for i < j; |a|_inf = 1 for all
  std::vector<std::vector<double>> controls;
  for (int i = 0; i < m; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> a(m, 0.0);
      a[i] = s;
      controls.push_back(a);
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          std::vector<double> a(m, 0.0);
          a[i] = si;
          a[j] = sj;
          controls.push_back(a);
        }

  ReachGraph graph(grid, step);
  const std::size_t n = grid.node_count();
  std::vector<double> x(dim), k1(dim), mid(dim), tgt(dim);
  for (const auto& a : controls) {
    auto velocity = [&](const std::vector<double>& p, std::vector<double>& v) {
      std::fill(v.begin(), v.end(), 0.0);
      for (int i = 0; i < m; ++i) {
        if (a[i] == 0.0) continue;
        for (int d = 0; d < dim; ++d) {
          const Polynomial& c = sys.field(i).coeff(d);
          if (!c.is_zero()) v[d] += a[i] * c.eval(p);
        }
      }
    };
    for (std::size_t node = 0; node < n; ++node) {
      auto idx = grid.unflat(node);
      for (int d = 0; d < dim; ++d) x[d] = grid.coord(d, idx[d]);
      velocity(x, k1);
      for (int d = 0; d < dim; ++d) mid[d] = x[d] + 0.5 * step * k1[d];
      velocity(mid, tgt);
      for (int d = 0; d < dim; ++d) tgt[d] = x[d] + step * tgt[d];
      if (!grid.inside(tgt)) continue;
      const std::size_t q = grid.snap(tgt);
      if (q == node) continue;  // stationary flow at this resolution
      graph.add_edge(node, q, step);
    }
  }
  graph.finalize();
  if (graph.edge_count() == 0)
    throw ValidationError("build_reach_graph: every flow left the box or stalled (empty graph)");
  return graph;
}

double cc_distance(const ReachGraph& graph, const std::vector<double>& x,
                   const std::vector<double>& y) {
  const std::size_t a = graph.grid().snap(x);
  const std::size_t b = graph.grid().snap(y);
  if (a == b) return 0.0;
  return graph.distances_from(a)[b];
}

namespace {

double count_volume(const ReachGraph& graph, const std::vector<double>& dist, double r) {
  const GridSpec& g = graph.grid();
  std::size_t count = 0;
  for (std::size_t f = 0; f < dist.size(); ++f) {
    if (dist[f] <= r) {
      if (g.on_boundary(f))
        throw ValidationError("ball_volume: ball of radius " + std::to_string(r) +
                              " is clipped by the box boundary");
      ++count;
    }
  }
  return static_cast<double>(count) * g.cell_volume();
}

}  // namespace

double ball_volume(const ReachGraph& graph, const std::vector<double>& center, double r) {
  if (r <= 0) throw ValidationError("ball_volume: radius must be positive");
  auto dist = graph.distances_from(graph.grid().snap(center));
  return count_volume(graph, dist, r);
}

VolumeGrowth volume_growth_exponent(const ReachGraph& graph, const std::vector<double>& center,
                                    const std::vector<double>& radii) {
  if (radii.size() < 4)
    throw ValidationError("volume_growth_exponent: need at least 4 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw ValidationError("volume_growth_exponent: radii must be increasing");
  auto dist = graph.distances_from(graph.grid().snap(center));
  VolumeGrowth out;
  out.radii = radii;
  for (double r : radii) out.volumes.push_back(count_volume(graph, dist, r));
  out.exponent = fit_loglog(out.radii, out.volumes).slope;
  return out;
}

}  // namespace subheat
