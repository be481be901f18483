#ifndef SUBHEAT_GRID_HPP
#define SUBHEAT_GRID_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subheat {

/// Uniform rectangular grid over a box, >= 3 nodes per axis.
struct GridSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> points;

  GridSpec() = default;
  GridSpec(std::vector<double> lo, std::vector<double> up, std::vector<int> pts)
      : lower(std::move(lo)), upper(std::move(up)), points(std::move(pts)) {
    if (lower.size() != upper.size() || lower.size() != points.size() || lower.empty())
      throw std::invalid_argument("grid: inconsistent box/points arity");
    for (std::size_t d = 0; d < lower.size(); ++d) {
      if (!(lower[d] < upper[d])) throw std::invalid_argument("grid: lower must be < upper");
      if (points[d] < 3) throw std::invalid_argument("grid: need at least 3 points per axis");
    }
  }

  int dim() const { return static_cast<int>(points.size()); }

  double h(int d) const { return (upper[d] - lower[d]) / (points[d] - 1); }

  double max_h() const {
    double m = 0;
    for (int d = 0; d < dim(); ++d)
      if (h(d) > m) m = h(d);
    return m;
  }

  std::size_t node_count() const {
    std::size_t n = 1;
    for (int p : points) n *= static_cast<std::size_t>(p);
    return n;
  }

  double cell_volume() const {
    double v = 1;
    for (int d = 0; d < dim(); ++d) v *= h(d);
    return v;
  }

  /// Stride of axis d in the flattened row-major layout (last axis fastest).
  std::size_t stride(int d) const {
    std::size_t s = 1;
    for (int k = d + 1; k < dim(); ++k) s *= static_cast<std::size_t>(points[k]);
    return s;
  }

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (int d = 0; d < dim(); ++d) f = f * static_cast<std::size_t>(points[d]) + idx[d];
    return f;
  }

  std::vector<int> unflat(std::size_t f) const {
    std::vector<int> idx(dim());
    for (int d = dim() - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(f % points[d]);
      f /= points[d];
    }
    return idx;
  }

  double coord(int d, int i) const { return lower[d] + h(d) * i; }

  std::vector<double> node_coords(std::size_t f) const {
    auto idx = unflat(f);
    std::vector<double> x(dim());
    for (int d = 0; d < dim(); ++d) x[d] = coord(d, idx[d]);
    return x;
  }

  bool inside(const std::vector<double>& x) const {
    for (int d = 0; d < dim(); ++d)
      if (x[d] < lower[d] - 0.5 * h(d) || x[d] > upper[d] + 0.5 * h(d)) return false;
    return true;
  }

  /// Nearest-node rounding; throws if the point lies outside the box.
  std::size_t snap(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("snap: arity mismatch");
    if (!inside(x)) throw std::invalid_argument("snap: point outside box");
    std::vector<int> idx(dim());
    for (int d = 0; d < dim(); ++d) {
      int i = static_cast<int>((x[d] - lower[d]) / h(d) + 0.5);
      if (i < 0) i = 0;
      if (i >= points[d]) i = points[d] - 1;
      idx[d] = i;
    }
    return flat(idx);
  }

  bool on_boundary(std::size_t f) const {
    auto idx = unflat(f);
    for (int d = 0; d < dim(); ++d)
      if (idx[d] == 0 || idx[d] == points[d] - 1) return true;
    return false;
  }

  bool operator==(const GridSpec& o) const {
    return lower == o.lower && upper == o.upper && points == o.points;
  }
};

/// Scalar field sampled on a grid, stored flat row-major.
struct Field {
  GridSpec grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), values(g.node_count(), 0.0) {}
  Field(const GridSpec& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.node_count()) throw std::invalid_argument("field size mismatch");
  }

  std::size_t size() const { return values.size(); }
  double* data() { return values.data(); }
  const double* data() const { return values.data(); }

  double mass() const;       // sum * cell volume
  double l1_norm() const;    // sum |.| * cell volume
  double sup_norm() const;   // max |.| over all nodes
  /// Sup norm excluding `margin` outermost layers per axis.
  double sup_interior(int margin = 2) const;
  double min_value() const;

  /// Fraction of total mass inside the centred box scaled by `scale` per axis.
  double mass_fraction_in_scaled_box(double scale) const;
};

}  // namespace subheat

#endif
