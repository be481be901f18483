#include "subheat/heat.hpp"

#include "subheat/errors.hpp"
#include "subheat/kernels.hpp"
#include "subheat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subheat {

namespace {
const kernels::Ops& K() { return kernels::ops(); }
}  // namespace

// ---- Field norms ----

double Field::mass() const { return K().sum(data(), size()) * grid.cell_volume(); }

double Field::l1_norm() const {
  double s = 0.0;
  for (double v : values) s += std::fabs(v);
  return s * grid.cell_volume();
}

double Field::sup_norm() const { return K().max_abs(data(), size()); }

double Field::min_value() const { return K().min_val(data(), size()); }

namespace {

/// Visits every contiguous run along the last axis whose outer indices lie in
/// [margin, points-1-margin]; fn(offset, length) with the run clipped by margin.
template <typename Fn>
void for_interior_rows(const GridSpec& g, int margin, Fn&& fn) {
  const int dim = g.dim();
  const int last = dim - 1;
  const std::size_t row_len = static_cast<std::size_t>(g.points[last]);
  const std::size_t inner_len = row_len - 2 * margin;
  if (static_cast<long>(inner_len) <= 0) return;
  std::vector<int> idx(dim, margin);
  while (true) {
    std::size_t base = 0;
    for (int d = 0; d < last; ++d) base = base * g.points[d] + idx[d];
    fn(base * row_len + margin, inner_len);
    int d = last - 1;
    for (; d >= 0; --d) {
      if (++idx[d] <= g.points[d] - 1 - margin) break;
      idx[d] = margin;
    }
    if (d < 0) break;
  }
}

}  // namespace

double Field::sup_interior(int margin) const {
  if (grid.dim() == 0) return 0.0;
  for (int d = 0; d < grid.dim(); ++d)
    if (grid.points[d] <= 2 * margin) return sup_norm();
  double m = 0.0;
  for_interior_rows(grid, margin, [&](std::size_t off, std::size_t len) {
    double v = K().max_abs(data() + off, len);
    if (v > m) m = v;
  });
  return m;
}

double Field::mass_fraction_in_scaled_box(double scale) const {
  const int dim = grid.dim();
  // per-axis inclusive index range of the scaled centred box
  std::vector<int> lo(dim), hi(dim);
  for (int d = 0; d < dim; ++d) {
    const double c = 0.5 * (grid.lower[d] + grid.upper[d]);
    const double half = 0.5 * (grid.upper[d] - grid.lower[d]) * scale;
    lo[d] = static_cast<int>(std::ceil((c - half - grid.lower[d]) / grid.h(d) - 1e-12));
    hi[d] = static_cast<int>(std::floor((c + half - grid.lower[d]) / grid.h(d) + 1e-12));
    lo[d] = std::max(lo[d], 0);
    hi[d] = std::min(hi[d], grid.points[d] - 1);
  }
  const double total = K().sum(data(), size());
  if (total == 0.0) return 1.0;
  const int last = dim - 1;
  double inside = 0.0;
  std::vector<int> idx(dim, 0);
  for (int d = 0; d < last; ++d) idx[d] = lo[d];
  const std::size_t row_len = static_cast<std::size_t>(grid.points[last]);
  while (true) {
    std::size_t base = 0;
    for (int d = 0; d < last; ++d) base = base * grid.points[d] + idx[d];
    inside += K().sum(data() + base * row_len + lo[last], hi[last] - lo[last] + 1);
    int d = last - 1;
    for (; d >= 0; --d) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
    }
    if (d < 0) break;
  }
  return inside / total;
}

// ---- OperatorStencil ----

OperatorStencil::OperatorStencil(GridSpec grid, std::vector<std::vector<double>> edge_weights)
    : grid_(std::move(grid)), edge_w_(std::move(edge_weights)) {
  // edge_w_[d] is full grid size; the slice idx_d == points[d]-1 must be zero.
  const std::size_t n = grid_.node_count();
  std::vector<double> row(n, 0.0);
  for (int d = 0; d < grid_.dim(); ++d) {
    const std::size_t s = grid_.stride(d);
    const std::size_t block = s * static_cast<std::size_t>(grid_.points[d]);
    for (std::size_t f = 0; f < n; ++f) {
      const double w = edge_w_[d][f];
      if (w != 0.0) {
        row[f] += w;
        row[f + s] += w;
      }
    }
    (void)block;
  }
  max_row_ = *std::max_element(row.begin(), row.end());
}

void OperatorStencil::apply(const double* u, double* out) const {
  const std::size_t n = grid_.node_count();
  std::fill(out, out + n, 0.0);
  const auto& k = K();
  for (int d = 0; d < grid_.dim(); ++d) {
    const std::size_t s = grid_.stride(d);
    const int pd = grid_.points[d];
    const std::size_t block = s * static_cast<std::size_t>(pd);
    const double* w = edge_w_[d].data();
    for (std::size_t base = 0; base < n; base += block) {
      // low edge (no inward-minus term)
      k.flux_edge(out + base, u + base, u + base + s, w + base, s);
      // interior: one contiguous run across the whole block
      if (pd > 2)
        k.flux_interior(out + base + s, u + base + s, u + base, u + base + 2 * s, w + base + s,
                        w + base, (static_cast<std::size_t>(pd) - 2) * s);
      // high edge
      const std::size_t f0 = base + (static_cast<std::size_t>(pd) - 1) * s;
      k.flux_edge(out + f0, u + f0, u + f0 - s, w + f0 - s, s);
    }
  }
}

void OperatorStencil::apply(const Field& u, Field& out) const {
  if (!(u.grid == grid_)) throw ValidationError("operator/field grid mismatch");
  if (out.values.size() != u.values.size()) out = Field(grid_);
  apply(u.data(), out.data());
}

OperatorStencil assemble_operator(const VectorFieldSystem& sys, const GridSpec& grid) {
  if (sys.dim() != grid.dim())
    throw ValidationError("assemble_operator: system/grid dimension mismatch");
  const std::size_t n = grid.node_count();
  std::vector<std::vector<double>> edge_w(grid.dim(), std::vector<double>(n, 0.0));

  for (int i = 0; i < sys.num_fields(); ++i) {
    const VectorField& f = sys.field(i);
    int axis = -1;
    for (int j = 0; j < f.dim(); ++j) {
      if (f.coeff(j).is_zero()) continue;
      if (axis >= 0) {
        std::ostringstream msg;
        msg << "assemble_operator: field " << (i + 1) << " (" << f.str()
            << ") acts along more than one axis; the divergence-form stencil "
               "supports fields of the form c(x) d/dx_j only";
        throw ValidationError(msg.str());
      }
      axis = j;
    }
    if (axis < 0) continue;  // zero field contributes nothing
    const Polynomial& c = f.coeff(axis);
    const double h = grid.h(axis);
    const std::size_t stride = grid.stride(axis);
    std::vector<double> x(grid.dim());
    for (std::size_t node = 0; node < n; ++node) {
      auto idx = grid.unflat(node);
      if (idx[axis] >= grid.points[axis] - 1) continue;
      for (int d = 0; d < grid.dim(); ++d) x[d] = grid.coord(d, idx[d]);
      x[axis] += 0.5 * h;  // staggered midpoint
      const double cm = c.eval(x);
      edge_w[axis][node] += cm * cm / (h * h);
    }
    (void)stride;
  }
  return OperatorStencil(grid, std::move(edge_w));
}

// ---- time stepping ----

double SolverConfig::resolve_dt(const OperatorStencil& L) const {
  if (dt > 0.0) return dt;
  return cfl_fraction * L.stable_dt();
}

Evolver::Evolver(const OperatorStencil& L, const SolverConfig& cfg)
    : L_(L), cfg_(cfg), dt_(cfg.resolve_dt(L)), scratch_(L.grid()) {
  if (cfg_.scheme == SolverConfig::Scheme::ExplicitEuler && dt_ > L.stable_dt() * (1 + 1e-12)) {
    std::ostringstream msg;
    msg << "explicit scheme unstable: dt=" << dt_ << " exceeds bound " << L.stable_dt();
    throw NumericalError(msg.str());
  }
  if (cfg_.scheme == SolverConfig::Scheme::ImplicitEuler) {
    cg_r_ = Field(L.grid());
    cg_p_ = Field(L.grid());
    cg_ap_ = Field(L.grid());
  }
}

void Evolver::step_explicit(Field& u) const {
  L_.apply(u, scratch_);
  K().axpy(dt_, scratch_.data(), u.data(), u.size());
}

void Evolver::step_implicit(Field& u) const {
  // CG on (I - dt L) x = b, start from x = b
  const std::size_t n = u.size();
  const auto& k = K();
  Field& r = cg_r_;
  Field& p = cg_p_;
  Field& ap = cg_ap_;
  auto matvec = [&](const Field& x, Field& y) {
    L_.apply(x, y);
    k.scal(-dt_, y.data(), n);
    k.axpy(1.0, x.data(), y.data(), n);
  };
  Field x = u;
  matvec(x, ap);
  for (std::size_t i = 0; i < n; ++i) r.values[i] = u.values[i] - ap.values[i];
  p = r;
  double rr = k.dot(r.data(), r.data(), n);
  const double b2 = k.dot(u.data(), u.data(), n);
  const double stop = cfg_.cg_tol * cfg_.cg_tol * (b2 > 0 ? b2 : 1.0);
  int it = 0;
  while (rr > stop) {
    if (++it > cfg_.cg_max_iter)
      throw NumericalError("implicit Euler: CG failed to converge");
    matvec(p, ap);
    const double alpha = rr / k.dot(p.data(), ap.data(), n);
    k.axpy(alpha, p.data(), x.data(), n);
    k.axpy(-alpha, ap.data(), r.data(), n);
    const double rr2 = k.dot(r.data(), r.data(), n);
    const double beta = rr2 / rr;
    rr = rr2;
    for (std::size_t i = 0; i < n; ++i) p.values[i] = r.values[i] + beta * p.values[i];
  }
  u = x;
}

void Evolver::step(Field& u) const {
  if (cfg_.scheme == SolverConfig::Scheme::ExplicitEuler)
    step_explicit(u);
  else
    step_implicit(u);
}

double Evolver::advance(Field& u, double span) const {
  long steps = std::lround(span / dt_);
  for (long i = 0; i < steps; ++i) step(u);
  return static_cast<double>(steps) * dt_;
}

std::vector<std::pair<double, Field>> evolve(const OperatorStencil& L, const Field& u0,
                                             const SolverConfig& cfg,
                                             const std::vector<double>& times) {
  if (!(u0.grid == L.grid())) throw ValidationError("evolve: field/operator grid mismatch");
  Evolver ev(L, cfg);
  std::vector<std::pair<double, Field>> out;
  Field u = u0;
  long done = 0;
  for (double t : times) {
    long target = std::lround(t / ev.dt());
    if (target < done) throw ValidationError("evolve: snapshot times must be non-decreasing");
    for (; done < target; ++done) ev.step(u);
    out.emplace_back(static_cast<double>(done) * ev.dt(), u);
  }
  return out;
}

Field mollified_delta(const GridSpec& grid, const std::vector<double>& y) {
  Field f(grid);
  const std::size_t center = grid.snap(y);
  auto cidx = grid.unflat(center);
  const int dim = grid.dim();
  std::vector<int> off(dim, -1);
  while (true) {
    std::vector<int> idx(dim);
    double w = 1.0;
    bool ok = true;
    for (int d = 0; d < dim; ++d) {
      idx[d] = cidx[d] + off[d];
      if (idx[d] < 0 || idx[d] >= grid.points[d]) {
        ok = false;
        break;
      }
      w *= (off[d] == 0) ? 1.0 : 0.5;
    }
    if (ok) f.values[grid.flat(idx)] += w;
    int d = dim - 1;
    for (; d >= 0; --d) {
      if (++off[d] <= 1) break;
      off[d] = -1;
    }
    if (d < 0) break;
  }
  const double m = f.mass();
  K().scal(1.0 / m, f.data(), f.size());
  return f;
}

Field heat_kernel(const OperatorStencil& L, const std::vector<double>& y, double t,
                  const SolverConfig& cfg) {
  Evolver ev(L, cfg);
  if (t < ev.dt()) throw NumericalError("heat_kernel: t smaller than one time step");
  Field u = mollified_delta(L.grid(), y);
  ev.advance(u, t);
  return u;
}

Field mollify(const Field& u) {
  // separable (1/4, 1/2, 1/4) convolution, boundary weights renormalized
  Field cur = u;
  const GridSpec& g = u.grid;
  Field next(g);
  for (int d = 0; d < g.dim(); ++d) {
    const std::size_t s = g.stride(d);
    const int pd = g.points[d];
    const std::size_t n = g.node_count();
    for (std::size_t f = 0; f < n; ++f) {
      const int id = static_cast<int>((f / s) % static_cast<std::size_t>(pd));
      double acc = 0.5 * cur.values[f];
      double wsum = 0.5;
      if (id > 0) {
        acc += 0.25 * cur.values[f - s];
        wsum += 0.25;
      }
      if (id < pd - 1) {
        acc += 0.25 * cur.values[f + s];
        wsum += 0.25;
      }
      next.values[f] = acc / wsum;
    }
    std::swap(cur, next);
  }
  return cur;
}

double kernel_symmetry_residual(const OperatorStencil& L, const std::vector<double>& x,
                                const std::vector<double>& y, double t, const SolverConfig& cfg) {
  Field gx = heat_kernel(L, x, t, cfg);
  Field gy = heat_kernel(L, y, t, cfg);
  const double gxy = gx.values[L.grid().snap(y)];
  const double gyx = gy.values[L.grid().snap(x)];
  const double scale = std::max(std::fabs(gxy), std::fabs(gyx));
  return scale > 0 ? std::fabs(gxy - gyx) / scale : 0.0;
}

double kernel_reproduction_residual(const OperatorStencil& L, const std::vector<double>& y,
                                    double s, double t, const SolverConfig& cfg) {
  Evolver ev(L, cfg);
  Field gs = mollified_delta(L.grid(), y);
  ev.advance(gs, s);
  Field lhs = gs;
  ev.advance(lhs, t);          // Gamma(0,y;t+s,.)
  Field rhs = mollify(gs);     // quadrature against mollified-kernel columns
  ev.advance(rhs, t);
  double num = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) num += std::fabs(lhs.values[i] - rhs.values[i]);
  return num * lhs.grid.cell_volume() / lhs.l1_norm();
}

DecayFit decay_exponent(const OperatorStencil& L, const Field& u0, const std::vector<double>& times,
                        const SolverConfig& cfg, double mass_floor) {
  auto snaps = evolve(L, u0, cfg, times);
  DecayFit fit;
  std::vector<double> ts, sups;
  bool window_open = true;
  for (auto& [t, f] : snaps) {
    DecaySample s{t, f.sup_interior(2), f.mass_fraction_in_scaled_box(0.9)};
    fit.samples.push_back(s);
    if (window_open && s.mass_fraction >= mass_floor && s.t > 0 && s.sup > 0) {
      ts.push_back(s.t);
      sups.push_back(s.sup);
    } else if (s.mass_fraction < mass_floor) {
      window_open = false;  // contamination only grows; drop the tail
    }
  }
  if (ts.size() < 4)
    throw NumericalError("decay_exponent: fewer than 4 samples inside the contamination window");
  auto lf = fit_loglog(ts, sups);
  fit.slope = lf.slope;
  fit.r2 = lf.r2;
  fit.used = static_cast<int>(ts.size());
  return fit;
}

}  // namespace subheat
