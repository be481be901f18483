#include "subheat/vector_field.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace subheat {

VectorField::VectorField(int dim) : dim_(dim), coeffs_(dim, Polynomial(dim)) {
  if (dim < 1) throw std::invalid_argument("vector field dimension must be positive");
}

VectorField::VectorField(int dim, std::vector<Polynomial> coeffs)
    : dim_(dim), coeffs_(std::move(coeffs)) {
  if (dim < 1) throw std::invalid_argument("vector field dimension must be positive");
  if (static_cast<int>(coeffs_.size()) != dim)
    throw std::invalid_argument("coefficient count must equal dimension");
  for (const auto& c : coeffs_)
    if (c.nvars() != dim) throw std::invalid_argument("coefficient arity mismatch");
}

VectorField VectorField::partial(int dim, int j) {
  VectorField x(dim);
  x.coeffs_[j] = Polynomial::constant(dim, 1);
  return x;
}

bool VectorField::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

Polynomial VectorField::apply(const Polynomial& f) const {
  Polynomial r(dim_);
  for (int j = 0; j < dim_; ++j) {
    if (coeffs_[j].is_zero()) continue;
    r = r + coeffs_[j] * f.derivative(j);
  }
  return r;
}

std::vector<Rational> VectorField::eval(const std::vector<Rational>& x) const {
  std::vector<Rational> v(dim_);
  for (int j = 0; j < dim_; ++j) v[j] = coeffs_[j].eval(x);
  return v;
}

std::string VectorField::str() const {
  std::ostringstream out;
  for (int j = 0; j < dim_; ++j) {
    if (j) out << " ; ";
    out << coeffs_[j].str();
  }
  return out.str();
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector field dimension mismatch");
  std::vector<Polynomial> c(a.dim());
  for (int j = 0; j < a.dim(); ++j) c[j] = a.coeff(j) + b.coeff(j);
  return VectorField(a.dim(), std::move(c));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("vector field dimension mismatch");
  std::vector<Polynomial> c(a.dim());
  for (int j = 0; j < a.dim(); ++j) c[j] = a.coeff(j) - b.coeff(j);
  return VectorField(a.dim(), std::move(c));
}

VectorField operator*(const Rational& c, const VectorField& a) {
  std::vector<Polynomial> r(a.dim());
  for (int j = 0; j < a.dim(); ++j) r[j] = a.coeff(j) * c;
  return VectorField(a.dim(), std::move(r));
}

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("lie_bracket: dimension mismatch");
  const int n = x.dim();
  std::vector<Polynomial> c(n);
  for (int j = 0; j < n; ++j) c[j] = x.apply(y.coeff(j)) - y.apply(x.coeff(j));
  return VectorField(n, std::move(c));
}

DilationWeights::DilationWeights(std::vector<int> s) : sigma(std::move(s)) {
  if (sigma.empty()) throw std::invalid_argument("weights must be non-empty");
  if (sigma.front() != 1) throw std::invalid_argument("sigma_1 must equal 1");
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i)
    if (sigma[i] > sigma[i + 1]) throw std::invalid_argument("weights must be non-decreasing");
  for (int v : sigma)
    if (v < 1) throw std::invalid_argument("weights must be positive");
}

HomogeneousDimension homogeneous_dimension(const DilationWeights& w) {
  int q = 0;
  for (int s : w.sigma) q += s;
  return {q, Rational(1) + Rational(2, q)};
}

bool check_homogeneity(const VectorField& x, const DilationWeights& w, int degree) {
  if (x.dim() != w.dim()) throw std::invalid_argument("check_homogeneity: dimension mismatch");
  for (int j = 0; j < x.dim(); ++j) {
    const int target = w.sigma[j] - degree;
    for (const auto& [m, c] : x.coeff(j).terms()) {
      long long deg = 0;
      for (int k = 0; k < x.dim(); ++k) deg += static_cast<long long>(m[k]) * w.sigma[k];
      if (deg != target) return false;
    }
  }
  return true;
}

namespace {

/// Incremental exact row basis over Q, keyed by an arbitrary index type.
template <typename Key>
class RowBasis {
 public:
  // Returns true if the row enlarged the span.
  bool insert(std::map<Key, Rational> row) {
    for (auto& pivot : rows_) {
      auto it = row.find(pivot.first);
      if (it == row.end()) continue;
      const Rational factor = it->second;
      for (const auto& [k, v] : pivot.second) {
        auto jt = row.find(k);
        if (jt == row.end()) {
          row.emplace(k, -factor * v);
        } else {
          jt->second -= factor * v;
          if (jt->second == 0) row.erase(jt);
        }
      }
    }
    if (row.empty()) return false;
    const Key lead = row.begin()->first;
    const Rational inv = row.begin()->second;
    std::map<Key, Rational> norm;
    for (const auto& [k, v] : row) norm.emplace(k, v / inv);
    rows_.emplace_back(lead, std::move(norm));
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<std::pair<Key, std::map<Key, Rational>>> rows_;
};

std::map<int, Rational> point_row(const VectorField& f, const std::vector<Rational>& p) {
  std::map<int, Rational> row;
  auto v = f.eval(p);
  for (int j = 0; j < f.dim(); ++j)
    if (v[j] != 0) row.emplace(j, v[j]);
  return row;
}

// Key for the (monomial, component) coefficient basis of a field.
using FieldKey = std::pair<int, Monomial>;

std::map<FieldKey, Rational> field_row(const VectorField& f) {
  std::map<FieldKey, Rational> row;
  for (int j = 0; j < f.dim(); ++j)
    for (const auto& [m, c] : f.coeff(j).terms()) row.emplace(FieldKey{j, m}, c);
  return row;
}

}  // namespace

std::vector<std::vector<VectorField>> bracket_levels(const std::vector<VectorField>& fields,
                                                     int max_step) {
  if (max_step < 1) throw std::invalid_argument("max_step must be >= 1");
  std::vector<std::vector<VectorField>> levels;
  levels.push_back(fields);
  for (int len = 2; len <= max_step; ++len) {
    std::vector<VectorField> next;
    for (const auto& x : fields) {
      for (const auto& b : levels.back()) {
        VectorField br = lie_bracket(x, b);
        if (!br.is_zero()) next.push_back(std::move(br));
      }
    }
    levels.push_back(std::move(next));
    if (levels.back().empty()) break;  // all deeper left-normed brackets vanish too
  }
  return levels;
}

int field_span_rank(const std::vector<VectorField>& fields) {
  RowBasis<FieldKey> basis;
  for (const auto& f : fields) basis.insert(field_row(f));
  return basis.rank();
}

VectorFieldSystem::VectorFieldSystem(std::vector<VectorField> fields, DilationWeights weights)
    : fields_(std::move(fields)), weights_(std::move(weights)) {
  if (fields_.empty()) throw std::invalid_argument("system needs at least one field");
  dim_ = fields_.front().dim();
  for (const auto& f : fields_)
    if (f.dim() != dim_) throw std::invalid_argument("system fields must share dimension");
  if (weights_.dim() != dim_) throw std::invalid_argument("weights dimension mismatch");
  if (field_span_rank(fields_) != static_cast<int>(fields_.size()))
    throw std::invalid_argument("system fields must be linearly independent");
}

bool VectorFieldSystem::is_homogeneous() const {
  for (const auto& f : fields_)
    if (!check_homogeneity(f, weights_, 1)) return false;
  return true;
}

std::string VectorFieldSystem::str() const {
  std::ostringstream out;
  for (const auto& f : fields_) out << f.str() << "\n";
  return out.str();
}

RankResult hormander_rank(const VectorFieldSystem& sys, const std::vector<Rational>& point,
                          int max_step) {
  if (max_step < 1) throw std::invalid_argument("max_step must be >= 1");
  if (static_cast<int>(point.size()) != sys.dim())
    throw std::invalid_argument("point dimension mismatch");
  RowBasis<int> basis;
  RankResult out;
  auto levels = bracket_levels(sys.fields(), max_step);
  for (std::size_t li = 0; li < levels.size(); ++li) {
    for (const auto& f : levels[li]) basis.insert(point_row(f, point));
    out.rank = basis.rank();
    if (out.rank == sys.dim() && !out.step_achieved) {
      out.step_achieved = static_cast<int>(li) + 1;
      break;
    }
  }
  return out;
}

LieAlgebraDimension lie_algebra_dimension(const VectorFieldSystem& sys, int max_step) {
  if (max_step < 1) throw std::invalid_argument("max_step must be >= 1");
  RowBasis<FieldKey> basis;
  for (const auto& level : bracket_levels(sys.fields(), max_step))
    for (const auto& f : level) basis.insert(field_row(f));
  const int n = basis.rank();
  return {n, n > sys.dim()};
}

}  // namespace subheat
