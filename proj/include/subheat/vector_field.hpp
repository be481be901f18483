#ifndef SUBHEAT_VECTOR_FIELD_HPP
#define SUBHEAT_VECTOR_FIELD_HPP

#include "subheat/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subheat {

/// First-order operator sum_j coeff[j] * d/dx_j with polynomial coefficients.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(int dim);
  VectorField(int dim, std::vector<Polynomial> coeffs);

  static VectorField partial(int dim, int j);  // d/dx_j

  int dim() const { return dim_; }
  const Polynomial& coeff(int j) const { return coeffs_[j]; }
  const std::vector<Polynomial>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  /// X applied to a scalar polynomial: sum_j coeff[j] * df/dx_j.
  Polynomial apply(const Polynomial& f) const;

  /// Exact evaluation of the coefficient vector at a point.
  std::vector<Rational> eval(const std::vector<Rational>& x) const;

  bool operator==(const VectorField& o) const { return dim_ == o.dim_ && coeffs_ == o.coeffs_; }

  std::string str() const;

 private:
  int dim_ = 0;
  std::vector<Polynomial> coeffs_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Rational& c, const VectorField& a);

/// [X, Y] = XY - YX, computed exactly by symbolic differentiation.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// Integer exponents 1 = sigma_1 <= ... <= sigma_n of the non-isotropic
/// dilation x_j -> lambda^{sigma_j} x_j.
struct DilationWeights {
  std::vector<int> sigma;

  explicit DilationWeights(std::vector<int> s);
  int dim() const { return static_cast<int>(sigma.size()); }
  int max_weight() const { return sigma.empty() ? 0 : sigma.back(); }
};

/// q = sum sigma_j and the critical exponent 1 + 2/q, exact.
struct HomogeneousDimension {
  int q;
  Rational alpha_fujita;
};
HomogeneousDimension homogeneous_dimension(const DilationWeights& w);

/// True iff X is homogeneous of degree `degree` for the dilation: every
/// monomial x^beta in coeff j satisfies sum_k beta_k sigma_k = sigma_j - degree.
/// Checked per monomial, no lambda sampling.
bool check_homogeneity(const VectorField& x, const DilationWeights& w, int degree);

struct RankResult {
  int rank = 0;
  std::optional<int> step_achieved;  // smallest bracket length reaching full rank
};

class VectorFieldSystem {
 public:
  VectorFieldSystem(std::vector<VectorField> fields, DilationWeights weights);

  int dim() const { return dim_; }
  int num_fields() const { return static_cast<int>(fields_.size()); }
  const std::vector<VectorField>& fields() const { return fields_; }
  const VectorField& field(int i) const { return fields_[i]; }
  const DilationWeights& weights() const { return weights_; }

  /// True iff every generator passes check_homogeneity at degree 1.
  bool is_homogeneous() const;

  std::string str() const;

 private:
  int dim_;
  std::vector<VectorField> fields_;
  DilationWeights weights_;
};

/// Iterated brackets up to length max_step evaluated at a point; rank of the
/// spanned subspace of R^n over the rationals (exact elimination).
RankResult hormander_rank(const VectorFieldSystem& sys, const std::vector<Rational>& point,
                          int max_step);

struct LieAlgebraDimension {
  int n_dim;           // dim of span of iterated brackets as fields over R
  bool needs_lifting;  // N > n
};

/// Rank of the bracket-generated span in the monomial x d/dx_j coefficient
/// basis, brackets up to length max_step. For systems homogeneous of degree 1
/// brackets of length > sigma_n vanish, so max_step = sigma_n suffices.
LieAlgebraDimension lie_algebra_dimension(const VectorFieldSystem& sys, int max_step);

/// All left-normed iterated brackets grouped by length, lengths 1..max_step.
std::vector<std::vector<VectorField>> bracket_levels(const std::vector<VectorField>& fields,
                                                     int max_step);

/// Exact rank of a set of fields viewed as coefficient vectors.
int field_span_rank(const std::vector<VectorField>& fields);

}  // namespace subheat

#endif
