#ifndef SUBHEAT_POLYNOMIAL_HPP
#define SUBHEAT_POLYNOMIAL_HPP

#include "subheat/rational.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace subheat {

// Multi-index of exponents, one entry per variable.
using Monomial = std::vector<std::uint32_t>;

/// Multivariate polynomial over the rationals. Terms with zero coefficient
/// are never stored; all arithmetic is exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int index);  // x_{index}, 0-based

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  Polynomial operator-() const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial derivative(int var) const;

  Rational eval(const std::vector<Rational>& x) const;
  double eval(const std::vector<double>& x) const;

  /// Total degree of the highest monomial (0 for constants and the zero polynomial).
  int degree() const;

  std::string str(const std::vector<std::string>& varnames = {}) const;

 private:
  int nvars_ = 0;
  std::map<Monomial, Rational> terms_;
};

}  // namespace subheat

#endif
