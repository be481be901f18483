#include "subheat/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace subheat {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
  Polynomial p(nvars);
  Monomial m(nvars, 0);
  m[index] = 1;
  p.add_term(m, 1);
  return p;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != nvars_) throw std::invalid_argument("monomial arity mismatch");
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  Polynomial r(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m(nvars_);
      for (int i = 0; i < nvars_; ++i) m[i] = ma[i] + mb[i];
      r.add_term(m, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  for (const auto& [m, a] : terms_) r.add_term(m, a * c);
  return r;
}

Polynomial Polynomial::operator-() const { return *this * Rational(-1); }

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    r.add_term(d, c * Rational(m[var]));
  }
  return r;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("evaluation arity mismatch");
  Rational s = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

double Polynomial::eval(const std::vector<double>& x) const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < nvars_; ++i)
      for (std::uint32_t k = 0; k < m[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int t = 0;
    for (auto e : m) t += static_cast<int>(e);
    if (t > d) d = t;
  }
  return d;
}

std::string Polynomial::str(const std::vector<std::string>& varnames) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (!first) {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    } else if (a < 0) {
      out << "-";
      a = -a;
    }
    first = false;
    bool has_var = false;
    for (auto e : m)
      if (e > 0) has_var = true;
    if (!has_var || a != 1) out << to_string(a);
    bool star = a != 1;
    for (int i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (star) out << "*";
      if (i < static_cast<int>(varnames.size()))
        out << varnames[i];
      else
        out << "x" << (i + 1);
      if (m[i] > 1) out << "^" << m[i];
      star = true;
    }
  }
  return out.str();
}

}  // namespace subheat
