#include "subheat/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace subheat {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(col)),
      line_(line),
      col_(col) {}

namespace {

class Cursor {
 public:
  Cursor(const std::string& s, int nvars, int line) : s_(s), nvars_(nvars), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line_, static_cast<int>(pos_) + 1);
  }

  BigInt integer() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      fail("expected integer");
    BigInt v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  Polynomial poly() {
    Polynomial acc(nvars_);
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    acc = acc + term(neg);
    while (true) {
      if (accept('+'))
        acc = acc + term(false);
      else if (accept('-'))
        acc = acc + term(true);
      else
        break;
    }
    return acc;
  }

  Polynomial term(bool neg) {
    Polynomial p = factor();
    while (accept('*')) p = p * factor();
    return neg ? -p : p;
  }

  Polynomial factor() {
    Polynomial p = primary();
    if (accept('^')) {
      BigInt e = integer();
      if (e > 64) fail("exponent too large");
      Polynomial r = Polynomial::constant(nvars_, 1);
      for (BigInt k = 0; k < e; ++k) r = r * p;
      return r;
    }
    return p;
  }

  Polynomial primary() {
    skip_ws();
    if (accept('(')) {
      Polynomial p = poly();
      expect(')', "')'");
      return p;
    }
    if (accept('-')) return -factor();
    char c = peek();
    if (c == 'x') {
      ++pos_;
      BigInt idx = integer();
      if (idx < 1 || idx > nvars_)
        fail("variable index out of range (have x1..x" + std::to_string(nvars_) + ")");
      return Polynomial::variable(nvars_, idx.convert_to<int>() - 1);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt num = integer();
      if (accept('/')) {
        BigInt den = integer();
        if (den == 0) fail("zero denominator");
        return Polynomial::constant(nvars_, Rational(num, den));
      }
      return Polynomial::constant(nvars_, Rational(num));
    }
    fail("expected a number, variable, or '('");
  }

  std::size_t pos() const { return pos_; }

 private:
  const std::string& s_;
  int nvars_;
  int line_;
  std::size_t pos_ = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text, int nvars, int line_base) {
  Cursor c(text, nvars, line_base);
  Polynomial p = c.poly();
  if (!c.eof()) c.fail("unexpected trailing input");
  return p;
}

VectorField parse_vector_field(const std::string& text, int line_base) {
  const auto parts = split(text, ';');
  const int n = static_cast<int>(parts.size());
  std::vector<Polynomial> coeffs;
  int col_off = 0;
  for (int j = 0; j < n; ++j) {
    try {
      coeffs.push_back(parse_polynomial(parts[j], n, line_base));
    } catch (const ParseError& e) {
      throw ParseError(std::string("coefficient ") + std::to_string(j + 1) + ": " + e.what(),
                       line_base, col_off + e.col());
    }
    col_off += static_cast<int>(parts[j].size()) + 1;
  }
  return VectorField(n, std::move(coeffs));
}

VectorFieldSystem parse_system_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<int> weights;
  std::vector<VectorField> fields;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.rfind("weights", 0) == 0) {
      if (!weights.empty()) throw ParseError("duplicate weights line", lineno, 1);
      std::istringstream ws(line.substr(7));
      int v;
      while (ws >> v) weights.push_back(v);
      if (weights.empty()) throw ParseError("weights line needs integers", lineno, 8);
      continue;
    }
    fields.push_back(parse_vector_field(line, lineno));
  }
  if (fields.empty()) throw ParseError("no vector fields found", lineno, 1);
  if (weights.empty()) throw ParseError("missing weights line", lineno, 1);
  try {
    return VectorFieldSystem(std::move(fields), DilationWeights(weights));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno, 1);
  }
}

VectorFieldSystem parse_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system_text(buf.str());
}

}  // namespace subheat
