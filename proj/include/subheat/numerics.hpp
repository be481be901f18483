#ifndef SUBHEAT_NUMERICS_HPP
#define SUBHEAT_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace subheat {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

/// Cumulative trapezoid of samples (t_i, f_i); result[i] = integral over [t_0, t_i].
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                                const std::vector<double>& f) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i)
    out[i] = out[i - 1] + 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return out;
}

/// FNV-1a, used for config identity (not security).
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  return out;
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return out;
}

}  // namespace subheat

#endif
