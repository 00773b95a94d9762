#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>

namespace mfts {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = std::numeric_limits<double>::quiet_NaN();
  double r_squared = 1.0;
  size_t n = 0;
};

// Ordinary least squares y = intercept + slope * x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = syy - f.slope * sxy;
  if (rss < 0.0) rss = 0.0;  // rounding
  f.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  if (n > 2) f.slope_stderr = std::sqrt(rss / (static_cast<double>(n - 2) * sxx));
  return f;
}

}  // namespace mfts
