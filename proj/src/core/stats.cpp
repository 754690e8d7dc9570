#include "axray/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace axray {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

MeanSe batch_mean_se(const std::vector<double>& values, int n_batches) {
  if (n_batches < 2 || values.size() < static_cast<std::size_t>(2 * n_batches))
    throw std::invalid_argument("batch_mean_se: need >= 2 values per batch and >= 2 batches");
  const std::size_t n = values.size();
  std::vector<double> bm(n_batches, 0.0);
  // Contiguous blocks; the last block absorbs the remainder.
  const std::size_t base = n / n_batches;
  std::size_t pos = 0;
  for (int b = 0; b < n_batches; ++b) {
    const std::size_t len = (b == n_batches - 1) ? (n - pos) : base;
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += values[pos + i];
    bm[b] = s / static_cast<double>(len);
    pos += len;
  }
  double m = 0.0;
  for (double v : bm) m += v;
  m /= n_batches;
  double var = 0.0;
  for (double v : bm) var += (v - m) * (v - m);
  var /= (n_batches - 1);
  MeanSe r;
  r.mean = m;
  r.se = std::sqrt(var / n_batches);
  r.batches = n_batches;
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace axray
