#include "axray/hypflow/resolvent.hpp"

#include "axray/hypflow/band_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace axray::hypflow {

ResolventResult resolvent_on_orbit(const std::vector<double>& samples, double ell,
                                   double lambda) {
  if (lambda <= 0) throw std::domain_error("resolvent_on_orbit: lambda must be > 0");
  const int n = static_cast<int>(samples.size());
  if (n < 4 || (n & (n - 1)) != 0)
    throw std::invalid_argument("resolvent_on_orbit: sample count must be a power of two >= 4");
  if (!(ell > 0)) throw std::invalid_argument("resolvent_on_orbit: ell must be > 0");

  ResolventResult out;
  out.ell = ell;
  out.lambda = lambda;

  // Split off the mean so a constant signal has a bitwise-zero residual and
  // the c_0 term carries the whole value.
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= n;
  std::vector<double> res(samples);
  for (double& v : res) v -= mean;

  out.coeffs.assign(static_cast<size_t>(n), {0.0, 0.0});
  out.coeffs[0] = {mean, 0.0};
  std::vector<std::complex<double>> twiddle(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double phi = -2.0 * std::numbers::pi * m / n;
    twiddle[static_cast<size_t>(m)] = {std::cos(phi), std::sin(phi)};
  }
  for (int k = 1; k < n; ++k) {
    std::complex<double> acc = 0.0;
    long long idx = 0;
    for (int j = 0; j < n; ++j) {
      acc += res[static_cast<size_t>(j)] * twiddle[static_cast<size_t>(idx)];
      idx += k;
      if (idx >= n) idx -= n;
    }
    out.coeffs[static_cast<size_t>(k)] = acc / static_cast<double>(n);
  }

  out.lower_bound = mean * mean / lambda;
  double multiplier = out.lower_bound;
  for (int k = 1; k < n; ++k) {
    const int freq = k <= n / 2 ? k : k - n;
    const double omega = 2.0 * std::numbers::pi * freq / ell;
    multiplier += lambda * std::norm(out.coeffs[static_cast<size_t>(k)]) /
                  (lambda * lambda + omega * omega);
  }
  out.multiplier_value = multiplier;

  // Direct route: R+ f(x) = (1 - e^{-lambda ell})^{-1} int_0^ell e^{-lambda t}
  // f(x - t) dt by composite Simpson on the sample grid (n even), then the
  // orbit average of R+f times f.
  const double h = ell / n;
  std::vector<double> kernel(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k) kernel[static_cast<size_t>(k)] = std::exp(-lambda * k * h);
  const double wrap = 1.0 / (1.0 - std::exp(-lambda * ell));
  double pairing = 0.0;
  for (int j = 0; j < n; ++j) {
    double integral = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      const int src = ((j - k) % n + n) % n;
      integral += w * kernel[static_cast<size_t>(k)] * samples[static_cast<size_t>(src)];
    }
    pairing += (integral * h / 3.0) * wrap * samples[static_cast<size_t>(j)];
  }
  out.direct_value = pairing / n;
  return out;
}

std::vector<double> orbit_signal(const FuchsianGroup& group, const SurfaceField& field,
                                 const GeodesicClass& c, int n_samples) {
  if (n_samples < 1) throw std::invalid_argument("orbit_signal: need >= 1 sample");
  const double ell = translation_length(c.matrix);
  const double dt = ell / n_samples;
  Mat2 cur = group.reduce(axis_frame(c.matrix));
  std::vector<double> out(static_cast<size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    out[static_cast<size_t>(j)] = field(cur);
    cur = group.reduce(Mat2(cur * flow_translation(dt)));
  }
  return out;
}

}  // namespace axray::hypflow
