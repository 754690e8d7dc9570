#pragma once

#include "axray/hypflow/classes.hpp"

#include <complex>
#include <vector>

namespace axray::hypflow {

struct ResolventResult {
  double multiplier_value = 0.0;  // lambda sum |c_n|^2 / (lambda^2 + (2 pi n / ell)^2)
  double direct_value = 0.0;      // time quadrature of <R+(lambda) f, f>
  double lower_bound = 0.0;       // |c_0|^2 / lambda
  double ell = 0.0;
  double lambda = 0.0;
  // Discrete Fourier coefficients in standard order: index n holds the mode
  // of signed frequency n for n <= N/2, n - N above.
  std::vector<std::complex<double>> coeffs;
};

// One-sided resolvent pairing <R+(lambda) f, f> of a periodic signal sampled
// at equispaced points along a closed orbit of period ell, computed two ways:
// through the Fourier multiplier lambda / (lambda^2 + omega_n^2) and through
// direct quadrature of the wrapped kernel e^{-lambda t} on [0, ell]. The mean
// is split off before the transform, so a constant signal yields exactly
// |c_0|^2 / lambda and every result is bounded below by that term.
// Requires: sample count a power of two >= 4, ell > 0; lambda <= 0 raises
// std::domain_error.
ResolventResult resolvent_on_orbit(const std::vector<double>& samples, double ell,
                                   double lambda);

// Equispaced samples of a field along the closed orbit of a conjugacy class,
// as consumed by resolvent_on_orbit.
std::vector<double> orbit_signal(const FuchsianGroup& group, const SurfaceField& field,
                                 const GeodesicClass& c, int n_samples);

}  // namespace axray::hypflow
