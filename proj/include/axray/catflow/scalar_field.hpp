#pragma once

#include <functional>
#include <vector>

#include "axray/core/rng.hpp"
#include "axray/catflow/suspension.hpp"

namespace axray::catflow {

// Smooth test field on the suspension: a height bump supported strictly
// inside every fiber times a trigonometric polynomial on the torus.  Because
// the height factor vanishes near the gluing the field is smooth across it,
// and the flow derivative is available in closed form.
class ScalarField {
 public:
  struct Wave {
    int mx = 0;
    int my = 0;
    double amp = 0.0;
    double phase = 0.0;
  };

  // Support in height is (s0, s1); requires 0 < s0 < s1 <= min roof.
  ScalarField(const SuspensionModel& m, double s0, double s1, std::vector<Wave> waves);

  static ScalarField random(const SuspensionModel& m, axray::Rng& rng, int max_mode, int n_waves,
                            double s0, double s1);

  double operator()(const SuspensionState& y) const;
  double flow_derivative(const SuspensionState& y) const;  // exact

  double s0() const { return s0_; }
  double s1() const { return s1_; }
  const std::vector<Wave>& waves() const { return waves_; }

  // factor access for integrators: f(x, h) = height_profile(h) * torus_sum(x)
  double height_profile(double h) const { return height_factor(h); }
  double torus_sum(const Eigen::Vector2d& x) const { return torus_factor(x); }

 private:
  double s0_;
  double s1_;
  std::vector<Wave> waves_;
  double height_factor(double h) const;
  double height_factor_deriv(double h) const;
  double torus_factor(const Eigen::Vector2d& x) const;
};

using StateFunc = std::function<double(const SuspensionState&)>;

// Centered finite difference of f along the flow.
double flow_derivative_fd(const SuspensionModel& m, const StateFunc& f, const SuspensionState& y,
                          double dt);

// Sup of |f| over an n_base x n_base x n_levels sample grid.
double grid_sup(const SuspensionModel& m, const StateFunc& f, int n_base, int n_levels);

// Sampled beta-Holder quotient sup |f(a)-f(b)| / d(a,b)^beta over random
// pairs stratified across dyadic separation scales in [dmin, dmax].
double holder_seminorm_sample(const SuspensionModel& m, const StateFunc& f, double beta,
                              axray::Rng& rng, int n_pairs, double dmin, double dmax);

}  // namespace axray::catflow
