#include "axray/catflow/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "axray/catflow/flow_boxes.hpp"

namespace axray::catflow {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ScalarField::ScalarField(const SuspensionModel& m, double s0, double s1, std::vector<Wave> waves)
    : s0_(s0), s1_(s1), waves_(std::move(waves)) {
  if (!(0.0 < s0 && s0 < s1 && s1 <= m.min_roof()))
    throw std::invalid_argument("ScalarField: height support must sit inside every fiber");
}

ScalarField ScalarField::random(const SuspensionModel& m, axray::Rng& rng, int max_mode,
                                int n_waves, double s0, double s1) {
  std::vector<Wave> waves;
  waves.reserve(static_cast<std::size_t>(n_waves));
  while (static_cast<int>(waves.size()) < n_waves) {
    Wave w;
    w.mx = static_cast<int>(rng.below(2 * max_mode + 1)) - max_mode;
    w.my = static_cast<int>(rng.below(2 * max_mode + 1)) - max_mode;
    if (w.mx == 0 && w.my == 0) continue;
    w.amp = rng.uniform(-1.0, 1.0);
    w.phase = rng.uniform(0.0, kTwoPi);
    waves.push_back(w);
  }
  return ScalarField(m, s0, s1, std::move(waves));
}

double ScalarField::height_factor(double h) const {
  return bump((2.0 * h - s0_ - s1_) / (s1_ - s0_));
}

double ScalarField::height_factor_deriv(double h) const {
  return bump_deriv((2.0 * h - s0_ - s1_) / (s1_ - s0_)) * 2.0 / (s1_ - s0_);
}

double ScalarField::torus_factor(const Eigen::Vector2d& x) const {
  double s = 0.0;
  for (const Wave& w : waves_)
    s += w.amp * std::cos(kTwoPi * (w.mx * x(0) + w.my * x(1)) + w.phase);
  return s;
}

double ScalarField::operator()(const SuspensionState& y) const {
  const double hf = height_factor(y.height);
  if (hf == 0.0) return 0.0;
  return hf * torus_factor(y.base);
}

double ScalarField::flow_derivative(const SuspensionState& y) const {
  const double hd = height_factor_deriv(y.height);
  if (hd == 0.0) return 0.0;
  return hd * torus_factor(y.base);
}

double flow_derivative_fd(const SuspensionModel& m, const StateFunc& f, const SuspensionState& y,
                          double dt) {
  return (f(flow(m, y, dt)) - f(flow(m, y, -dt))) / (2.0 * dt);
}

double grid_sup(const SuspensionModel& m, const StateFunc& f, int n_base, int n_levels) {
  double mx = 0.0;
  for (int i = 0; i < n_base; ++i) {
    for (int j = 0; j < n_base; ++j) {
      const Eigen::Vector2d base((i + 0.5) / n_base, (j + 0.5) / n_base);
      const double r = m.roof(base);
      for (int k = 0; k < n_levels; ++k)
        mx = std::max(mx, std::abs(f(SuspensionState{base, r * (k + 0.5) / n_levels})));
    }
  }
  return mx;
}

double holder_seminorm_sample(const SuspensionModel& m, const StateFunc& f, double beta,
                              axray::Rng& rng, int n_pairs, double dmin, double dmax) {
  if (!(0.0 < dmin && dmin < dmax)) throw std::invalid_argument("holder_seminorm_sample: scales");
  const int n_scales = std::max(1, static_cast<int>(std::ceil(std::log2(dmax / dmin))) + 1);
  const int per_scale = std::max(1, n_pairs / n_scales);
  double best = 0.0;
  for (int k = 0; k < n_scales; ++k) {
    const double scale = dmax * std::pow(0.5, k);
    for (int i = 0; i < per_scale; ++i) {
      SuspensionState a;
      a.base = Eigen::Vector2d(rng.next_double(), rng.next_double());
      a.height = rng.uniform(0.0, m.roof(a.base) * 0.999);
      Eigen::Vector3d dir(rng.normal(), rng.normal(), rng.normal());
      const double dn = dir.norm();
      if (dn < 1e-12) continue;
      dir *= scale / dn;
      SuspensionState b;
      b.base = wrap01(a.base + dir.head<2>());
      b.height = std::clamp(a.height + dir(2), 0.0, m.roof(b.base) * 0.999);
      const double d = dist(m, a, b);
      if (d <= 1e-12) continue;
      best = std::max(best, std::abs(f(a) - f(b)) / std::pow(d, beta));
    }
  }
  return best;
}

}  // namespace axray::catflow
