#include "axray/livsic/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "axray/catflow/flow_boxes.hpp"
#include "axray/core/quad1d.hpp"

namespace axray::livsic {

namespace {

// Crossing times of s -> flow(y, s) strictly between 0 and t, ascending.
// Base updates replicate flow_trace so the cut layout matches the flow.
std::vector<double> crossing_cuts(const SuspensionModel& m, const SuspensionState& y, double t) {
  std::vector<double> cuts;
  if (t > 0.0) {
    Eigen::Vector2d b = y.base;
    double tc = m.roof(b) - y.height;
    while (tc < t) {
      cuts.push_back(tc);
      b = catflow::wrap01(m.matrix() * b);
      tc += m.roof(b);
    }
  } else if (t < 0.0) {
    Eigen::Vector2d b = y.base;
    double tc = -y.height;
    while (tc > t) {
      if (tc != 0.0) cuts.push_back(tc);
      b = catflow::wrap01(m.matrix_inv() * b);
      tc -= m.roof(b);
    }
    std::reverse(cuts.begin(), cuts.end());
  }
  return cuts;
}

double simpson_rec(const std::function<double(double)>& g, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double lm = 0.5 * (a + mid), rm = 0.5 * (mid + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(g, a, mid, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(g, mid, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double simpson_span(const std::function<double(double)>& g, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(g, a, b, fa, fm, fb, whole, std::max(tol, 1e-16), 30);
}

}  // namespace

CallableField::CallableField(StateFunc f, double tol) : f_(std::move(f)), tol_(tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("CallableField: tolerance must be positive");
}

double CallableField::operator()(const SuspensionModel& m, const SuspensionState& y) const {
  (void)m;
  return f_(y);
}

double CallableField::flow_integral(const SuspensionModel& m, const SuspensionState& y,
                                    double t) const {
  if (t == 0.0) return 0.0;
  std::vector<double> cuts = crossing_cuts(m, y, t);
  cuts.insert(cuts.begin(), std::min(0.0, t));
  cuts.push_back(std::max(0.0, t));
  const auto g = [&](double s) { return f_(catflow::flow(m, y, s)); };
  const double total = std::abs(t);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += simpson_span(g, cuts[i], cuts[i + 1], tol_ * (cuts[i + 1] - cuts[i]) / total);
  return t > 0.0 ? acc : -acc;
}

TrigField::TrigField(ScalarField f) : f_(std::move(f)) {
  // cumulative height profile over [s0, s1]: prefix sums of Gauss panels
  const int n_panels = 2048;
  const Quad1D rule = gauss_legendre(6);
  cum_.assign(n_panels + 1, 0.0);
  const double w = (f_.s1() - f_.s0()) / n_panels;
  for (int p = 0; p < n_panels; ++p) {
    const double a = f_.s0() + p * w;
    double s = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      s += rule.weights[q] * f_.height_profile(a + 0.5 * w * (rule.nodes[q] + 1.0));
    cum_[p + 1] = cum_[p] + 0.5 * w * s;
  }
}

double TrigField::cumulative(double h) const {
  if (h <= f_.s0()) return 0.0;
  if (h >= f_.s1()) return cum_.back();
  const int n_panels = static_cast<int>(cum_.size()) - 1;
  const double w = (f_.s1() - f_.s0()) / n_panels;
  const double pos = (h - f_.s0()) / w;
  int p = std::min(n_panels - 1, static_cast<int>(pos));
  // partial panel by Gauss on [a, h]
  const double a = f_.s0() + p * w;
  static const Quad1D rule = gauss_legendre(6);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q)
    s += rule.weights[q] * f_.height_profile(a + 0.5 * (h - a) * (rule.nodes[q] + 1.0));
  return cum_[p] + 0.5 * (h - a) * s;
}

double TrigField::fiber_mass() const { return cum_.back(); }

double TrigField::operator()(const SuspensionModel& m, const SuspensionState& y) const {
  (void)m;
  return f_(y);
}

double TrigField::flow_integral(const SuspensionModel& m, const SuspensionState& y,
                                double t) const {
  if (t == 0.0) return 0.0;
  // walk fibers; each span contributes torus factor times a profile increment
  double acc = 0.0;
  if (t > 0.0) {
    Eigen::Vector2d b = y.base;
    double h = y.height, remaining = t;
    while (true) {
      const double room = m.roof(b) - h;
      if (remaining < room) {
        acc += f_.torus_sum(b) * (cumulative(h + remaining) - cumulative(h));
        break;
      }
      acc += f_.torus_sum(b) * (cumulative(m.roof(b)) - cumulative(h));
      remaining -= room;
      b = catflow::wrap01(m.matrix() * b);
      h = 0.0;
    }
  } else {
    Eigen::Vector2d b = y.base;
    double h = y.height, remaining = -t;
    while (true) {
      if (remaining <= h) {
        acc -= f_.torus_sum(b) * (cumulative(h) - cumulative(h - remaining));
        break;
      }
      acc -= f_.torus_sum(b) * cumulative(h);
      remaining -= h;
      b = catflow::wrap01(m.matrix_inv() * b);
      h = m.roof(b);
    }
  }
  return acc;
}

DerivativeField::DerivativeField(ScalarField w) : w_(std::move(w)) {}

double DerivativeField::operator()(const SuspensionModel& m, const SuspensionState& y) const {
  (void)m;
  return w_.flow_derivative(y);
}

double DerivativeField::flow_integral(const SuspensionModel& m, const SuspensionState& y,
                                      double t) const {
  return w_(catflow::flow(m, y, t)) - w_(y);
}

SumField::SumField(std::shared_ptr<const FlowField> a, std::shared_ptr<const FlowField> b,
                   double scale)
    : a_(std::move(a)), b_(std::move(b)), scale_(scale) {
  if (!a_ || !b_) throw std::invalid_argument("SumField: null component");
}

double SumField::operator()(const SuspensionModel& m, const SuspensionState& y) const {
  return (*a_)(m, y) + scale_ * (*b_)(m, y);
}

double SumField::flow_integral(const SuspensionModel& m, const SuspensionState& y,
                               double t) const {
  return a_->flow_integral(m, y, t) + scale_ * b_->flow_integral(m, y, t);
}

}  // namespace axray::livsic
