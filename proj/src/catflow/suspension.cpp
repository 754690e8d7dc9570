#include "axray/catflow/suspension.hpp"

#include <cmath>
#include <stdexcept>

namespace axray::catflow {

namespace {
Eigen::Matrix2<std::int64_t> default_matrix() {
  Eigen::Matrix2<std::int64_t> A;
  A << 2, 1, 1, 1;
  return A;
}
}  // namespace

SuspensionModel::SuspensionModel() : SuspensionModel(default_matrix(), 0.1) {}

SuspensionModel::SuspensionModel(const Eigen::Matrix2<std::int64_t>& A, double roof_amplitude)
    : ai_(A), amp_(roof_amplitude) {
  const std::int64_t det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (det != 1 && det != -1) throw std::invalid_argument("matrix must be unimodular");
  const std::int64_t tr = A(0, 0) + A(1, 1);
  if (std::abs(tr) <= 2) throw std::invalid_argument("matrix must be hyperbolic");
  if (!(roof_amplitude >= 0.0 && roof_amplitude < 0.5))
    throw std::invalid_argument("roof amplitude must lie in [0, 1/2)");

  a_ = A.cast<double>();
  a_inv_ << a_(1, 1), -a_(0, 1), -a_(1, 0), a_(0, 0);
  a_inv_ /= static_cast<double>(det);

  // eigenvalues of a 2x2 unimodular matrix: tr/2 +- sqrt(tr^2/4 - det)
  const double trd = static_cast<double>(tr);
  const double disc = std::sqrt(trd * trd - 4.0 * static_cast<double>(det));
  const double l1 = 0.5 * (trd + disc);
  const double l2 = 0.5 * (trd - disc);
  lambda_ = (std::abs(l1) > std::abs(l2)) ? l1 : l2;
  const double lother = (std::abs(l1) > std::abs(l2)) ? l2 : l1;
  if (std::abs(lambda_) <= 1.0) throw std::invalid_argument("matrix must be hyperbolic");
  theta_ = std::log(std::abs(lambda_));

  const auto eigvec = [&](double lam) {
    // (A - lam) v = 0; pick the larger row for stability.
    Eigen::Vector2d v;
    if (std::abs(a_(0, 1)) + std::abs(a_(0, 0) - lam) >
        std::abs(a_(1, 0)) + std::abs(a_(1, 1) - lam)) {
      v << -a_(0, 1), a_(0, 0) - lam;
    } else {
      v << a_(1, 1) - lam, -a_(1, 0);
    }
    v.normalize();
    if (v(0) < 0 || (v(0) == 0 && v(1) < 0)) v = -v;
    return v;
  };
  e_u_ = eigvec(lambda_);
  e_s_ = eigvec(lother);
  frame_.col(0) = e_u_;
  frame_.col(1) = e_s_;
  frame_inv_ = frame_.inverse();
}

double SuspensionModel::roof(const Eigen::Vector2d& base) const {
  return 1.0 + amp_ * std::cos(2.0 * M_PI * base(0));
}

Eigen::Vector2d SuspensionModel::to_frame(const Eigen::Vector2d& diff) const {
  return frame_inv_ * diff;
}

Eigen::Vector2d SuspensionModel::from_frame(const Eigen::Vector2d& uv) const {
  return frame_ * uv;
}

Eigen::Vector2d wrap01(const Eigen::Vector2d& x) {
  Eigen::Vector2d y;
  for (int i = 0; i < 2; ++i) {
    y(i) = x(i) - std::floor(x(i));
    if (y(i) >= 1.0) y(i) = 0.0;  // guard against floor rounding at the seam
  }
  return y;
}

Eigen::Vector2d torus_diff(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  Eigen::Vector2d d = a - b;
  for (int i = 0; i < 2; ++i) {
    d(i) -= std::round(d(i));
    if (d(i) >= 0.5) d(i) -= 1.0;
    if (d(i) < -0.5) d(i) += 1.0;
  }
  return d;
}

double torus_dist(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return torus_diff(a, b).norm();
}

FlowTrace flow_trace(const SuspensionModel& m, SuspensionState s, double t) {
  FlowTrace out;
  if (!(s.height >= 0.0) || s.height >= m.roof(s.base) + 1e-12)
    throw std::invalid_argument("state height outside fiber");
  const double max_steps = std::abs(t) / m.min_roof() + 4.0;
  std::int64_t steps = 0;
  if (t >= 0.0) {
    while (true) {
      const double room = m.roof(s.base) - s.height;
      if (t < room) {
        s.height += t;
        break;
      }
      t -= room;
      s.base = wrap01(m.matrix() * s.base);
      s.height = 0.0;
      ++out.crossings;
      if (++steps > max_steps) throw std::runtime_error("flow step budget exceeded");
    }
  } else {
    t = -t;
    while (true) {
      if (t <= s.height) {
        s.height -= t;
        break;
      }
      t -= s.height;
      s.base = wrap01(m.matrix_inv() * s.base);
      s.height = m.roof(s.base);
      --out.crossings;
      if (++steps > max_steps) throw std::runtime_error("flow step budget exceeded");
    }
    // height may sit exactly at the roof if t landed on a crossing; fold down
    if (s.height >= m.roof(s.base)) {
      s.base = wrap01(m.matrix() * s.base);
      s.height = 0.0;
      ++out.crossings;
    }
  }
  out.end = s;
  return out;
}

SuspensionState flow(const SuspensionModel& m, const SuspensionState& s, double t) {
  return flow_trace(m, s, t).end;
}

double dist(const SuspensionModel& m, const SuspensionState& a, const SuspensionState& b) {
  // direct identification within one fiber
  double best = std::hypot(torus_dist(a.base, b.base), a.height - b.height);
  // a passes the roof, lands near b: compare (A a.base, a.height - r(a.base)) to b
  {
    const double dh = (m.roof(a.base) - a.height) + b.height;
    const double db = torus_dist(wrap01(m.matrix() * a.base), b.base);
    best = std::min(best, std::hypot(db, dh));
  }
  // b passes the roof, lands near a
  {
    const double dh = (m.roof(b.base) - b.height) + a.height;
    const double db = torus_dist(wrap01(m.matrix() * b.base), a.base);
    best = std::min(best, std::hypot(db, dh));
  }
  return best;
}

}  // namespace axray::catflow
