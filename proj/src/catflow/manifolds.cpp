#include "axray/catflow/manifolds.hpp"

#include <cmath>
#include <stdexcept>

namespace axray::catflow {

TransversalCoords locate_in_box(const SuspensionModel& m, const SuspensionState& center,
                                const SuspensionState& y, double wu, double wv, double wt) {
  // Candidate hitting times onto the center's height sheet.  Each candidate
  // pairs a time with the base point projected along the flow to that sheet.
  struct Candidate {
    double t;
    Eigen::Vector2d base;
  };
  Candidate cand[3];
  int n = 0;
  // Same fiber.
  cand[n++] = {center.height - y.height, y.base};
  // Forward through the roof into the next fiber.
  cand[n++] = {(m.roof(y.base) - y.height) + center.height, wrap01(m.matrix() * y.base)};
  // Backward through the floor into the previous fiber.
  {
    const Eigen::Vector2d prev = wrap01(m.matrix_inv() * y.base);
    cand[n++] = {-(y.height + (m.roof(prev) - center.height)), prev};
  }

  TransversalCoords best;
  for (int i = 0; i < n; ++i) {
    if (std::abs(cand[i].t) >= wt) continue;
    const Eigen::Vector2d d = torus_diff(cand[i].base, center.base);
    const Eigen::Vector2d fc = m.to_frame(d);
    if (std::abs(fc(0)) >= wu || std::abs(fc(1)) >= wv) continue;
    if (!best.inside || std::abs(cand[i].t) < std::abs(best.t)) {
      best.inside = true;
      best.u = fc(0);
      best.v = fc(1);
      best.t = cand[i].t;
    }
  }
  return best;
}

LocalManifold local_stable(const SuspensionModel& m, const SuspensionState& x, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("local_stable: eps must be positive");
  return LocalManifold{x, m.stable_dir(), eps};
}

LocalManifold local_unstable(const SuspensionModel& m, const SuspensionState& x, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("local_unstable: eps must be positive");
  return LocalManifold{x, m.unstable_dir(), eps};
}

double manifold_separation(const SuspensionModel& m, const LocalManifold& w, double s, double t) {
  const SuspensionState a = flow(m, w.point(s), t);
  const SuspensionState b = flow(m, w.center, t);
  return dist(m, a, b);
}

bool wbox_contains(const SuspensionModel& m, const SuspensionState& center, double eps,
                   const SuspensionState& y) {
  return locate_in_box(m, center, y, eps, eps, eps).inside;
}

}  // namespace axray::catflow
