#pragma once

#include "axray/catflow/suspension.hpp"

namespace axray::catflow {

// Transversal position of y relative to a box center: (u, v) are the frame
// coordinates of the base offset after flowing y for time t to the center's
// height sheet; t is the hitting time (flow derivative of t is exactly -1).
struct TransversalCoords {
  bool inside = false;
  double u = 0.0;
  double v = 0.0;
  double t = 0.0;
};

// Tests the three fiber relations (same fiber, through the roof, through the
// floor) and returns the candidate within (wu, wv, wt), smallest |t| first.
TransversalCoords locate_in_box(const SuspensionModel& m, const SuspensionState& center,
                                const SuspensionState& y, double wu, double wv, double wt);

// Horizontal segment through a point in the stable or unstable direction.
// For the constant roof these are exactly invariant; with a varying roof they
// serve as the transversal coordinate axes of the product boxes.
struct LocalManifold {
  SuspensionState center;
  Eigen::Vector2d direction;  // unit vector in the torus
  double halfwidth = 0.0;

  SuspensionState point(double s) const {
    return SuspensionState{wrap01(center.base + s * direction), center.height};
  }
};

LocalManifold local_stable(const SuspensionModel& m, const SuspensionState& x, double eps);
LocalManifold local_unstable(const SuspensionModel& m, const SuspensionState& x, double eps);

// Distance between the flowed manifold point at parameter s and the flowed
// center after time t; stable segments contract forward, unstable backward.
double manifold_separation(const SuspensionModel& m, const LocalManifold& w, double s, double t);

// Product neighborhood membership: |u|, |v| <= eps and |t| <= eps.
bool wbox_contains(const SuspensionModel& m, const SuspensionState& center, double eps,
                   const SuspensionState& y);

}  // namespace axray::catflow
