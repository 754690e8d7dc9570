#pragma once

#include <cstddef>
#include <vector>

#include "axray/catflow/manifolds.hpp"
#include "axray/catflow/suspension.hpp"

namespace axray::catflow {

// C^infinity bump on (-1, 1): exp(-1/(1-s^2)), zero outside.
double bump(double s);
double bump_deriv(double s);

struct FlowBox {
  SuspensionState center;
  double wu = 0.0;
  double wv = 0.0;
  double wt = 0.0;
};

// One box contributing at a query point.  t is the hitting time onto the
// box's height sheet (flow derivative exactly -1) and proj_base the base of
// the landing point in the center's fiber; psi/dpsi are the bump product and
// its flow derivative, theta/x_theta the normalized partition values.
struct ActiveBox {
  std::size_t index = 0;
  double u = 0.0;
  double v = 0.0;
  double t = 0.0;
  Eigen::Vector2d proj_base = Eigen::Vector2d::Zero();
  double psi = 0.0;
  double dpsi = 0.0;
  double theta = 0.0;
  double x_theta = 0.0;
};

// Finite cover of the suspension by product boxes: a uniform grid of base
// cells, each carrying height sheets spaced below the local roof.  Bump
// weights in box coordinates give a smooth partition of unity whose flow
// derivative is available in closed form.
class FlowBoxCover {
 public:
  FlowBoxCover(const SuspensionModel& m, double eps0, double wt);

  std::size_t size() const { return boxes_.size(); }
  const FlowBox& box(std::size_t i) const { return boxes_[i]; }
  const SuspensionModel& model() const { return model_; }
  int grid_side() const { return n_side_; }

  // All boxes with psi > 0 at y, sorted by box index, with theta and X theta
  // filled in.  Throws if the bump sum vanishes (point not covered).
  std::vector<ActiveBox> active(const SuspensionState& y) const;

  // Bump sum at y; returns 0 when no box is active.
  double psi_sum(const SuspensionState& y) const;

  // Minimum bump sum over a dense sample grid; positive means the cover has
  // no holes at that resolution.
  double min_psi_sum(int n_base, int n_levels) const;

 private:
  SuspensionModel model_;
  double eps0_;
  double wt_;
  int n_side_ = 0;
  int rings_ = 1;
  std::vector<FlowBox> boxes_;
  std::vector<std::vector<std::size_t>> cell_boxes_;  // row-major n_side^2 lists

  void collect_candidates(const Eigen::Vector2d& base, std::vector<std::size_t>& out) const;
};

}  // namespace axray::catflow
