#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace axray::catflow {

// Suspension flow over a hyperbolic toral automorphism x -> A x (mod 1) under
// the roof r(x) = 1 + a cos(2 pi x_1); unit vertical speed, jump to (A x, 0)
// at the roof. States keep 0 <= height < roof(base).
class SuspensionModel {
 public:
  // A = [[2,1],[1,1]], a = 0.1.
  SuspensionModel();
  SuspensionModel(const Eigen::Matrix2<std::int64_t>& A, double roof_amplitude);

  const Eigen::Matrix2<std::int64_t>& matrix_int() const { return ai_; }
  const Eigen::Matrix2d& matrix() const { return a_; }
  const Eigen::Matrix2d& matrix_inv() const { return a_inv_; }
  double roof_amplitude() const { return amp_; }

  double lambda() const { return lambda_; }       // expanding eigenvalue, > 1
  double expansion_rate() const { return theta_; } // log lambda
  const Eigen::Vector2d& unstable_dir() const { return e_u_; }
  const Eigen::Vector2d& stable_dir() const { return e_s_; }

  double roof(const Eigen::Vector2d& base) const;
  double min_roof() const { return 1.0 - amp_; }
  double max_roof() const { return 1.0 + amp_; }

  // Torus displacement resolved in the (unstable, stable) frame.
  Eigen::Vector2d to_frame(const Eigen::Vector2d& diff) const;
  Eigen::Vector2d from_frame(const Eigen::Vector2d& uv) const;

 private:
  Eigen::Matrix2<std::int64_t> ai_;
  Eigen::Matrix2d a_, a_inv_;
  double amp_;
  double lambda_, theta_;
  Eigen::Vector2d e_u_, e_s_;
  Eigen::Matrix2d frame_, frame_inv_;
};

struct SuspensionState {
  Eigen::Vector2d base = Eigen::Vector2d::Zero();
  double height = 0.0;
};

// Representative of x in [0,1)^2.
Eigen::Vector2d wrap01(const Eigen::Vector2d& x);

// Smallest representative of a - b on the torus, entries in [-1/2, 1/2).
Eigen::Vector2d torus_diff(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

double torus_dist(const Eigen::Vector2d& a, const Eigen::Vector2d& b);

struct FlowTrace {
  SuspensionState end;
  std::int64_t crossings = 0;  // roof crossings, negative when flowing backward
};

// Exact piecewise integration of the flow for any t (positive or negative).
FlowTrace flow_trace(const SuspensionModel& m, SuspensionState s, double t);
SuspensionState flow(const SuspensionModel& m, const SuspensionState& s, double t);

// Metric on the suspension: infimum over the direct fiber identification and
// the two single-crossing routes (through the roof upward or downward).
double dist(const SuspensionModel& m, const SuspensionState& a, const SuspensionState& b);

}  // namespace axray::catflow
