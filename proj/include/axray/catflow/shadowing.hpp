#pragma once

#include <vector>

#include "axray/catflow/suspension.hpp"

namespace axray::catflow {

// One leg of a pseudo-orbit: flow from `start` for `duration` time units.
// Consecutive legs may disagree at the junction by a small jump.
struct PseudoSegment {
  SuspensionState start;
  double duration = 0.0;
};

struct PseudoOrbit {
  std::vector<PseudoSegment> segments;
  bool periodic = true;  // last junction wraps to the first segment
};

// True orbit produced by the shadowing correction, stored structurally as the
// corrected base sequence: one entry per roof crossing. Long-time positions
// are reconstructed from the chain (one matrix step each), never by iterating
// the map from one seed, which would amplify roundoff like lambda^k.
struct ShadowResult {
  std::vector<Eigen::Vector2d> chain;   // corrected bases v_j, cyclic if periodic
  std::vector<double> chain_time;       // time of fiber entry j (chain_time[0] = 0)
  double period = 0.0;                  // total time around the chain (periodic case)
  bool periodic = true;

  std::vector<double> tau;              // per segment: true-orbit time of the segment start
  double max_gap = 0.0;                 // largest junction jump in the input
  double max_correction = 0.0;          // sup distance moved by the correction
  double constant_ratio = 0.0;          // max_correction / max_gap
  double theta_fit = 0.0;               // decay rate fitted from segment profiles
  double max_step_residual = 0.0;       // worst |A v_j - v_{j+1}| over the chain

  // distance between corrected orbit and each input segment, sampled per leg
  std::vector<std::vector<double>> segment_profile;
  std::vector<double> segment_profile_dt;

  SuspensionState state_at(const SuspensionModel& m, double t) const;
};

// Shadowing glue: finds the true orbit tracking a pseudo-orbit whose junction
// jumps stay below jump_bound (throws otherwise). Periodic input yields a
// closed orbit; open input is corrected with free ends.
ShadowResult shadow(const SuspensionModel& m, const PseudoOrbit& chain, double jump_bound);

}  // namespace axray::catflow
