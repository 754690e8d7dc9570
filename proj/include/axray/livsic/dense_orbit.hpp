#pragma once

#include <axray/catflow/periodic_points.hpp>
#include <axray/catflow/shadowing.hpp>
#include <axray/catflow/suspension.hpp>

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace axray::livsic {

using catflow::PeriodicOrbit;
using catflow::ShadowResult;
using catflow::SuspensionModel;
using catflow::SuspensionState;

// greedy point selection exceeded its point budget; the construction's
// constants are off for this model
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two shortest distinct closed orbits plus the transversal intersection data
// of their invariant manifolds.  The connecting orbits are carried in exact
// eigencoordinates: the point of W^u(p1) cap W^s(p2) is
//   cycle1[0] + t_minus * e_u  ==  cycle2[0] + s_minus * e_s  (mod Z^2)
// and similarly with the roles swapped for the plus connector.
struct AnchorPair {
  PeriodicOrbit p1, p2;
  double t_minus = 0.0;  // unstable coefficient at p1
  double s_minus = 0.0;  // stable coefficient at p2
  double t_plus = 0.0;   // unstable coefficient at p2
  double s_plus = 0.0;   // stable coefficient at p1
};

AnchorPair find_anchors(const SuspensionModel& m);

struct DenseOrbitParams {
  double kappa = 0.25;          // requested density of the leading piece
  double jump_bound = 0.16;     // gluing tolerance handed to shadow()
  int grid_n = 24;              // coverage grid, per torus axis
  int grid_levels = 6;          // coverage grid, heights per base cell
  double sample_dt = 0.05;      // orbit sampling step for measurements
  std::size_t max_points = 0;   // greedy budget; 0 = 4 * eps^{-1/3}
  bool spend_budget = false;    // keep adding segments past the coverage
                                // target until the period budget is used
};

struct DenseOrbitReport {
  ShadowResult orbit;        // the corrected closed orbit
  double epsilon = 0.0;
  double period = 0.0;
  double c1 = 0.0;           // segment length multiplier actually used
  std::size_t n_segments = 0;
  std::vector<SuspensionState> greedy_points;
  // measured on the orbit minus its final length-1 piece
  double realized_density = 0.0;
  // smallest transversal gap between distinct passes (capped at 0.25 when no
  // two passes come closer)
  double realized_separation = 0.0;
  // density radius achieved by the leading window alone
  double realized_kappa = 0.0;
};

// Builds a closed orbit of period <= eps^{-1/2} that fills the manifold at
// the measured density radius: per greedy point, a five-piece segment (tail
// descending from p1, connector from p2, the point's own window, connector
// back to p2, head climbing to p1) is glued cyclically by the shadowing
// solver.  Throws BudgetError when greedy selection exceeds its point
// budget and std::invalid_argument for eps outside (0, 0.05].
DenseOrbitReport build_dense_separated_orbit(const SuspensionModel& m, double eps,
                                             const DenseOrbitParams& params = {});

}  // namespace axray::livsic
