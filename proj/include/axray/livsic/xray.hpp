#pragma once

#include "axray/catflow/periodic_points.hpp"
#include "axray/catflow/shadowing.hpp"
#include "axray/catflow/suspension.hpp"
#include "axray/livsic/coboundary.hpp"
#include "axray/livsic/fields.hpp"

#include <cstddef>

namespace axray::livsic {

using catflow::PeriodicOrbit;
using catflow::ShadowResult;
using catflow::SuspensionModel;

// Time average of f over one period of a closed orbit, (1/l) int_0^l f.
// Values are independent of the point on the orbit the integral starts from.
double xray(const SuspensionModel& m, const FlowField& f, const PeriodicOrbit& orbit);
double xray(const SuspensionModel& m, const FlowField& f, const ShadowResult& orbit);

// Largest |xray(f)| over every closed orbit of period <= horizon.  Work is
// sharded over threads (0 = automatic); the max-merge makes the result
// independent of the shard layout.
double xray_sup(const SuspensionModel& m, const FlowField& f, double horizon,
                int threads = 0);

struct FiniteLivsicResult {
  double sup_if = 0.0;     // max |xray(f)| over the enumerated orbits
  double h_sup = 0.0;      // remainder sup, decomposition estimate folded with
                           // dense samples along every enumerated orbit
  double margin = 0.0;     // h_sup + tol - sup_if
  bool within_bound = false;
  std::size_t n_orbits = 0;
  double longest = 0.0;    // largest enumerated period
};

// Checks the finite-orbit bound: every closed-orbit average of f = Xu + h
// telescopes u away, so |xray(f)| can exceed neither sup|h| nor, a fortiori,
// the folded estimate.  fold_dt is the sampling step for |h| along each orbit.
FiniteLivsicResult finite_livsic_check(const SuspensionModel& m, const FlowField& f,
                                       const CoboundaryDecomposition& dec, double horizon,
                                       double tol = 1e-8, double fold_dt = 0.05,
                                       int threads = 0);

}  // namespace axray::livsic
