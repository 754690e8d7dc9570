#pragma once

#include "axray/hypflow/band_field.hpp"
#include "axray/hypflow/classes.hpp"

#include <cstdint>
#include <vector>

namespace axray::hypflow {

struct PairingResult {
  double value = 0.0;      // int_{-T}^{T} C(t) dt over centered fields
  double std_error = 0.0;  // batch-mean standard error across sample shards
  double tail = 0.0;       // max(|C(-T)|, |C(T)|), the truncation diagnostic
  double mean_f1 = 0.0;    // subtracted Monte Carlo means
  double mean_f2 = 0.0;
  bool centered = false;   // true when a nonzero mean was removed
  double t_max = 0.0;
  int n_samples = 0;
};

struct PairingOptions {
  double dt = 0.25;       // correlation time grid
  int n_shards = 16;      // batch-mean groups
  int threads = 0;        // 0 = automatic
};

// Monte Carlo estimate of int_{-T}^{T} <F1 o flow_t, F2> dt with respect to
// the Liouville measure. Both fields are centered by their Monte Carlo means
// over the shared sample set, so constants pair to exactly zero and the
// rank-one part of the correlation drops out. Same seed, same samples: the
// estimate is bilinear and symmetric up to the reported standard error.
PairingResult variance_pairing(const FuchsianGroup& group, const SurfaceField& f1,
                               const SurfaceField& f2, double t_max, int n_samples,
                               std::uint64_t seed = 1234, const PairingOptions& opts = {});

// Length-weighted orbit average: sum over classes of length <= T of
// e^l (1/l) int_gamma F, normalized by sum e^l. The unstable Jacobian over a
// period is e^l in curvature -1, so the weights are the classical counting
// weights and F = 1 returns exactly 1. Throws std::domain_error when no
// class fits under T.
double parry_average(const FuchsianGroup& group, const SurfaceField& field,
                     const std::vector<GeodesicClass>& classes, double T, int n_quad = 512,
                     int threads = 0);

}  // namespace axray::hypflow
