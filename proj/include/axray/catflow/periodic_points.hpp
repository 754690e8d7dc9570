#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "axray/catflow/suspension.hpp"

namespace axray::catflow {

// Point of the torus with exact rational coordinates (nx/den, ny/den),
// reduced so gcd(nx, ny, den) = 1, coordinates in [0, 1).
struct RationalPoint {
  std::int64_t nx = 0;
  std::int64_t ny = 0;
  std::int64_t den = 1;

  Eigen::Vector2d to_double() const {
    return {static_cast<double>(nx) / static_cast<double>(den),
            static_cast<double>(ny) / static_cast<double>(den)};
  }
  friend bool operator==(const RationalPoint&, const RationalPoint&) = default;
  friend bool operator<(const RationalPoint& a, const RationalPoint& b) {
    // order by numeric value, exact: nx/den vs b: cross-multiplied
    const __int128 lx = static_cast<__int128>(a.nx) * b.den,
                   rx = static_cast<__int128>(b.nx) * a.den;
    if (lx != rx) return lx < rx;
    return static_cast<__int128>(a.ny) * b.den < static_cast<__int128>(b.ny) * a.den;
  }
};

// Number of fixed points of the n-th iterate, |det(A^n - I)|; exact integer.
std::int64_t fixed_point_count(const SuspensionModel& m, int n);

// All fixed points of the n-th iterate, exact rationals via the Smith normal
// form of A^n - I. Verified (integer arithmetic) to satisfy A^n z = z mod 1.
// Throws when intermediate integers would overflow (guard n <= 40).
std::vector<RationalPoint> periodic_points(const SuspensionModel& m, int n);

// Closed orbit of the suspension over a periodic base cycle.
struct PeriodicOrbit {
  std::vector<RationalPoint> cycle;  // exact A-orbit, lexicographically least first
  int base_period = 0;               // cycle length
  double period = 0.0;               // Birkhoff sum of the roof over the cycle

  // Position at time t from (cycle[0], 0); piecewise evaluation through the
  // stored cycle, no repeated matrix application.
  SuspensionState state_at(const SuspensionModel& m, double t) const;
};

// Streams every fixed point of the n-th iterate without materializing the
// family; same exactness guarantees as periodic_points.
void for_each_periodic_point(const SuspensionModel& m, int n,
                             const std::function<void(const RationalPoint&)>& fn);

// Streams each distinct closed orbit of period <= max_period exactly once
// (the representative whose lexicographically least point leads). `shard`
// of `n_shards` partitions the enumeration deterministically for threading;
// the single-shard call visits orbits in a fixed order.
void for_each_orbit(const SuspensionModel& m, double max_period,
                    const std::function<void(const PeriodicOrbit&)>& fn,
                    int shard = 0, int n_shards = 1);

// All distinct closed orbits with period <= max_period (roof-weighted length),
// sorted by (period, first point). Materializes; meant for moderate horizons.
std::vector<PeriodicOrbit> enumerate_orbits(const SuspensionModel& m, double max_period);

}  // namespace axray::catflow
