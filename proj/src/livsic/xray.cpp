#include "axray/livsic/xray.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace axray::livsic {

namespace {

int shard_count(int threads, std::size_t items) {
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = static_cast<int>(std::min(8u, std::max(1u, hw)));
  }
  const int cap = static_cast<int>(std::max<std::size_t>(1, items / 4));
  return std::min(threads, cap);
}

// deterministic parallel max of per-orbit values: max commutes, so the shard
// layout cannot change the result
template <typename PerOrbit>
double sharded_max(const std::vector<PeriodicOrbit>& orbits, int threads, PerOrbit fn) {
  const int n = shard_count(threads, orbits.size());
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
  auto work = [&](int shard) {
    double best = 0.0;
    for (std::size_t i = static_cast<std::size_t>(shard); i < orbits.size();
         i += static_cast<std::size_t>(n))
      best = std::max(best, fn(orbits[i]));
    partial[static_cast<std::size_t>(shard)] = best;
  };
  if (n == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) pool.emplace_back(work, s);
    for (auto& t : pool) t.join();
  }
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace

double xray(const SuspensionModel& m, const FlowField& f, const PeriodicOrbit& orbit) {
  if (!(orbit.period > 0.0)) throw std::invalid_argument("xray: orbit period must be positive");
  return f.flow_integral(m, orbit.state_at(m, 0.0), orbit.period) / orbit.period;
}

double xray(const SuspensionModel& m, const FlowField& f, const ShadowResult& orbit) {
  if (!(orbit.period > 0.0)) throw std::invalid_argument("xray: orbit period must be positive");
  return f.flow_integral(m, orbit.state_at(m, 0.0), orbit.period) / orbit.period;
}

double xray_sup(const SuspensionModel& m, const FlowField& f, double horizon, int threads) {
  const std::vector<PeriodicOrbit> orbits = catflow::enumerate_orbits(m, horizon);
  if (orbits.empty()) return 0.0;
  return sharded_max(orbits, threads,
                     [&](const PeriodicOrbit& po) { return std::abs(xray(m, f, po)); });
}

FiniteLivsicResult finite_livsic_check(const SuspensionModel& m, const FlowField& f,
                                       const CoboundaryDecomposition& dec, double horizon,
                                       double tol, double fold_dt, int threads) {
  if (!(fold_dt > 0.0)) throw std::invalid_argument("finite_livsic_check: fold_dt must be positive");
  const std::vector<PeriodicOrbit> orbits = catflow::enumerate_orbits(m, horizon);

  FiniteLivsicResult out;
  out.n_orbits = orbits.size();
  for (const auto& po : orbits) out.longest = std::max(out.longest, po.period);

  if (!orbits.empty()) {
    out.sup_if = sharded_max(orbits, threads,
                             [&](const PeriodicOrbit& po) { return std::abs(xray(m, f, po)); });
    const double folded = sharded_max(orbits, threads, [&](const PeriodicOrbit& po) {
      double best = 0.0;
      for (double t = 0.0; t < po.period; t += fold_dt)
        best = std::max(best, std::abs(dec.h(po.state_at(m, t))));
      return best;
    });
    out.h_sup = std::max(dec.norms().h_sup, folded);
  } else {
    out.h_sup = dec.norms().h_sup;
  }

  out.margin = out.h_sup + tol - out.sup_if;
  out.within_bound = out.sup_if <= out.h_sup + tol;
  return out;
}

}  // namespace axray::livsic
