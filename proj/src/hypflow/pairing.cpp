#include "axray/hypflow/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace axray::hypflow {

namespace {

int pick_threads(int requested, int work) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  const int cap = hw == 0 ? 4 : static_cast<int>(hw);
  return std::max(1, std::min(cap, work));
}

// Accumulated raw sums of one shard; correlation values are assembled after
// the global means are known, so a single pass suffices.
struct ShardSums {
  std::vector<double> f1_flow;      // sum_j F1(flow_{t_k} s_j), index k
  std::vector<double> cross;        // sum_j F1(flow_{t_k} s_j) F2(s_j)
  double f2 = 0.0;                  // sum_j F2(s_j)
  int n = 0;
};

}  // namespace

PairingResult variance_pairing(const FuchsianGroup& group, const SurfaceField& f1,
                               const SurfaceField& f2, double t_max, int n_samples,
                               std::uint64_t seed, const PairingOptions& opts) {
  if (!(t_max > 0)) throw std::invalid_argument("variance_pairing: t_max must be > 0");
  if (!(opts.dt > 0) || opts.dt > t_max)
    throw std::invalid_argument("variance_pairing: need 0 < dt <= t_max");
  if (opts.n_shards < 2) throw std::invalid_argument("variance_pairing: need >= 2 shards");
  if (n_samples < 2 * opts.n_shards)
    throw std::invalid_argument("variance_pairing: need >= 2 samples per shard");

  const int K = static_cast<int>(std::lround(t_max / opts.dt));
  const double dt = opts.dt;
  const int n_grid = 2 * K + 1;  // t_k = (k - K) dt, k = 0..2K
  const int S = opts.n_shards;

  std::vector<ShardSums> shards(static_cast<size_t>(S));
  const int threads = pick_threads(opts.threads, S);
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t)
    workers.emplace_back([&, t]() {
      for (int s = t; s < S; s += threads) {
        ShardSums& sums = shards[static_cast<size_t>(s)];
        sums.f1_flow.assign(static_cast<size_t>(n_grid), 0.0);
        sums.cross.assign(static_cast<size_t>(n_grid), 0.0);
        sums.n = n_samples / S + (s < n_samples % S ? 1 : 0);
        Rng rng(derive_stream(seed, "pairing-shard-" + std::to_string(s)));
        const std::vector<Mat2> states = liouville_samples(group, sums.n, rng);
        for (const Mat2& s0 : states) {
          const double v2 = f2(s0);
          sums.f2 += v2;
          // walk the flow outward from t = 0 in both directions
          Mat2 fwd = s0, bwd = s0;
          for (int k = 0; k <= K; ++k) {
            if (k > 0) {
              fwd = group.reduce(Mat2(fwd * flow_translation(dt)));
              bwd = group.reduce(Mat2(bwd * flow_translation(-dt)));
            }
            const double vf = f1(fwd);
            sums.f1_flow[static_cast<size_t>(K + k)] += vf;
            sums.cross[static_cast<size_t>(K + k)] += vf * v2;
            if (k > 0) {
              const double vb = f1(bwd);
              sums.f1_flow[static_cast<size_t>(K - k)] += vb;
              sums.cross[static_cast<size_t>(K - k)] += vb * v2;
            }
          }
        }
      }
    });
  for (auto& w : workers) w.join();

  // Global Monte Carlo means; F1's from the t = 0 column.
  double sum_f1 = 0.0, sum_f2 = 0.0;
  for (const ShardSums& s : shards) {
    sum_f1 += s.f1_flow[static_cast<size_t>(K)];
    sum_f2 += s.f2;
  }
  const double mu1 = sum_f1 / n_samples, mu2 = sum_f2 / n_samples;

  // Centered correlation per shard, trapezoid over the t grid.
  auto shard_value = [&](const ShardSums& s) {
    double integral = 0.0;
    for (int k = 0; k < n_grid; ++k) {
      const double c = (s.cross[static_cast<size_t>(k)] -
                        mu1 * s.f2 -
                        mu2 * s.f1_flow[static_cast<size_t>(k)] +
                        static_cast<double>(s.n) * mu1 * mu2) /
                       s.n;
      const double w = (k == 0 || k == n_grid - 1) ? 0.5 : 1.0;
      integral += w * c * dt;
    }
    return integral;
  };
  std::vector<double> values(static_cast<size_t>(S));
  double value = 0.0;
  for (int s = 0; s < S; ++s) {
    values[static_cast<size_t>(s)] = shard_value(shards[static_cast<size_t>(s)]);
    value += values[static_cast<size_t>(s)] * shards[static_cast<size_t>(s)].n;
  }
  value /= n_samples;
  double var = 0.0;
  for (double v : values) var += (v - value) * (v - value);
  const double std_error = std::sqrt(var / (S - 1)) / std::sqrt(static_cast<double>(S));

  auto tail_at = [&](int k) {
    double c = 0.0;
    for (const ShardSums& s : shards)
      c += s.cross[static_cast<size_t>(k)] - mu1 * s.f2 -
           mu2 * s.f1_flow[static_cast<size_t>(k)] + static_cast<double>(s.n) * mu1 * mu2;
    return std::abs(c / n_samples);
  };

  PairingResult out;
  out.value = value;
  out.std_error = std_error;
  out.tail = std::max(tail_at(0), tail_at(n_grid - 1));
  out.mean_f1 = mu1;
  out.mean_f2 = mu2;
  out.centered = std::max(std::abs(mu1), std::abs(mu2)) > 1e-12;
  out.t_max = K * dt;
  out.n_samples = n_samples;
  return out;
}

double parry_average(const FuchsianGroup& group, const SurfaceField& field,
                     const std::vector<GeodesicClass>& classes, double T, int n_quad,
                     int threads) {
  if (!(T > 0)) throw std::invalid_argument("parry_average: T must be > 0");
  std::vector<const GeodesicClass*> kept;
  for (const GeodesicClass& c : classes)
    if (c.length <= T) kept.push_back(&c);
  if (kept.empty()) throw std::domain_error("parry_average: no classes of length <= T");

  std::vector<double> averages(kept.size());
  const int n_threads = pick_threads(threads, static_cast<int>(kept.size()));
  std::vector<std::thread> workers;
  for (int t = 0; t < n_threads; ++t)
    workers.emplace_back([&, t]() {
      for (size_t i = static_cast<size_t>(t); i < kept.size(); i += static_cast<size_t>(n_threads))
        averages[i] = xray_class(group, field, *kept[i], n_quad);
    });
  for (auto& w : workers) w.join();

  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < kept.size(); ++i) {
    const double w = std::exp(kept[i]->length);
    num += w * averages[i];
    den += w;
  }
  return num / den;
}

}  // namespace axray::hypflow
