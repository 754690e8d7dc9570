#include "axray/livsic/coboundary.hpp"

#include "axray/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace axray::livsic {

namespace {

double wrap_pm(double v) { return v - std::round(v); }

// torus base metric; section points live on one sheet, so no height term
double base_dist(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::hypot(wrap_pm(a.x() - b.x()), wrap_pm(a.y() - b.y()));
}

// all data pairs within distance r0, as (|value gap|, distance); a spatial
// hash keeps this quadratic only within r0-cells
std::vector<std::pair<double, double>> near_pairs(const SuspensionModel& m,
                                                  const OrbitSamples& data, double r0) {
  const double cell = r0;
  const int nb = std::max(1, static_cast<int>(std::floor(1.0 / cell)));
  std::map<std::tuple<int, int, int>, std::vector<std::size_t>> buckets;
  auto key_of = [&](const SuspensionState& s) {
    const int ix = static_cast<int>(std::floor(s.base.x() * nb)) % nb;
    const int iy = static_cast<int>(std::floor(s.base.y() * nb)) % nb;
    const int iz = static_cast<int>(std::floor(s.height / cell));
    return std::make_tuple(ix, iy, iz);
  };
  for (std::size_t j = 0; j < data.state.size(); ++j)
    buckets[key_of(data.state[j])].push_back(j);

  std::vector<std::pair<double, double>> pairs;
  for (const auto& [key, members] : buckets) {
    const auto [ix, iy, iz] = key;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dz = -1; dz <= 1; ++dz) {
          const auto nkey = std::make_tuple((ix + dx + nb) % nb, (iy + dy + nb) % nb,
                                            iz + dz);
          const auto it = buckets.find(nkey);
          if (it == buckets.end()) continue;
          for (std::size_t j : members) {
            for (std::size_t l : it->second) {
              if (l <= j) continue;  // each unordered pair once
              const double d = catflow::dist(m, data.state[j], data.state[l]);
              if (d > r0 || d < 1e-9) continue;
              pairs.emplace_back(std::abs(data.value[j] - data.value[l]), d);
            }
          }
        }
      }
    }
  }
  return pairs;
}

double value_range(const OrbitSamples& data) {
  if (data.value.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(data.value.begin(), data.value.end());
  return *hi - *lo;
}

double constant_from_pairs(const std::vector<std::pair<double, double>>& pairs,
                           double range, double r0, double beta) {
  double k = range / std::pow(r0, beta);  // covers every pair farther than r0
  for (const auto& [dv, d] : pairs) k = std::max(k, dv / std::pow(d, beta));
  return k;
}

// per-box section points and carried values; see assemble_coboundary
struct SectionData {
  std::vector<std::vector<Eigen::Vector2d>> pts;
  std::vector<std::vector<double>> vals;
};

SectionData build_section_data(const SuspensionModel& m, const FlowField& f,
                               const OrbitSamples& data, const FlowBoxCover& cover) {
  SectionData sd;
  sd.pts.resize(cover.size());
  sd.vals.resize(cover.size());
  for (std::size_t j = 0; j < data.state.size(); ++j) {
    for (const auto& ab : cover.active(data.state[j])) {
      bool seen = false;
      for (const auto& q : sd.pts[ab.index]) {
        if (std::abs(wrap_pm(q.x() - ab.proj_base.x())) <= 1e-12 &&
            std::abs(wrap_pm(q.y() - ab.proj_base.y())) <= 1e-12) {
          seen = true;  // same pass through the box: one section point
          break;
        }
      }
      if (seen) continue;
      sd.pts[ab.index].push_back(ab.proj_base);
      sd.vals[ab.index].push_back(data.value[j] + f.flow_integral(m, data.state[j], ab.t));
    }
  }
  return sd;
}

// largest Hoelder quotient over same-box section pairs. The exponent must be
// fitted where the extensions live: distances along the flow blur transversal
// closeness, so a fit on raw orbit samples misses deep anchor passes entirely.
double section_constant(const SectionData& sd, double beta) {
  double k = 0.0;
  for (std::size_t i = 0; i < sd.pts.size(); ++i) {
    for (std::size_t j = 0; j < sd.pts[i].size(); ++j) {
      for (std::size_t l = j + 1; l < sd.pts[i].size(); ++l) {
        const double d = base_dist(sd.pts[i][j], sd.pts[i][l]);
        if (d < 1e-12) continue;
        k = std::max(k, std::abs(sd.vals[i][j] - sd.vals[i][l]) / std::pow(d, beta));
      }
    }
  }
  return k;
}

HolderFit fit_section_data(const SectionData& sd, double cap) {
  for (int i = 9; i >= 1; --i) {
    const double beta = 0.1 * i;
    const double k = section_constant(sd, beta);
    if (k <= cap) return HolderFit{beta, k};
  }
  std::ostringstream msg;
  msg << "section data admits no Hoelder exponent in [0.1, 0.9] under constant cap " << cap
      << " (constant at 0.1: " << section_constant(sd, 0.1) << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

double section_holder_constant(const SuspensionModel& m, const FlowField& f,
                               const OrbitSamples& data, const FlowBoxCover& cover,
                               double beta) {
  return section_constant(build_section_data(m, f, data, cover), beta);
}

HolderFit fit_section_holder(const SuspensionModel& m, const FlowField& f,
                             const OrbitSamples& data, const FlowBoxCover& cover,
                             double cap) {
  return fit_section_data(build_section_data(m, f, data, cover), cap);
}

double integrate_along_orbit(const SuspensionModel& m, const FlowField& f,
                             const SuspensionState& start, double t) {
  return f.flow_integral(m, start, t);
}

namespace {

template <typename Orbit>
OrbitSamples sample_impl(const SuspensionModel& m, const FlowField& f, const Orbit& orbit,
                         double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("orbit sampling step must be positive");
  if (!(orbit.period > 1.0 + dt))
    throw std::invalid_argument("generating orbit shorter than the data stretch");
  OrbitSamples out;
  out.period = orbit.period;
  double v = 0.0;
  SuspensionState prev{};
  for (double t = 0.0; t <= orbit.period - 1.0; t += dt) {
    const SuspensionState y = orbit.state_at(m, t);
    if (!out.t.empty()) v += f.flow_integral(m, prev, dt);
    out.t.push_back(t);
    out.state.push_back(y);
    out.value.push_back(v);
    prev = y;
  }
  return out;
}

}  // namespace

OrbitSamples sample_orbit_integral(const SuspensionModel& m, const FlowField& f,
                                   const ShadowResult& orbit, double dt) {
  return sample_impl(m, f, orbit, dt);
}

OrbitSamples sample_orbit_integral(const SuspensionModel& m, const FlowField& f,
                                   const PeriodicOrbit& orbit, double dt) {
  return sample_impl(m, f, orbit, dt);
}

double holder_constant(const SuspensionModel& m, const OrbitSamples& data, double r0,
                       double beta) {
  return constant_from_pairs(near_pairs(m, data, r0), value_range(data), r0, beta);
}

HolderFit fit_holder(const SuspensionModel& m, const OrbitSamples& data, double r0,
                     double cap) {
  const auto pairs = near_pairs(m, data, r0);
  const double range = value_range(data);
  for (int i = 9; i >= 1; --i) {
    const double beta = 0.1 * i;
    const double k = constant_from_pairs(pairs, range, r0, beta);
    if (k <= cap) return HolderFit{beta, k};
  }
  std::ostringstream msg;
  msg << "orbit data admits no Hoelder exponent in [0.1, 0.9] under constant cap " << cap
      << " (constant at 0.1: " << constant_from_pairs(pairs, range, r0, 0.1) << ")";
  throw std::runtime_error(msg.str());
}

SectionExtension::SectionExtension(std::vector<Eigen::Vector2d> pts,
                                   std::vector<double> vals, double beta, double k)
    : pts_(std::move(pts)), vals_(std::move(vals)), beta_(beta), k_(k) {
  for (std::size_t j = 0; j < pts_.size(); ++j) {
    for (std::size_t l = j + 1; l < pts_.size(); ++l) {
      const double d = base_dist(pts_[j], pts_[l]);
      const double gap = std::abs(vals_[j] - vals_[l]);
      const double slack = 1e-9 * (1.0 + std::abs(vals_[j]) + std::abs(vals_[l]));
      if (gap > k_ * std::pow(d, beta_) + slack) {
        std::ostringstream msg;
        msg << "section data violates the Hoelder bound: |" << vals_[j] << " - " << vals_[l]
            << "| > " << k_ << " * " << d << "^" << beta_ << " at points (" << pts_[j].x()
            << ", " << pts_[j].y() << ") / (" << pts_[l].x() << ", " << pts_[l].y() << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

double SectionExtension::operator()(const Eigen::Vector2d& p) const {
  if (pts_.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pts_.size(); ++j) {
    // snap roundtrip rounding to the stored point so data reproduces exactly
    double d = base_dist(p, pts_[j]);
    if (d < 1e-12) d = 0.0;
    best = std::max(best, vals_[j] - k_ * std::pow(d, beta_));
  }
  return best;
}

double CoboundaryDecomposition::u(const SuspensionState& y) const {
  double acc = 0.0;
  for (const auto& ab : cover_.active(y)) {
    const double ui = sections_[ab.index](ab.proj_base) - f_->flow_integral(m_, y, ab.t);
    acc += ab.theta * ui;
  }
  return acc;
}

double CoboundaryDecomposition::h(const SuspensionState& y) const {
  double acc = 0.0;
  for (const auto& ab : cover_.active(y)) {
    const double ui = sections_[ab.index](ab.proj_base) - f_->flow_integral(m_, y, ab.t);
    acc -= ab.x_theta * ui;
  }
  return acc;
}

CoboundaryDecomposition assemble_coboundary(const SuspensionModel& m,
                                            std::shared_ptr<const FlowField> f,
                                            const OrbitSamples& data,
                                            const FlowBoxCover& cover,
                                            const CoboundaryParams& params) {
  if (!f) throw std::invalid_argument("assemble_coboundary: null field");
  if (data.state.empty()) throw std::invalid_argument("assemble_coboundary: empty data");
  CoboundaryDecomposition dec(m, f, cover);

  SectionData sd = build_section_data(m, *f, data, cover);
  auto& pts = sd.pts;
  auto& vals = sd.vals;

  if (params.force_beta > 0.0) {
    dec.beta_ = params.force_beta;
    dec.k_data_ =
        params.force_k > 0.0 ? params.force_k : section_constant(sd, params.force_beta);
  } else {
    const HolderFit fit = fit_section_data(sd, params.k_cap);
    dec.beta_ = fit.beta;
    dec.k_data_ = fit.constant;
  }

  // headroom over the measured constant; the bump loop is a safety net for
  // rounding at the validation slack. Per-box-constant data (constant zero)
  // extends exactly with k = 0, which keeps a zero field's decomposition zero.
  double k_ext = dec.k_data_ == 0.0 ? 0.0 : params.ext_headroom * dec.k_data_;
  for (int attempt = 0;; ++attempt) {
    try {
      dec.sections_.clear();
      dec.sections_.reserve(dec.cover_.size());
      for (std::size_t i = 0; i < dec.cover_.size(); ++i)
        dec.sections_.emplace_back(pts[i], vals[i], dec.beta_, k_ext);
      break;
    } catch (const std::invalid_argument&) {
      if (attempt >= 60) throw;
      k_ext *= 1.5;
    }
  }
  dec.k_ext_ = k_ext;

  // norm estimates from seeded random states plus log-spaced near pairs
  {
    Rng rng(derive_stream(params.norm_seed, "coboundary-norms"));
    double u_lo = std::numeric_limits<double>::infinity(), u_hi = -u_lo;
    double h_lo = u_lo, h_hi = -u_lo;
    auto random_state = [&]() {
      const Eigen::Vector2d b(rng.next_double(), rng.next_double());
      return SuspensionState{b, rng.next_double() * m.roof(b)};
    };
    for (int s = 0; s < params.norm_samples; ++s) {
      const SuspensionState y = random_state();
      const double uy = dec.u(y), hy = dec.h(y);
      u_lo = std::min(u_lo, uy), u_hi = std::max(u_hi, uy);
      h_lo = std::min(h_lo, hy), h_hi = std::max(h_hi, hy);
      dec.norms_.u_sup = std::max(dec.norms_.u_sup, std::abs(uy));
      dec.norms_.h_sup = std::max(dec.norms_.h_sup, std::abs(hy));
    }
    double u_quot = (u_hi - u_lo) / std::pow(params.r0, dec.beta_);
    double h_quot = (h_hi - h_lo) / std::pow(params.r0, dec.beta_);
    for (int s = 0; s < params.norm_samples / 2; ++s) {
      const SuspensionState y1 = random_state();
      const double rho = params.r0 * std::pow(10.0, -2.0 * rng.next_double());
      const double phi = 2.0 * M_PI * rng.next_double();
      const double cz = 2.0 * rng.next_double() - 1.0;
      const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
      Eigen::Vector2d b2 = y1.base + rho * sz * Eigen::Vector2d(std::cos(phi), std::sin(phi));
      b2.x() -= std::floor(b2.x());
      b2.y() -= std::floor(b2.y());
      const double r2 = m.roof(b2);
      const double h2 = std::clamp(y1.height + rho * cz, 0.0, r2 * (1.0 - 1e-9));
      const SuspensionState y2{b2, h2};
      const double d = catflow::dist(m, y1, y2);
      if (d < 1e-6 || d > params.r0) continue;
      u_quot = std::max(u_quot, std::abs(dec.u(y1) - dec.u(y2)) / std::pow(d, dec.beta_));
      h_quot = std::max(h_quot, std::abs(dec.h(y1) - dec.h(y2)) / std::pow(d, dec.beta_));
    }
    dec.norms_.u_holder = u_quot;
    dec.norms_.h_holder = h_quot;
    dec.norms_.h_interp =
        std::sqrt(dec.norms_.h_sup * (dec.norms_.h_sup + dec.norms_.h_holder));
  }

  // on-orbit diagnostic: refine each data interval down to diag_dt
  {
    const int refine =
        std::max(1, static_cast<int>(std::llround(params.sample_dt / params.diag_dt)));
    double worst = 0.0;
    for (std::size_t j = 0; j < data.state.size(); ++j) {
      for (int k = 0; k < refine; ++k) {
        const SuspensionState y =
            k == 0 ? data.state[j]
                   : catflow::flow(m, data.state[j], k * params.diag_dt);
        worst = std::max(worst, std::abs(dec.h(y)));
      }
    }
    dec.max_h_orbit_ = worst;
  }

  return dec;
}

}  // namespace axray::livsic
