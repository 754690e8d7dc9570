#include "axray/catflow/flow_boxes.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace axray::catflow {

double bump(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_deriv(double s) {
  const double q = 1.0 - s * s;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-2.0 * s) / (q * q);
}

FlowBoxCover::FlowBoxCover(const SuspensionModel& m, double eps0, double wt)
    : model_(m), eps0_(eps0), wt_(wt) {
  if (eps0 <= 0.0 || eps0 > 0.25) throw std::invalid_argument("FlowBoxCover: eps0 out of range");
  if (wt <= 0.0 || wt >= m.min_roof() / 2.0)
    throw std::invalid_argument("FlowBoxCover: wt too large for the roof");

  Eigen::Matrix2d frame;
  frame.col(0) = m.unstable_dir();
  frame.col(1) = m.stable_dir();
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(frame);
  const double fmax = svd.singularValues()(0);
  const double fmin = svd.singularValues()(1);

  // Cell side small enough that any base offset within a cell stays inside
  // three quarters of the transversal halfwidths in frame coordinates.
  const double h_max = 0.75 * eps0 * fmin * std::sqrt(2.0) / 1.0;
  n_side_ = std::max(4, static_cast<int>(std::ceil(1.0 / h_max)));
  const double h = 1.0 / n_side_;

  // Neighborhood rings wide enough to reach every center a point can touch.
  const double reach = fmax * std::sqrt(2.0) * eps0;
  rings_ = std::max(1, static_cast<int>(std::floor(reach / h)) + 1);

  boxes_.clear();
  cell_boxes_.assign(static_cast<std::size_t>(n_side_) * n_side_, {});
  for (int i = 0; i < n_side_; ++i) {
    for (int j = 0; j < n_side_; ++j) {
      const Eigen::Vector2d base((i + 0.5) * h, (j + 0.5) * h);
      const double r = model_.roof(base);
      // Sheets spaced so that along the flow the nearest sheet, in this or an
      // adjacent fiber, sits within three quarters of wt.
      const int levels = std::max(1, static_cast<int>(std::ceil(r / (1.2 * wt_))));
      const double spacing = r / levels;
      auto& list = cell_boxes_[static_cast<std::size_t>(i) * n_side_ + j];
      for (int k = 0; k < levels; ++k) {
        list.push_back(boxes_.size());
        boxes_.push_back(FlowBox{SuspensionState{base, (k + 0.5) * spacing}, eps0_, eps0_, wt_});
      }
    }
  }
}

void FlowBoxCover::collect_candidates(const Eigen::Vector2d& base,
                                      std::vector<std::size_t>& out) const {
  const int ci = static_cast<int>(std::floor(base(0) * n_side_));
  const int cj = static_cast<int>(std::floor(base(1) * n_side_));
  for (int di = -rings_; di <= rings_; ++di) {
    for (int dj = -rings_; dj <= rings_; ++dj) {
      const int ii = ((ci + di) % n_side_ + n_side_) % n_side_;
      const int jj = ((cj + dj) % n_side_ + n_side_) % n_side_;
      const auto& list = cell_boxes_[static_cast<std::size_t>(ii) * n_side_ + jj];
      out.insert(out.end(), list.begin(), list.end());
    }
  }
}

std::vector<ActiveBox> FlowBoxCover::active(const SuspensionState& y) const {
  std::vector<std::size_t> cand;
  cand.reserve(128);
  collect_candidates(y.base, cand);
  collect_candidates(wrap01(model_.matrix() * y.base), cand);
  collect_candidates(wrap01(model_.matrix_inv() * y.base), cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::vector<ActiveBox> act;
  double psum = 0.0;
  double dsum = 0.0;
  for (std::size_t idx : cand) {
    const FlowBox& b = boxes_[idx];
    const TransversalCoords loc = locate_in_box(model_, b.center, y, b.wu, b.wv, b.wt);
    if (!loc.inside) continue;
    const double pu = bump(loc.u / b.wu);
    const double pv = bump(loc.v / b.wv);
    const double pt = bump(loc.t / b.wt);
    const double psi = pu * pv * pt;
    if (psi <= 0.0) continue;
    ActiveBox a;
    a.index = idx;
    a.u = loc.u;
    a.v = loc.v;
    a.t = loc.t;
    // Landing point: flow y for time t; its base in the center's fiber.
    a.proj_base = wrap01(b.center.base + model_.from_frame(Eigen::Vector2d(loc.u, loc.v)));
    a.psi = psi;
    // Along the flow u and v are frozen and t decreases at unit rate.
    a.dpsi = pu * pv * bump_deriv(loc.t / b.wt) * (-1.0 / b.wt);
    act.push_back(a);
    psum += psi;
    dsum += a.dpsi;
  }
  if (act.empty() || psum <= 0.0)
    throw std::runtime_error("FlowBoxCover: point not covered by any box");
  for (ActiveBox& a : act) {
    a.theta = a.psi / psum;
    a.x_theta = (a.dpsi * psum - a.psi * dsum) / (psum * psum);
  }
  return act;
}

double FlowBoxCover::psi_sum(const SuspensionState& y) const {
  std::vector<std::size_t> cand;
  cand.reserve(128);
  collect_candidates(y.base, cand);
  collect_candidates(wrap01(model_.matrix() * y.base), cand);
  collect_candidates(wrap01(model_.matrix_inv() * y.base), cand);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  double psum = 0.0;
  for (std::size_t idx : cand) {
    const FlowBox& b = boxes_[idx];
    const TransversalCoords loc = locate_in_box(model_, b.center, y, b.wu, b.wv, b.wt);
    if (!loc.inside) continue;
    psum += bump(loc.u / b.wu) * bump(loc.v / b.wv) * bump(loc.t / b.wt);
  }
  return psum;
}

double FlowBoxCover::min_psi_sum(int n_base, int n_levels) const {
  double mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_base; ++i) {
    for (int j = 0; j < n_base; ++j) {
      const Eigen::Vector2d base((i + 0.5) / n_base, (j + 0.5) / n_base);
      const double r = model_.roof(base);
      for (int k = 0; k < n_levels; ++k) {
        const double hgt = r * (k + 0.5) / n_levels;
        mn = std::min(mn, psi_sum(SuspensionState{base, hgt}));
      }
    }
  }
  return mn;
}

}  // namespace axray::catflow
