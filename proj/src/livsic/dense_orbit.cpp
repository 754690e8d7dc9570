#include "axray/livsic/dense_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace axray::livsic {

using catflow::enumerate_orbits;
using catflow::flow;
using catflow::PeriodicOrbit;
using catflow::PseudoOrbit;
using catflow::PseudoSegment;
using catflow::RationalPoint;
using catflow::ShadowResult;
using catflow::torus_dist;
using catflow::wrap01;

namespace {

constexpr double kAnchorClose = 0.045;  // admissible distance to an anchor at a handoff

Eigen::Vector2d lattice_shift(int kx, int ky) {
  return Eigen::Vector2d(static_cast<double>(kx), static_cast<double>(ky));
}

// q_from + t e_u == q_to + s e_s modulo the lattice, minimizing max(|t|, |s|).
void solve_heteroclinic(const SuspensionModel& m, const Eigen::Vector2d& q_from,
                        const Eigen::Vector2d& q_to, double& t_out, double& s_out) {
  double best = std::numeric_limits<double>::infinity();
  for (int kx = -2; kx <= 2; ++kx) {
    for (int ky = -2; ky <= 2; ++ky) {
      const Eigen::Vector2d uv = m.to_frame(q_to - q_from + lattice_shift(kx, ky));
      const double t = uv.x(), s = -uv.y();
      if (std::abs(t) < 1e-12 || std::abs(s) < 1e-12) continue;
      const double score = std::max(std::abs(t), std::abs(s));
      if (score < best - 1e-15) {
        best = score;
        t_out = t;
        s_out = s;
      }
    }
  }
  if (!std::isfinite(best)) throw std::runtime_error("heteroclinic intersection not found");
}

// integer inverse of the base matrix; valid because |det| = 1
Eigen::Matrix2<std::int64_t> int_inverse(const Eigen::Matrix2<std::int64_t>& a) {
  const std::int64_t det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  Eigen::Matrix2<std::int64_t> inv;
  inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
  return det * inv;
}

RationalPoint rat_apply(const Eigen::Matrix2<std::int64_t>& mat, const RationalPoint& p) {
  auto mod_pos = [](std::int64_t v, std::int64_t d) {
    v %= d;
    return v < 0 ? v + d : v;
  };
  RationalPoint out;
  out.den = p.den;
  out.nx = mod_pos(mat(0, 0) * p.nx + mat(0, 1) * p.ny, p.den);
  out.ny = mod_pos(mat(1, 0) * p.nx + mat(1, 1) * p.ny, p.den);
  return out;
}

struct PieceReal {
  Eigen::Vector2d start = Eigen::Vector2d::Zero();
  int crossings = 0;
  double duration = 0.0;
  std::vector<Eigen::Vector2d> bases;  // realized fiber bases, bases[0] = start
};

// Iterates the base map in the same arithmetic as the flow, so the planned
// duration lands exactly on the final crossing.
PieceReal realize_piece(const SuspensionModel& m, const Eigen::Vector2d& start, int k) {
  PieceReal out;
  out.start = start;
  out.crossings = k;
  out.bases.reserve(static_cast<std::size_t>(k));
  Eigen::Vector2d b = start;
  for (int i = 0; i < k; ++i) {
    out.bases.push_back(b);
    out.duration += m.roof(b);
    b = wrap01(m.matrix() * b);
  }
  return out;
}

struct ConnectorShot {
  Eigen::Vector2d start = Eigen::Vector2d::Zero();
  double gap = 0.0;       // predicted transversal junction gap
  double residual = 0.0;  // coefficient that must still contract toward the anchor
};

// Start near anchor + coef e_dir so that after k crossings the orbit passes the
// target up to a gap along the complementary direction; the lattice shift is
// chosen to make that gap smallest subject to the anchor-closeness cap.
ConnectorShot aim_connector(const SuspensionModel& m, const Eigen::Vector2d& anchor_end,
                            const Eigen::Vector2d& anchor_start, const Eigen::Vector2d& target,
                            double lambda_k, double close_cap, bool leave_along_unstable,
                            double gap_cap) {
  ConnectorShot best;
  best.gap = std::numeric_limits<double>::infinity();
  for (int reach = 25; reach <= 200; reach *= 2) {
    for (int kx = -reach; kx <= reach; ++kx) {
      for (int ky = -reach; ky <= reach; ++ky) {
        const Eigen::Vector2d uv = m.to_frame(target - anchor_end + lattice_shift(kx, ky));
        // the coefficient along the departing direction sits at the anchor end
        // of the connector and contracts by lambda_k; the transversal part is
        // the junction gap against the target
        const double along = leave_along_unstable ? uv.x() : uv.y();
        const double gap = leave_along_unstable ? uv.y() : uv.x();
        if (std::abs(along) > close_cap * lambda_k) continue;
        if (std::abs(gap) < best.gap - 1e-15) {
          best.gap = std::abs(gap);
          best.residual = std::abs(along) / lambda_k;
          const Eigen::Vector2d dir = leave_along_unstable ? m.unstable_dir() : m.stable_dir();
          // an unstable departure starts contracted and expands onto the
          // target; a stable departure starts at the target side and contracts
          const double start_coef = leave_along_unstable ? along / lambda_k : along;
          best.start = wrap01(anchor_start + start_coef * dir);
        }
      }
    }
    if (best.gap <= gap_cap) break;
  }
  if (!(best.gap <= gap_cap))
    throw std::runtime_error("connector aim failed: best gap " + std::to_string(best.gap) +
                             " exceeds cap " + std::to_string(gap_cap));
  return best;
}

struct CoverageGrid {
  std::vector<SuspensionState> pts;
  std::vector<double> min_dist;

  CoverageGrid(const SuspensionModel& m, int n, int levels) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Eigen::Vector2d b((i + 0.5) / n, (j + 0.5) / n);
        const double r = m.roof(b);
        for (int l = 0; l < levels; ++l)
          pts.push_back(SuspensionState{b, (l + 0.5) * r / levels});
      }
    }
    min_dist.assign(pts.size(), std::numeric_limits<double>::infinity());
  }

  void absorb(const SuspensionModel& m, const std::vector<SuspensionState>& samples) {
    for (std::size_t g = 0; g < pts.size(); ++g) {
      double& cur = min_dist[g];
      for (const auto& s : samples) cur = std::min(cur, catflow::dist(m, pts[g], s));
    }
  }

  double radius() const { return *std::max_element(min_dist.begin(), min_dist.end()); }

  std::size_t argmax() const {
    std::size_t best = 0;
    for (std::size_t g = 1; g < min_dist.size(); ++g)
      if (min_dist[g] > min_dist[best]) best = g;
    return best;
  }
};

std::vector<SuspensionState> piece_samples(const SuspensionModel& m, const PieceReal& piece,
                                           double dh) {
  std::vector<SuspensionState> out;
  for (const auto& b : piece.bases) {
    const double r = m.roof(b);
    const int nh = std::max(1, static_cast<int>(std::ceil(r / dh)));
    for (int k = 0; k < nh; ++k) out.push_back(SuspensionState{b, (k + 0.5) * r / nh});
  }
  return out;
}

}  // namespace

AnchorPair find_anchors(const SuspensionModel& m) {
  double horizon = 1.6 * m.max_roof();
  std::vector<PeriodicOrbit> orbs = enumerate_orbits(m, horizon);
  for (int tries = 0; tries < 8 && orbs.size() < 2; ++tries) {
    horizon *= 1.7;
    orbs = enumerate_orbits(m, horizon);
  }
  if (orbs.size() < 2) throw std::runtime_error("fewer than two closed orbits below the horizon");
  AnchorPair ap;
  ap.p1 = orbs[0];
  ap.p2 = orbs[1];
  const Eigen::Vector2d q1 = ap.p1.cycle[0].to_double();
  const Eigen::Vector2d q2 = ap.p2.cycle[0].to_double();
  solve_heteroclinic(m, q1, q2, ap.t_minus, ap.s_minus);
  solve_heteroclinic(m, q2, q1, ap.t_plus, ap.s_plus);
  return ap;
}

DenseOrbitReport build_dense_separated_orbit(const SuspensionModel& m, double eps,
                                             const DenseOrbitParams& params) {
  if (!(eps > 0.0) || eps > 0.05)
    throw std::invalid_argument("build_dense_separated_orbit: eps outside (0, 0.05]");

  const AnchorPair ap = find_anchors(m);
  const double lam = m.lambda();
  const double det = static_cast<double>(m.matrix_int()(0, 0) * m.matrix_int()(1, 1) -
                                          m.matrix_int()(0, 1) * m.matrix_int()(1, 0));
  const double mu = det / lam;  // contracting eigenvalue, |mu| = 1/lam
  const Eigen::Matrix2<std::int64_t> inv_int = int_inverse(m.matrix_int());
  const int n1 = ap.p1.base_period, n2 = ap.p2.base_period;
  auto cyc1 = [&](int i) {
    return ap.p1.cycle[static_cast<std::size_t>(((i % n1) + n1) % n1)].to_double();
  };
  auto cyc2 = [&](int i) {
    return ap.p2.cycle[static_cast<std::size_t>(((i % n2) + n2) % n2)].to_double();
  };

  const double budget = std::pow(eps, -0.5);
  const double big_l = -std::log(eps);
  const std::size_t max_points =
      params.max_points > 0
          ? params.max_points
          : static_cast<std::size_t>(std::ceil(4.0 * std::pow(eps, -1.0 / 3.0)));

  // shared anchor-piece extents
  auto contract_steps = [&](double coef, double tol) {
    int k = 1;
    while (std::abs(coef) * std::pow(std::abs(mu), k) > tol && k < 400) ++k;
    return k;
  };
  const int k_plus = contract_steps(ap.s_minus, kAnchorClose);
  const int j_h = contract_steps(ap.t_plus, kAnchorClose);
  const int j_t_min = contract_steps(ap.t_minus, eps);
  const int j_e_min = contract_steps(ap.s_plus, eps);

  // Connector shape: with k crossings the reachable lattice shifts form a
  // strip of width ~ cap * lambda^k around the departing direction, so the
  // smallest junction gap on offer scales like 1 / (4 cap lambda^k).  Two
  // crossings with a tight closeness cap give gaps well under the jump bound;
  // when the period budget cannot carry them, one crossing with a wider cap
  // still lands inside the bound and saves two fibers per segment.
  struct ConnConfig {
    int k_conn;
    double close_cap;
    int jw_min;
  };
  const ConnConfig conn_ladder[] = {{2, kAnchorClose, 1}, {1, 0.10, 0}};

  const int n_planned = std::max(1, static_cast<int>(std::floor(0.8 * budget / 12.0)));
  const double seg_cap = 0.97 * budget / n_planned;

  struct SegmentPieces {
    PieceReal tail, conn_a, window, conn_b, head;
    RationalPoint center;
    ConnConfig conf{2, kAnchorClose, 1};
    int j_w = 0;
    double time = 0.0;
  };

  // At a handoff whose arriving side still carries a stable coefficient, one
  // more crossing always contracts it, so the correction slides the junction
  // one fiber forward past the anchor.  Each segment therefore absorbs one
  // extra anchor fiber at tail->connector, connector->head and head->tail;
  // phases and the time budget below account for those three fibers.
  auto build_segment = [&](const RationalPoint& xb, const ConnConfig& conf, int j_t,
                           int j_e_raw, int jw) {
    SegmentPieces seg;
    seg.center = xb;
    seg.conf = conf;
    seg.j_w = jw;
    const double lam_conn = std::pow(lam, conf.k_conn);
    int j_e = j_e_raw;
    while ((j_e + 1 + j_t) % n1 != 0) ++j_e;  // head hands the next tail its phase
    const int win_crossings = std::max(1, 2 * jw);  // a window is at least one fiber
    RationalPoint w = xb;
    for (int i = 0; i < jw; ++i) w = rat_apply(inv_int, w);
    // connector into the window: leaves p2 along the unstable direction
    const ConnectorShot shot_a = aim_connector(
        m, cyc2(k_plus + 1 + conf.k_conn), cyc2(k_plus + 1), w.to_double(), lam_conn,
        conf.close_cap, /*leave_along_unstable=*/true, 0.8 * params.jump_bound);
    seg.window = realize_piece(m, w.to_double(), win_crossings);
    // connector out of the window: arrives near p2 along the stable direction.
    // It aims at the realized window end: the flow iterates the base map in
    // doubles, where each crossing amplifies rounding by lambda, so a deep
    // window drifts visibly off its rational plan while the realized end stays
    // the junction the shadowing step actually sees.
    Eigen::Vector2d xe = seg.window.bases.back();
    xe = wrap01(m.matrix() * xe);
    const int ph_b = ((-j_h - conf.k_conn - 1) % n2 + n2) % n2;
    const ConnectorShot shot_b =
        aim_connector(m, cyc2(ph_b), cyc2(ph_b), xe, lam_conn, conf.close_cap,
                      /*leave_along_unstable=*/false, 0.8 * params.jump_bound);
    const Eigen::Vector2d tail_start =
        wrap01(cyc1(-j_t) + ap.t_minus * std::pow(lam, -j_t) * m.unstable_dir());
    const Eigen::Vector2d head_start =
        wrap01(cyc2(-j_h) + ap.t_plus * std::pow(lam, -j_h) * m.unstable_dir());
    seg.tail = realize_piece(m, tail_start, j_t + k_plus);
    seg.conn_a = realize_piece(m, shot_a.start, conf.k_conn);
    seg.conn_b = realize_piece(m, shot_b.start, conf.k_conn);
    seg.head = realize_piece(m, head_start, j_h + j_e);
    seg.time = seg.tail.duration + seg.conn_a.duration + seg.window.duration +
               seg.conn_b.duration + seg.head.duration +
               m.roof(cyc2(k_plus + 1)) + m.roof(cyc2(-j_h)) + m.roof(cyc1(j_e + 1));
    return seg;
  };

  // Fit a segment under the per-segment time cap: start from an optimistic
  // crossing allocation and shed crossings until the realized time fits, then
  // fall back to the cheaper connector shape before giving up.
  auto build_fitted = [&](const RationalPoint& xb) {
    for (const ConnConfig& conf : conn_ladder) {
      const int fixed = k_plus + j_h + 2 * conf.k_conn;
      int spare = static_cast<int>(std::floor(seg_cap / m.min_roof())) - fixed - j_t_min -
                  j_e_min - 2 * conf.jw_min;
      spare = std::max(spare, 0);
      int jw_extra = spare / 4;
      int jt_extra = (spare - 2 * jw_extra) / 2;
      int je_extra = spare - 2 * jw_extra - jt_extra;
      while (true) {
        SegmentPieces seg = build_segment(xb, conf, j_t_min + jt_extra, j_e_min + je_extra,
                                          conf.jw_min + jw_extra);
        if (seg.time <= seg_cap) return seg;
        if (je_extra > 0)
          --je_extra;
        else if (jt_extra > 0)
          --jt_extra;
        else if (jw_extra > 0)
          --jw_extra;
        else
          break;
      }
    }
    throw BudgetError("one segment alone exceeds the period budget");
  };

  // greedy targets on the sampling grid; the first sits mid-manifold
  CoverageGrid grid(m, params.grid_n, params.grid_levels);
  const double target = 0.5 * std::pow(eps, 1.0 / 9.0);

  std::vector<SegmentPieces> segments;
  std::vector<SuspensionState> greedy_points;
  double total_time = 0.0;

  auto pick_target = [&]() {
    std::size_t gi;
    if (segments.empty()) {
      const SuspensionState mid{Eigen::Vector2d(0.5, 0.5), 0.45 * m.roof({0.5, 0.5})};
      gi = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < grid.pts.size(); ++g) {
        const double d = catflow::dist(m, grid.pts[g], mid);
        if (d < best) {
          best = d;
          gi = g;
        }
      }
    } else {
      gi = grid.argmax();
    }
    greedy_points.push_back(grid.pts[gi]);
    const Eigen::Vector2d b = grid.pts[gi].base;
    RationalPoint xb;
    xb.den = 2 * params.grid_n;
    xb.nx = static_cast<std::int64_t>(std::llround(b.x() * xb.den));
    xb.ny = static_cast<std::int64_t>(std::llround(b.y() * xb.den));
    const std::int64_t g = std::gcd(std::gcd(xb.nx, xb.ny), xb.den);
    xb.nx /= g;
    xb.ny /= g;
    xb.den /= g;
    return xb;
  };

  for (int s = 0; s < n_planned; ++s) {
    if (greedy_points.size() >= max_points)
      throw BudgetError("greedy target budget exhausted before coverage");
    const RationalPoint xb = pick_target();
    SegmentPieces seg = build_fitted(xb);
    total_time += seg.time;
    for (const auto* piece : {&seg.tail, &seg.conn_a, &seg.window, &seg.conn_b, &seg.head})
      grid.absorb(m, piece_samples(m, *piece, 0.1));
    segments.push_back(std::move(seg));
    if (!params.spend_budget && grid.radius() <= target) break;
  }

  // spend what is left of the budget widening the first window until it is
  // kappa/2-dense on its own or the budget runs out
  {
    auto window_radius = [&](const PieceReal& win) {
      CoverageGrid wg(m, params.grid_n, params.grid_levels);
      wg.absorb(m, piece_samples(m, win, 0.1));
      return wg.radius();
    };
    const SegmentPieces& first = segments.front();
    const int jw_cap = 2 * first.j_w + 3;
    const int j_t1 = first.tail.crossings - k_plus;
    const int j_e1 = first.head.crossings - j_h;
    for (int jw1 = first.j_w + 1; jw1 <= jw_cap; ++jw1) {
      if (window_radius(segments.front().window) <= 0.5 * params.kappa) break;
      SegmentPieces wider =
          build_segment(segments.front().center, segments.front().conf, j_t1, j_e1, jw1);
      if (total_time - segments.front().time + wider.time > 0.96 * budget) break;
      total_time += wider.time - segments.front().time;
      grid.absorb(m, piece_samples(m, wider.window, 0.1));
      segments.front() = std::move(wider);
    }
  }

  PseudoOrbit po;
  po.periodic = true;
  for (const auto& seg : segments) {
    for (const auto* piece : {&seg.tail, &seg.conn_a, &seg.window, &seg.conn_b, &seg.head})
      po.segments.push_back(
          PseudoSegment{SuspensionState{piece->start, 0.0}, piece->duration});
  }

  if (std::getenv("AXRAY_DENSE_DEBUG")) {
    std::vector<std::pair<Eigen::Vector2d, int>> ps;
    for (const auto& seg : segments)
      for (const auto* piece : {&seg.tail, &seg.conn_a, &seg.window, &seg.conn_b, &seg.head})
        ps.emplace_back(piece->start, piece->crossings);
    const char* names[5] = {"tail", "connA", "window", "connB", "head"};
    for (std::size_t i = 0; i < ps.size(); ++i) {
      Eigen::Vector2d e = ps[i].first;
      for (int k = 0; k < ps[i].second; ++k) {
        e = m.matrix() * e;
        e.x() -= std::floor(e.x());
        e.y() -= std::floor(e.y());
      }
      const Eigen::Vector2d nxt = ps[(i + 1) % ps.size()].first;
      const double g = catflow::dist(m, SuspensionState{nxt, 0.0}, SuspensionState{e, 0.0});
      if (g > 0.75 * params.jump_bound)
        std::fprintf(stderr, "gap seg %zu piece %s -> next: %.4f (bound %.3f)\n", i / 5,
                     names[i % 5], g, params.jump_bound);
    }
  }

  DenseOrbitReport rep;
  rep.orbit = catflow::shadow(m, po, params.jump_bound);
  rep.epsilon = eps;
  rep.period = rep.orbit.period;
  rep.c1 = segments.front().window.duration / (2.0 * big_l);
  rep.n_segments = segments.size();
  rep.greedy_points = greedy_points;
  if (rep.period > budget * (1.0 + 1e-9))
    throw BudgetError("realized period " + std::to_string(rep.period) +
                      " exceeds the budget " + std::to_string(budget) + " (planned " +
                      std::to_string(total_time) + ")");

  // measurements on the corrected orbit; the density radius discounts the
  // final length-1 stretch, whose job is only to close the loop
  std::vector<SuspensionState> samples;
  std::vector<double> sample_t;
  for (double t = 0.0; t < rep.period; t += params.sample_dt) {
    samples.push_back(rep.orbit.state_at(m, t));
    sample_t.push_back(t);
  }
  CoverageGrid final_grid(m, params.grid_n, params.grid_levels);
  {
    std::vector<SuspensionState> trunc;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (sample_t[i] < rep.period - 1.0) trunc.push_back(samples[i]);
    final_grid.absorb(m, trunc);
  }
  rep.realized_density = final_grid.radius();

  // first-window coverage radius
  {
    const double t0 = rep.orbit.tau[2];
    const double t1 = t0 + segments.front().window.duration;
    std::vector<SuspensionState> win;
    for (std::size_t i = 0; i < samples.size(); ++i)
      if (sample_t[i] >= t0 && sample_t[i] <= t1) win.push_back(samples[i]);
    CoverageGrid win_grid(m, params.grid_n, params.grid_levels);
    win_grid.absorb(m, win);
    rep.realized_kappa = win_grid.radius();
  }

  // transversal self-separation: nearest approach between distinct passes
  {
    double sep = 0.25;
    const double t_guard = 1.5 * m.max_roof();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      for (std::size_t j = i + 1; j < samples.size(); ++j) {
        double dt_c = sample_t[j] - sample_t[i];
        dt_c = std::min(dt_c, rep.period - dt_c);
        if (dt_c <= t_guard) continue;
        if (catflow::dist(m, samples[i], samples[j]) >= 0.15) continue;
        double trans = std::numeric_limits<double>::infinity();
        for (double dtau = -0.6; dtau <= 0.6 + 1e-12; dtau += 0.02)
          trans = std::min(trans, catflow::dist(m, samples[i], flow(m, samples[j], dtau)));
        sep = std::min(sep, trans);
      }
    }
    rep.realized_separation = sep;
  }

  return rep;
}

}  // namespace axray::livsic
