#include "axray/hypflow/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>

namespace axray::hypflow {

namespace {

// Point at hyperbolic distance rho from the base point, direction phi.
Complex point_at(double rho, double phi) {
  return frame_base(rotation(phi) * flow_translation(rho));
}

}  // namespace

FuchsianGroup::FuchsianGroup(std::vector<Mat2> gens, std::vector<int> relator)
    : gens_(std::move(gens)), relator_(std::move(relator)) {
  if (gens_.size() < 2 || gens_.size() % 2 != 0)
    throw std::invalid_argument("FuchsianGroup: need generators plus matching inverses");
  for (const Mat2& g : gens_) {
    if (std::abs(g.determinant() - 1.0) > 1e-12)
      throw std::invalid_argument("FuchsianGroup: generator determinant must be 1");
    if (std::abs(g.trace()) <= 2.0)
      throw std::invalid_argument("FuchsianGroup: generators must be hyperbolic");
  }
  for (int k = 0; k < n_letters(); ++k) {
    const Mat2 prod = gens_[static_cast<size_t>(k)] *
                      gens_[static_cast<size_t>(inverse_letter(k))];
    if ((prod - Mat2::Identity()).norm() > 1e-10)
      throw std::invalid_argument("FuchsianGroup: letter k+n must invert letter k");
  }
  const Mat2 rel = word_matrix(relator_);
  relator_defect_ = std::min((rel - Mat2::Identity()).norm(), (rel + Mat2::Identity()).norm());
  if (relator_defect_ > 1e-9)
    throw std::invalid_argument("FuchsianGroup: relator does not multiply to +-identity");

  for (const Mat2& g : gens_) max_letter_disp_ = std::max(max_letter_disp_, displacement(g));

  // Boundary radius of the Dirichlet domain along each direction, then the
  // vertices as refined local maxima.
  const int n_dir = 1024;
  std::vector<double> radius(n_dir);
  auto boundary = [&](double phi) {
    double lo = 0.1, hi = 1.2 * max_letter_disp_;
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      (in_domain(point_at(mid, phi)) ? lo : hi) = mid;
    }
    return lo;
  };
  for (int j = 0; j < n_dir; ++j) radius[j] = boundary(2 * M_PI * j / n_dir);
  inradius_ = *std::min_element(radius.begin(), radius.end());
  for (int j = 0; j < n_dir; ++j) {
    const double prev = radius[(j + n_dir - 1) % n_dir], next = radius[(j + 1) % n_dir];
    if (radius[j] < prev || radius[j] <= next) continue;  // keep strict rising edge only
    double lo = 2 * M_PI * (j - 1) / n_dir, hi = 2 * M_PI * (j + 1) / n_dir;
    for (int it = 0; it < 80; ++it) {  // ternary search on the boundary radius
      const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (boundary(m1) < boundary(m2))
        lo = m1;
      else
        hi = m2;
    }
    const double phi = 0.5 * (lo + hi), rho = boundary(phi);
    vertices_.push_back(half_to_disk(point_at(rho, phi)));
    outradius_ = std::max(outradius_, rho);
  }
}

FuchsianGroup FuchsianGroup::bolza() {
  const double s2 = std::sqrt(2.0);
  Mat2 T;
  T << 1 + s2, std::sqrt(2 + 2 * s2), std::sqrt(2 + 2 * s2), 1 + s2;
  std::vector<Mat2> gens(8);
  for (int k = 0; k < 8; ++k)
    gens[static_cast<size_t>(k)] = rotation(k * M_PI / 4) * T * rotation(-k * M_PI / 4);
  return FuchsianGroup(std::move(gens), {0, 5, 2, 7, 4, 1, 6, 3});
}

FuchsianGroup FuchsianGroup::from_generators(const std::vector<Mat2>& four) {
  if (four.size() != 4)
    throw std::invalid_argument("FuchsianGroup::from_generators: expected four matrices");
  std::vector<Mat2> gens(8);
  for (int k = 0; k < 4; ++k) {
    gens[static_cast<size_t>(k)] = four[static_cast<size_t>(k)];
    gens[static_cast<size_t>(k + 4)] = four[static_cast<size_t>(k)].inverse();
  }
  return FuchsianGroup(std::move(gens), {0, 5, 2, 7, 4, 1, 6, 3});
}

Mat2 FuchsianGroup::word_matrix(const std::vector<int>& word) const {
  Mat2 prod = Mat2::Identity();
  for (int l : word) {
    if (l < 0 || l >= n_letters()) throw std::invalid_argument("word_matrix: letter out of range");
    prod = prod * gens_[static_cast<size_t>(l)];
  }
  return prod;
}

bool FuchsianGroup::in_domain(Complex z, double slack) const {
  const double d0 = hyperbolic_dist(z, base_point());
  for (const Mat2& g : gens_)
    if (hyperbolic_dist(mobius_apply(g, z), base_point()) < d0 - slack) return false;
  return true;
}

Mat2 FuchsianGroup::reduce(const Mat2& frame, int* steps) const {
  Mat2 f = frame;
  for (int it = 0; it < kReduceCap; ++it) {
    const Complex z = frame_base(f);
    double best = hyperbolic_dist(z, base_point()) - 1e-14;
    int pick = -1;
    for (int k = 0; k < n_letters(); ++k) {
      const double d = hyperbolic_dist(mobius_apply(gens_[static_cast<size_t>(k)], z),
                                       base_point());
      if (d < best) {
        best = d;
        pick = k;
      }
    }
    if (pick < 0) {
      if (steps) *steps = it;
      return f;
    }
    f = gens_[static_cast<size_t>(pick)] * f;
  }
  throw std::runtime_error("FuchsianGroup::reduce: exceeded iteration cap");
}

bool FuchsianGroup::same_coset(const Mat2& a, const Mat2& b, double tol) const {
  const Mat2 h = reduce(a * b.inverse());
  return std::min((h - Mat2::Identity()).norm(), (h + Mat2::Identity()).norm()) < tol;
}

UnitTangentState make_state(const FuchsianGroup& group, const Mat2& frame) {
  return {group.reduce(unimodular(frame))};
}

UnitTangentState geodesic_flow(const FuchsianGroup& group, const UnitTangentState& s, double t) {
  return {group.reduce(s.frame * flow_translation(t))};
}

std::vector<Mat2> orbit_ball(const FuchsianGroup& group, double radius, int word_cutoff) {
  if (radius < 0 || word_cutoff < 0) throw std::invalid_argument("orbit_ball: bad parameters");
  struct Key {
    long long v[4];
    bool operator<(const Key& o) const {
      for (int i = 0; i < 4; ++i)
        if (v[i] != o.v[i]) return v[i] < o.v[i];
      return false;
    }
  };
  auto key_of = [](const Mat2& m) {
    double sign = 1.0;
    for (int i = 0; i < 4; ++i) {
      const double e = m(i / 2, i % 2);
      if (std::abs(e) > 1e-9) {
        sign = e > 0 ? 1.0 : -1.0;
        break;
      }
    }
    Key k;
    for (int i = 0; i < 4; ++i) k.v[i] = llround(sign * m(i / 2, i % 2) * 1e7);
    return k;
  };
  // Overshoot ring: word paths to a ball member may pass slightly outside it.
  const double explore = radius + group.max_letter_displacement() + 1.5;
  std::map<Key, int> depth;
  std::queue<Mat2> queue;
  depth[key_of(Mat2::Identity())] = 0;
  queue.push(Mat2::Identity());
  std::vector<std::pair<double, Mat2>> found;
  while (!queue.empty()) {
    const Mat2 m = queue.front();
    queue.pop();
    const int d = depth[key_of(m)];
    const double disp = displacement(m);
    if (disp <= radius && d <= word_cutoff) found.push_back({disp, m});
    if (d >= word_cutoff) continue;
    for (int k = 0; k < group.n_letters(); ++k) {
      const Mat2 nm = m * group.letter(k);
      if (displacement(nm) > explore) continue;
      const Key kk = key_of(nm);
      if (depth.count(kk)) continue;
      depth[kk] = d + 1;
      queue.push(nm);
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    for (int i = 0; i < 4; ++i) {
      const double x = a.second(i / 2, i % 2), y = b.second(i / 2, i % 2);
      if (x != y) return x < y;
    }
    return false;
  });
  std::vector<Mat2> out;
  out.reserve(found.size());
  for (auto& [d, m] : found) out.push_back(m);
  return out;
}

}  // namespace axray::hypflow
