#include "axray/symtensor/sphere_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "axray/core/quad1d.hpp"

namespace axray::symtensor {

namespace {

struct RawRule {
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;
};

// Round rule on the Euclidean unit sphere S^{d-1}, exact for total degree
// <= deg. Recursive polar construction: v = (sqrt(1-t^2) w, t) with w on
// S^{d-2}; the surface measure factors as (1-t^2)^{(d-3)/2} dt dS_{d-2}, so a
// Gauss rule against that weight in t (Legendre for odd d, half-integer
// Gegenbauer otherwise) times a degree-deg subsphere rule is exact.
RawRule round_sphere(int d, int deg) {
  RawRule out;
  if (d < 1) throw std::invalid_argument("sphere ambient dimension must be >= 1");
  if (d == 1) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd v(1);
      v(0) = s;
      out.nodes.push_back(v);
      out.weights.push_back(1.0);
    }
    return out;
  }
  if (d == 2) {
    const int n = std::max(deg + 1, 4);
    const double w = 2.0 * M_PI / n;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * M_PI * k / n;
      Eigen::VectorXd v(2);
      v(0) = std::cos(a);
      v(1) = std::sin(a);
      out.nodes.push_back(v);
      out.weights.push_back(w);
    }
    return out;
  }

  const double mu = 0.5 * (d - 3);
  // Odd d: mu is an integer, the density (1-t^2)^mu is folded into the weight
  // and the effective polynomial degree grows by 2*mu. Even d: genuine Gauss
  // rule against the half-integer weight.
  const int nt = (d % 2 == 1) ? (deg + (d - 3)) / 2 + 1 : deg / 2 + 1;
  const Quad1D tq = (d % 2 == 1) ? gauss_legendre(nt) : gauss_gegenbauer(nt, mu);
  const RawRule sub = round_sphere(d - 1, deg);

  for (int i = 0; i < nt; ++i) {
    const double t = tq.nodes[i];
    const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
    // Legendre branch integrates dt directly, so the density stays in the weight.
    const double wt = (d % 2 == 1) ? tq.weights[i] * std::pow(1.0 - t * t, mu) : tq.weights[i];
    for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
      Eigen::VectorXd v(d);
      v.head(d - 1) = rho * sub.nodes[j];
      v(d - 1) = t;
      out.nodes.push_back(v);
      out.weights.push_back(wt * sub.weights[j]);
    }
  }
  return out;
}

}  // namespace

SphereQuadrature SphereQuadrature::build(const EuclideanSpace& space, int degree) {
  if (degree < 0) throw std::invalid_argument("quadrature degree must be >= 0");
  SphereQuadrature q;
  q.degree_ = degree;
  q.dim_ = space.dim();
  RawRule raw = round_sphere(space.dim(), degree);
  q.weights_ = std::move(raw.weights);
  if (space.identity_metric()) {
    q.nodes_ = std::move(raw.nodes);
    return q;
  }
  // g = L L^T; v -> L^{-T} v maps the Euclidean sphere isometrically onto
  // {|v|_g = 1} (pullback of g is the identity), so weights are unchanged.
  Eigen::MatrixXd Linv_t = space.chol_lower()
                               .triangularView<Eigen::Lower>()
                               .solve(Eigen::MatrixXd::Identity(space.dim(), space.dim()))
                               .transpose();
  q.nodes_.reserve(raw.nodes.size());
  for (const auto& v : raw.nodes) q.nodes_.push_back(Linv_t * v);
  return q;
}

SphereQuadrature SphereQuadrature::build_equator(const EuclideanSpace& space,
                                                 const Eigen::VectorXd& xi, int degree) {
  const int d = space.dim();
  if (xi.size() != d) throw std::invalid_argument("covector dimension mismatch");
  if (space.norm_covec(xi) == 0.0) throw std::invalid_argument("equator direction must be nonzero");
  if (d < 2) throw std::invalid_argument("equator needs ambient dimension >= 2");

  // g-orthonormal frame of ker xi: seed Gram-Schmidt with the coordinate axes
  // least aligned with xi (ties by index) so the frame is deterministic.
  Eigen::VectorXd nu = space.raise(xi);
  nu /= space.norm_vec(nu);
  std::vector<int> order(d);
  for (int i = 0; i < d; ++i) order[i] = i;
  std::vector<double> align(d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e(i) = 1.0;
    align[i] = std::abs(xi(i)) / space.norm_vec(e);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return align[a] < align[b]; });

  std::vector<Eigen::VectorXd> frame;
  for (int i : order) {
    if (static_cast<int>(frame.size()) == d - 1) break;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
    u(i) = 1.0;
    u -= u.dot(space.metric() * nu) * nu;
    for (const auto& b : frame) u -= u.dot(space.metric() * b) * b;
    const double n = space.norm_vec(u);
    if (n < 1e-10) continue;
    frame.push_back(u / n);
  }
  if (static_cast<int>(frame.size()) != d - 1)
    throw std::runtime_error("equator frame construction failed");

  RawRule raw = round_sphere(d - 1, degree);
  SphereQuadrature q;
  q.degree_ = degree;
  q.dim_ = d;
  q.weights_ = std::move(raw.weights);
  q.nodes_.reserve(raw.nodes.size());
  for (const auto& c : raw.nodes) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    for (int k = 0; k < d - 1; ++k) v += c(k) * frame[k];
    q.nodes_.push_back(v);
  }
  return q;
}

double SphereQuadrature::weight_sum() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

void SphereQuadrature::save(std::ostream& os) const {
  os << "sphere-quadrature 1\n" << dim_ << ' ' << degree_ << ' ' << node_count() << '\n';
  char buf[64];
  for (int i = 0; i < node_count(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", weights_[i]);
    os << buf;
    for (int k = 0; k < dim_; ++k) {
      std::snprintf(buf, sizeof(buf), "%.17g", nodes_[i](k));
      os << ' ' << buf;
    }
    os << '\n';
  }
}

SphereQuadrature SphereQuadrature::load(std::istream& is) {
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (!is || tag != "sphere-quadrature" || version != 1)
    throw std::runtime_error("unrecognized quadrature file header");
  SphereQuadrature q;
  int n = 0;
  is >> q.dim_ >> q.degree_ >> n;
  if (!is || q.dim_ < 1 || n < 1) throw std::runtime_error("corrupt quadrature header");
  q.nodes_.resize(n);
  q.weights_.resize(n);
  for (int i = 0; i < n; ++i) {
    is >> q.weights_[i];
    q.nodes_[i].resize(q.dim_);
    for (int k = 0; k < q.dim_; ++k) is >> q.nodes_[i](k);
  }
  if (!is) throw std::runtime_error("corrupt quadrature data");
  return q;
}

}  // namespace axray::symtensor
