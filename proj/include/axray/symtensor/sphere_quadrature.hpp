#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "axray/symtensor/euclidean_space.hpp"

namespace axray::symtensor {

// Quadrature on the unit sphere of the metric, {v : |v|_g = 1}, carrying the
// round-sphere surface measure transported by the linear isometry that maps
// the Euclidean unit sphere onto it. Exact for polynomial integrands of total
// degree <= degree().
class SphereQuadrature {
 public:
  // Full sphere rule. Node count grows like O(degree^{d-1}).
  static SphereQuadrature build(const EuclideanSpace& space, int degree);

  // Rule on the equator {|v|_g = 1, xi(v) = 0}, a (d-2)-sphere; xi covariant.
  static SphereQuadrature build_equator(const EuclideanSpace& space,
                                        const Eigen::VectorXd& xi, int degree);

  int degree() const { return degree_; }
  int ambient_dim() const { return dim_; }
  int node_count() const { return static_cast<int>(weights_.size()); }
  const std::vector<Eigen::VectorXd>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  double weight_sum() const;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

  // Text round trip; values printed with 17 significant digits so a saved rule
  // reloads to bit-identical doubles.
  void save(std::ostream& os) const;
  static SphereQuadrature load(std::istream& is);

 private:
  int degree_ = 0;
  int dim_ = 0;
  std::vector<Eigen::VectorXd> nodes_;
  std::vector<double> weights_;
};

}  // namespace axray::symtensor
