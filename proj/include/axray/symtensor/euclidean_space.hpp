#pragma once

#include <Eigen/Dense>
#include <memory>
#include <unordered_map>

namespace axray::symtensor {

// R^d with a constant symmetric positive definite metric g (identity unless
// given). Owns per-order caches used by the tensor operations: the Gram matrix
// of the compressed inner product and related contraction tables.
class EuclideanSpace {
 public:
  explicit EuclideanSpace(int dim);
  EuclideanSpace(int dim, const Eigen::MatrixXd& metric);

  int dim() const { return dim_; }
  bool identity_metric() const { return identity_; }
  const Eigen::MatrixXd& metric() const { return g_; }
  const Eigen::MatrixXd& metric_inv() const { return g_inv_; }
  // Lower-triangular factor of g = L L^T.
  const Eigen::MatrixXd& chol_lower() const { return chol_l_; }

  double norm_vec(const Eigen::VectorXd& v) const;    // |v|_g, v contravariant
  double norm_covec(const Eigen::VectorXd& xi) const; // |xi|_{g^{-1}}
  Eigen::VectorXd raise(const Eigen::VectorXd& xi) const { return g_inv_ * xi; }
  Eigen::VectorXd lower(const Eigen::VectorXd& v) const { return g_ * v; }

  // Gram matrix of the compressed coefficient inner product at a given order:
  // <f,h> = f_c^T G h_c. Diagonal (multinomial weights) for the identity metric.
  const Eigen::MatrixXd& gram(int order) const;

 private:
  void init(const Eigen::MatrixXd& metric);

  int dim_;
  bool identity_ = true;
  Eigen::MatrixXd g_, g_inv_, chol_l_;
  mutable std::unordered_map<int, std::unique_ptr<Eigen::MatrixXd>> gram_cache_;
};

}  // namespace axray::symtensor
