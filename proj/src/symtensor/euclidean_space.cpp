#include "axray/symtensor/euclidean_space.hpp"

#include <cmath>
#include <stdexcept>

#include "axray/symtensor/multi_index.hpp"

namespace axray::symtensor {

EuclideanSpace::EuclideanSpace(int dim) : dim_(dim) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("space dimension out of range");
  init(Eigen::MatrixXd::Identity(dim, dim));
}

EuclideanSpace::EuclideanSpace(int dim, const Eigen::MatrixXd& metric) : dim_(dim) {
  if (dim < 1 || dim > 8) throw std::invalid_argument("space dimension out of range");
  if (metric.rows() != dim || metric.cols() != dim)
    throw std::invalid_argument("metric shape mismatch");
  init(metric);
}

void EuclideanSpace::init(const Eigen::MatrixXd& metric) {
  if ((metric - metric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + metric.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("metric must be symmetric");
  Eigen::MatrixXd sym = 0.5 * (metric + metric.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("metric must be positive definite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("metric must be positive definite");
  g_ = sym;
  g_inv_ = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
  chol_l_ = llt.matrixL();
  identity_ = (sym - Eigen::MatrixXd::Identity(dim_, dim_)).cwiseAbs().maxCoeff() == 0.0;
}

double EuclideanSpace::norm_vec(const Eigen::VectorXd& v) const {
  return std::sqrt(v.dot(g_ * v));
}

double EuclideanSpace::norm_covec(const Eigen::VectorXd& xi) const {
  return std::sqrt(xi.dot(g_inv_ * xi));
}

const Eigen::MatrixXd& EuclideanSpace::gram(int order) const {
  auto it = gram_cache_.find(order);
  if (it != gram_cache_.end()) return *it->second;

  const MultiIndexTable& tab = index_table(dim_, order);
  auto G = std::make_unique<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(tab.size(), tab.size()));
  if (identity_) {
    for (int k = 0; k < tab.size(); ++k) (*G)(k, k) = tab.multiplicity(k);
  } else {
    // <f,h> = sum over full tuples I,J of f_I h_J prod_k g^{i_k j_k}. Group by
    // sorted ranks: G[a][b] = sum over representatives weighted by the product.
    tab.for_each_full([&](const std::vector<int>& I, int a) {
      tab.for_each_full([&](const std::vector<int>& J, int b) {
        double p = 1.0;
        for (int k = 0; k < order; ++k) p *= g_inv_(I[k], J[k]);
        (*G)(a, b) += p;
      });
    });
  }
  const Eigen::MatrixXd& ref = *G;
  gram_cache_.emplace(order, std::move(G));
  return ref;
}

}  // namespace axray::symtensor
