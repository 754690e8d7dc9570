#include "axray/symtensor/harmonic.hpp"

#include <cmath>
#include <stdexcept>

#include "axray/symtensor/symbol.hpp"

namespace axray::symtensor {

namespace {

Eigen::MatrixXd op_matrix(const EuclideanSpace& space, int order_in,
                          SymTensor (*op)(const SymTensor&)) {
  const int nin = index_table(space.dim(), order_in).size();
  std::vector<Eigen::VectorXd> cols;
  cols.reserve(nin);
  for (int k = 0; k < nin; ++k) {
    SymTensor e(&space, order_in);
    e[k] = 1.0;
    cols.push_back(op(e).coeffs());
  }
  Eigen::MatrixXd M(cols[0].size(), nin);
  for (int k = 0; k < nin; ++k) M.col(k) = cols[k];
  return M;
}

}  // namespace

Eigen::MatrixXd trace_matrix(const EuclideanSpace& space, int order) {
  if (order < 2) throw std::invalid_argument("trace matrix needs order >= 2");
  return op_matrix(space, order, &trace_g);
}

Eigen::MatrixXd trace_adjoint_matrix(const EuclideanSpace& space, int order) {
  return op_matrix(space, order, &trace_adjoint);
}

Eigen::MatrixXd trace_free_basis(const EuclideanSpace& space, int order) {
  const int N = index_table(space.dim(), order).size();
  Eigen::MatrixXd raw;
  if (order <= 1) {
    raw = Eigen::MatrixXd::Identity(N, N);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trace_matrix(space, order));
    raw = lu.kernel();
  }
  // Gram-Schmidt in the metric inner product.
  const Eigen::MatrixXd& G = space.gram(order);
  Eigen::MatrixXd Q(N, raw.cols());
  int cols = 0;
  for (int j = 0; j < raw.cols(); ++j) {
    Eigen::VectorXd v = raw.col(j);
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < cols; ++k) v -= Q.col(k).dot(G * v) * Q.col(k);
    const double n = std::sqrt(v.dot(G * v));
    if (n < 1e-12) continue;
    Q.col(cols++) = v / n;
  }
  return Q.leftCols(cols);
}

std::vector<SymTensor> harmonic_decompose(const SymTensor& u) {
  const EuclideanSpace& sp = u.space();
  const int m = u.order();
  if (m <= 1) return {u};

  // w = (trace o trace_adjoint)^{-1} trace(u); the composite is positive
  // definite because trace_adjoint is injective and adjoint to trace.
  const Eigen::MatrixXd T = trace_matrix(sp, m);
  const Eigen::MatrixXd Tad = trace_adjoint_matrix(sp, m - 2);
  const Eigen::MatrixXd& Gl = sp.gram(m - 2);
  const Eigen::MatrixXd C = Tad.transpose() * sp.gram(m) * Tad;  // = Gl (T Tad) symmetrized
  Eigen::LDLT<Eigen::MatrixXd> ldlt(C);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("harmonic solve failed");

  SymTensor w(&sp, m - 2);
  w.coeffs() = ldlt.solve(Gl * (T * u.coeffs()));

  SymTensor u0 = u - trace_adjoint(w);
  std::vector<SymTensor> tail = harmonic_decompose(w);
  std::vector<SymTensor> out;
  out.reserve(tail.size() + 1);
  out.push_back(u0);
  for (auto& t : tail) out.push_back(t);
  return out;
}

SpectralBlock pf_pb_on_trace_free(const EuclideanSpace& space, int order,
                                  const SphereQuadrature& q) {
  const Eigen::MatrixXd Q = trace_free_basis(space, order);
  const Eigen::MatrixXd A = pf_pb_matrix(space, order, q);
  const Eigen::MatrixXd& G = space.gram(order);
  const Eigen::MatrixXd block = Q.transpose() * G * A * Q;

  SpectralBlock out;
  out.block_dim = static_cast<int>(block.rows());
  for (int i = 0; i < block.rows(); ++i) out.lambda += block(i, i);
  out.lambda /= block.rows();
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j)
      if (i != j) out.max_offdiag = std::max(out.max_offdiag, std::abs(block(i, j)));
  return out;
}

}  // namespace axray::symtensor
