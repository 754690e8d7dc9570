#pragma once

#include <Eigen/Dense>
#include <vector>

#include "axray/symtensor/sphere_quadrature.hpp"
#include "axray/symtensor/sym_tensor.hpp"

namespace axray::symtensor {

// Matrix of trace_g on compressed coords, order m -> m-2 (m >= 2).
Eigen::MatrixXd trace_matrix(const EuclideanSpace& space, int order);

// Matrix of trace_adjoint, order m -> m+2.
Eigen::MatrixXd trace_adjoint_matrix(const EuclideanSpace& space, int order);

// Columns: a basis of the trace-free subspace at the given order,
// orthonormal in the metric inner product. Full space for order <= 1.
Eigen::MatrixXd trace_free_basis(const EuclideanSpace& space, int order);

// u = sum_k trace_adjoint^k (u_k) with every u_k trace-free; returns
// u_0,...,u_{floor(m/2)} (orders m, m-2, ...).
std::vector<SymTensor> harmonic_decompose(const SymTensor& u);

struct SpectralBlock {
  double lambda = 0.0;       // mean diagonal of the block
  double max_offdiag = 0.0;  // worst off-diagonal entry, orthonormal basis
  int block_dim = 0;
};

// pushforward(pullback(.)) restricted to the trace-free subspace: a scalar
// multiple of the identity; measures that multiple and the deviation.
SpectralBlock pf_pb_on_trace_free(const EuclideanSpace& space, int order,
                                  const SphereQuadrature& q);

}  // namespace axray::symtensor
