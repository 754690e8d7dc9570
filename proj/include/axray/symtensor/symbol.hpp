#pragma once

#include <Eigen/Dense>
#include <functional>

#include "axray/symtensor/sphere_quadrature.hpp"
#include "axray/symtensor/sym_tensor.hpp"

namespace axray::symtensor {

// Normalizing constant sqrt(pi) Gamma((n+2m)/2) / Gamma((n+1+2m)/2); equals the
// ratio Vol(S^n)/Vol(S^{n-1}) when m = 0.
double c_nm(int n, int m);

// Matrix (compressed coords) of f -> symmetrize(xi tensor f), order m-1 -> m.
Eigen::MatrixXd sigma_xi_matrix(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi);

// Matrix of contraction with the raised xi, order m -> m-1. Adjoint of
// m * sigma_xi_matrix under the metric inner products.
Eigen::MatrixXd contract_xi_matrix(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi);

// Splits f = symmetrize(xi tensor h1) + h2 where h2 is annihilated by the xi
// contraction. Orthogonal split; requires order >= 1 and xi != 0.
std::pair<SymTensor, SymTensor> split_xi(const SymTensor& f, const Eigen::VectorXd& xi);

// Projector onto the xi-contraction kernel, compressed coords (identity for m=0).
Eigen::MatrixXd ker_projector(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi);

// Evaluates h on the sphere rule and averages it back against the rank-m
// moment tensor: out_a = integral h(v) prod_k (g v)_{a_k} dS(v).
// Exactness for h = pullback of an order-m tensor needs degree >= 2m; rules
// below degree 2m+2 are refused to keep headroom over that threshold.
SymTensor pushforward(const EuclideanSpace& space, int order, const SphereQuadrature& q,
                      const std::function<double(const Eigen::VectorXd&)>& h);

// Matrix of pushforward(pullback(.)) on compressed coords, via the given rule.
Eigen::MatrixXd pf_pb_matrix(const EuclideanSpace& space, int order, const SphereQuadrature& q);

struct SymbolMatrix {
  Eigen::MatrixXd mat;   // compressed-coordinate operator
  Eigen::MatrixXd proj;  // kernel projector used on both sides
  int order = 0;
  int sphere_dim = 0;    // n = d-1
};

// Principal symbol at frequency xi: (2 pi / c_nm) |xi|^{-1} P (pf pb) P with P
// the xi-kernel projector. Self-adjoint and positive semidefinite wrt inner().
SymbolMatrix symbol_sigma_m(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi,
                            const SphereQuadrature& sphere_rule);

// Residual of the two-route identity
//   c_nm * integral over the xi-equator of pb(f) pb(h)
//     = < sigma_m(xi) f, h > * c_nm |xi| / (2 pi)   (i.e. <P pf pb P f, h>)
// for kernel tensors f, h; both sides also returned.
struct SymbolCheck {
  double equator_side = 0.0;
  double symbol_side = 0.0;
  double residual = 0.0;
};
SymbolCheck verify_symbol_projection(const SymTensor& f, const SymTensor& h,
                                     const Eigen::VectorXd& xi,
                                     const SphereQuadrature& equator_rule);

}  // namespace axray::symtensor
