#pragma once

#include <Eigen/Dense>
#include <vector>

#include "axray/symtensor/euclidean_space.hpp"
#include "axray/symtensor/multi_index.hpp"

namespace axray::symtensor {

// Dense covariant tensor of a given order, no symmetry assumed. Flat layout:
// component (i_0,...,i_{m-1}) sits at sum_k i_k * dim^k.
class FullTensor {
 public:
  FullTensor(const EuclideanSpace* space, int order);

  int order() const { return order_; }
  int dim() const;
  const EuclideanSpace& space() const { return *space_; }

  double& at(const std::vector<int>& idx);
  double at(const std::vector<int>& idx) const;
  Eigen::VectorXd& values() { return vals_; }
  const Eigen::VectorXd& values() const { return vals_; }

 private:
  std::size_t flat(const std::vector<int>& idx) const;
  const EuclideanSpace* space_;
  int order_;
  Eigen::VectorXd vals_;
};

// Symmetric covariant tensor in compressed storage: one coefficient per sorted
// multi-index of the order.
class SymTensor {
 public:
  SymTensor(const EuclideanSpace* space, int order);

  int order() const { return order_; }
  int dim() const;
  int size() const { return static_cast<int>(coeffs_.size()); }
  const EuclideanSpace& space() const { return *space_; }
  const MultiIndexTable& table() const;

  double& operator[](int k) { return coeffs_(k); }
  double operator[](int k) const { return coeffs_(k); }
  Eigen::VectorXd& coeffs() { return coeffs_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  // Component at an arbitrary (not necessarily sorted) index tuple.
  double component(const std::vector<int>& idx) const;

  SymTensor& operator+=(const SymTensor& o);
  SymTensor& operator-=(const SymTensor& o);
  SymTensor& operator*=(double c);
  friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
  friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
  friend SymTensor operator*(double c, SymTensor a) { return a *= c; }

 private:
  const EuclideanSpace* space_;
  int order_;
  Eigen::VectorXd coeffs_;
};

// Average of T over all index permutations, returned compressed.
SymTensor symmetrize(const FullTensor& T);

FullTensor expand(const SymTensor& f);

// Metric inner product with all indices raised: <f,h> = f_I h_J g^{I J}.
double inner(const SymTensor& f, const SymTensor& h);

// Contraction of two slots with g^{-1}: order m -> m-2; requires m >= 2.
SymTensor trace_g(const SymTensor& f);

// Adjoint of trace_g: u -> symmetrize(g tensor u), order m -> m+2.
SymTensor trace_adjoint(const SymTensor& u);

// f(v,...,v) for a contravariant vector v; the restriction to the unit sphere
// is the function the ray transform averages.
double pullback_eval(const SymTensor& f, const Eigen::VectorXd& v);

}  // namespace axray::symtensor
