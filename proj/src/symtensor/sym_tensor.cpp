#include "axray/symtensor/sym_tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace axray::symtensor {

namespace {
void check_same(const SymTensor& a, const SymTensor& b) {
  if (&a.space() != &b.space() || a.order() != b.order())
    throw std::invalid_argument("tensor space/order mismatch");
}
}  // namespace

FullTensor::FullTensor(const EuclideanSpace* space, int order) : space_(space), order_(order) {
  if (order < 0 || order > 12) throw std::invalid_argument("tensor order out of range");
  std::size_t n = 1;
  for (int k = 0; k < order; ++k) n *= static_cast<std::size_t>(space->dim());
  vals_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
}

int FullTensor::dim() const { return space_->dim(); }

std::size_t FullTensor::flat(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != order_) throw std::invalid_argument("index length mismatch");
  std::size_t p = 0, stride = 1;
  for (int k = 0; k < order_; ++k) {
    if (idx[k] < 0 || idx[k] >= dim()) throw std::out_of_range("index entry out of range");
    p += stride * static_cast<std::size_t>(idx[k]);
    stride *= static_cast<std::size_t>(dim());
  }
  return p;
}

double& FullTensor::at(const std::vector<int>& idx) { return vals_(static_cast<Eigen::Index>(flat(idx))); }
double FullTensor::at(const std::vector<int>& idx) const { return vals_(static_cast<Eigen::Index>(flat(idx))); }

SymTensor::SymTensor(const EuclideanSpace* space, int order) : space_(space), order_(order) {
  const MultiIndexTable& tab = index_table(space->dim(), order);
  coeffs_ = Eigen::VectorXd::Zero(tab.size());
}

int SymTensor::dim() const { return space_->dim(); }

const MultiIndexTable& SymTensor::table() const { return index_table(space_->dim(), order_); }

double SymTensor::component(const std::vector<int>& idx) const {
  return coeffs_(table().rank_of(idx));
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
  check_same(*this, o);
  coeffs_ += o.coeffs_;
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
  check_same(*this, o);
  coeffs_ -= o.coeffs_;
  return *this;
}

SymTensor& SymTensor::operator*=(double c) {
  coeffs_ *= c;
  return *this;
}

SymTensor symmetrize(const FullTensor& T) {
  SymTensor out(&T.space(), T.order());
  const MultiIndexTable& tab = out.table();
  // Sum every full component into its sorted slot, then divide by the slot's
  // multiplicity: the average over permutations of a fixed sorted index equals
  // the average over all tuples collapsing to it.
  tab.for_each_full([&](const std::vector<int>& idx, int rank) { out[rank] += T.at(idx); });
  for (int k = 0; k < tab.size(); ++k) out[k] /= tab.multiplicity(k);
  return out;
}

FullTensor expand(const SymTensor& f) {
  FullTensor T(&f.space(), f.order());
  f.table().for_each_full([&](const std::vector<int>& idx, int rank) { T.at(idx) = f[rank]; });
  return T;
}

double inner(const SymTensor& f, const SymTensor& h) {
  check_same(f, h);
  const Eigen::MatrixXd& G = f.space().gram(f.order());
  return f.coeffs().dot(G * h.coeffs());
}

SymTensor trace_g(const SymTensor& f) {
  const int m = f.order();
  if (m < 2) throw std::invalid_argument("trace needs order >= 2");
  const EuclideanSpace& sp = f.space();
  SymTensor out(&sp, m - 2);
  const MultiIndexTable& tab_out = out.table();
  const int d = sp.dim();
  for (int b = 0; b < tab_out.size(); ++b) {
    std::vector<int> idx = tab_out.at(b);
    idx.resize(m);
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double gij = sp.metric_inv()(i, j);
        if (gij == 0.0) continue;
        idx[m - 2] = i;
        idx[m - 1] = j;
        s += gij * f.component(idx);
      }
    }
    out[b] = s;
  }
  return out;
}

SymTensor trace_adjoint(const SymTensor& u) {
  const int m = u.order();
  const EuclideanSpace& sp = u.space();
  SymTensor out(&sp, m + 2);
  const MultiIndexTable& tab_out = out.table();
  const double pairs = static_cast<double>((m + 2) * (m + 1)) / 2.0;
  std::vector<int> rest(m);
  for (int a = 0; a < tab_out.size(); ++a) {
    const std::vector<int>& idx = tab_out.at(a);
    // symmetrize(g tensor u) at sorted idx: average g_{idx_k idx_l} u_{rest}
    // over the C(m+2,2) unordered slot pairs (k,l).
    double s = 0.0;
    for (int k = 0; k < m + 2; ++k) {
      for (int l = k + 1; l < m + 2; ++l) {
        int p = 0;
        for (int q = 0; q < m + 2; ++q)
          if (q != k && q != l) rest[p++] = idx[q];
        s += sp.metric()(idx[k], idx[l]) * u.component(rest);
      }
    }
    out[a] = s / pairs;
  }
  return out;
}

double pullback_eval(const SymTensor& f, const Eigen::VectorXd& v) {
  if (v.size() != f.dim()) throw std::invalid_argument("vector dimension mismatch");
  const MultiIndexTable& tab = f.table();
  double s = 0.0;
  for (int k = 0; k < tab.size(); ++k) {
    double p = f[k] * tab.multiplicity(k);
    if (p == 0.0) continue;
    for (int q : tab.at(k)) p *= v(q);
    s += p;
  }
  return s;
}

}  // namespace axray::symtensor
