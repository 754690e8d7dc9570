#include "axray/symtensor/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace axray::symtensor {

double c_nm(int n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("c_nm arguments out of range");
  return std::sqrt(M_PI) * std::tgamma(0.5 * (n + 2 * m)) / std::tgamma(0.5 * (n + 1 + 2 * m));
}

Eigen::MatrixXd sigma_xi_matrix(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi) {
  if (order < 1) throw std::invalid_argument("sigma_xi needs target order >= 1");
  if (xi.size() != space.dim()) throw std::invalid_argument("covector dimension mismatch");
  const MultiIndexTable& tab_out = index_table(space.dim(), order);
  const MultiIndexTable& tab_in = index_table(space.dim(), order - 1);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(tab_out.size(), tab_in.size());
  std::vector<int> rest(order - 1);
  for (int a = 0; a < tab_out.size(); ++a) {
    const std::vector<int>& idx = tab_out.at(a);
    // symmetrize(xi tensor f) at sorted idx: each slot hosts xi with weight 1/m.
    for (int k = 0; k < order; ++k) {
      int p = 0;
      for (int q = 0; q < order; ++q)
        if (q != k) rest[p++] = idx[q];
      M(a, tab_in.rank_of(rest)) += xi(idx[k]) / order;
    }
  }
  return M;
}

Eigen::MatrixXd contract_xi_matrix(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi) {
  if (order < 1) throw std::invalid_argument("contraction needs order >= 1");
  if (xi.size() != space.dim()) throw std::invalid_argument("covector dimension mismatch");
  const MultiIndexTable& tab_in = index_table(space.dim(), order);
  const MultiIndexTable& tab_out = index_table(space.dim(), order - 1);
  const Eigen::VectorXd xs = space.raise(xi);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(tab_out.size(), tab_in.size());
  for (int b = 0; b < tab_out.size(); ++b) {
    std::vector<int> idx = tab_out.at(b);
    idx.resize(order);
    for (int i = 0; i < space.dim(); ++i) {
      idx[order - 1] = i;
      M(b, tab_in.rank_of(idx)) += xs(i);
    }
  }
  return M;
}

std::pair<SymTensor, SymTensor> split_xi(const SymTensor& f, const Eigen::VectorXd& xi) {
  const int m = f.order();
  if (m < 1) throw std::invalid_argument("split needs order >= 1");
  const EuclideanSpace& sp = f.space();
  if (sp.norm_covec(xi) == 0.0) throw std::invalid_argument("direction must be nonzero");

  const Eigen::MatrixXd S = sigma_xi_matrix(sp, m, xi);
  const Eigen::MatrixXd I = contract_xi_matrix(sp, m, xi);
  const Eigen::MatrixXd& Gi = sp.gram(m - 1);
  const Eigen::MatrixXd& Go = sp.gram(m);
  // h1 solves (i_xi sigma_xi) h1 = i_xi f. In the inner products of the two
  // orders the operator is S^T Go S (sigma_xi is the adjoint of contraction),
  // symmetric positive definite for xi != 0.
  const Eigen::MatrixXd B = S.transpose() * Go * S;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(B);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("split solve failed");
  const Eigen::VectorXd rhs = Gi * (I * f.coeffs());
  SymTensor h1(&sp, m - 1), h2(&sp, m);
  h1.coeffs() = ldlt.solve(rhs);
  h2.coeffs() = f.coeffs() - S * h1.coeffs();
  return {h1, h2};
}

Eigen::MatrixXd ker_projector(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi) {
  const int n = index_table(space.dim(), order).size();
  if (order == 0) return Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd S = sigma_xi_matrix(space, order, xi);
  const Eigen::MatrixXd I = contract_xi_matrix(space, order, xi);
  const Eigen::MatrixXd& Gi = space.gram(order - 1);
  const Eigen::MatrixXd& Go = space.gram(order);
  const Eigen::MatrixXd B = S.transpose() * Go * S;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(B);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("projector solve failed");
  return Eigen::MatrixXd::Identity(n, n) - S * ldlt.solve(Gi * I);
}

SymTensor pushforward(const EuclideanSpace& space, int order, const SphereQuadrature& q,
                      const std::function<double(const Eigen::VectorXd&)>& h) {
  if (q.degree() < 2 * order + 2)
    throw std::invalid_argument("quadrature degree too low for this order");
  if (q.ambient_dim() != space.dim()) throw std::invalid_argument("quadrature dimension mismatch");
  SymTensor out(&space, order);
  const MultiIndexTable& tab = out.table();
  for (int i = 0; i < q.node_count(); ++i) {
    const Eigen::VectorXd& v = q.nodes()[i];
    const double hv = q.weights()[i] * h(v);
    if (hv == 0.0) continue;
    const Eigen::VectorXd gv = space.lower(v);
    for (int a = 0; a < tab.size(); ++a) {
      double p = hv;
      for (int k : tab.at(a)) p *= gv(k);
      out[a] += p;
    }
  }
  return out;
}

Eigen::MatrixXd pf_pb_matrix(const EuclideanSpace& space, int order, const SphereQuadrature& q) {
  if (q.degree() < 2 * order + 2)
    throw std::invalid_argument("quadrature degree too low for this order");
  const MultiIndexTable& tab = index_table(space.dim(), order);
  const int N = tab.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd mono(N), mom(N);
  for (int i = 0; i < q.node_count(); ++i) {
    const Eigen::VectorXd& v = q.nodes()[i];
    const Eigen::VectorXd gv = space.lower(v);
    for (int a = 0; a < N; ++a) {
      double pm = 1.0, pv = 1.0;
      for (int k : tab.at(a)) {
        pm *= gv(k);
        pv *= v(k);
      }
      mom(a) = pm;
      // pullback of the a-th compressed basis tensor carries its multiplicity.
      mono(a) = tab.multiplicity(a) * pv;
    }
    A += q.weights()[i] * mom * mono.transpose();
  }
  return A;
}

SymbolMatrix symbol_sigma_m(const EuclideanSpace& space, int order, const Eigen::VectorXd& xi,
                            const SphereQuadrature& sphere_rule) {
  const double nx = space.norm_covec(xi);
  if (nx == 0.0) throw std::invalid_argument("frequency must be nonzero");
  const int n = space.dim() - 1;
  if (n < 1) throw std::invalid_argument("symbol needs ambient dimension >= 2");
  SymbolMatrix s;
  s.order = order;
  s.sphere_dim = n;
  s.proj = ker_projector(space, order, xi);
  const Eigen::MatrixXd A = pf_pb_matrix(space, order, sphere_rule);
  s.mat = (2.0 * M_PI / (c_nm(n, order) * nx)) * (s.proj * A * s.proj);
  return s;
}

SymbolCheck verify_symbol_projection(const SymTensor& f, const SymTensor& h,
                                     const Eigen::VectorXd& xi,
                                     const SphereQuadrature& equator_rule) {
  if (&f.space() != &h.space() || f.order() != h.order())
    throw std::invalid_argument("tensor space/order mismatch");
  const EuclideanSpace& sp = f.space();
  const int m = f.order();
  const int n = sp.dim() - 1;
  if (equator_rule.degree() < 2 * m)
    throw std::invalid_argument("equator rule degree too low for this order");

  SymbolCheck out;
  out.equator_side =
      c_nm(n, m) * equator_rule.integrate([&](const Eigen::VectorXd& v) {
        return pullback_eval(f, v) * pullback_eval(h, v);
      });

  const SphereQuadrature sph =
      SphereQuadrature::build(sp, std::max(2 * m + 2, equator_rule.degree()));
  const Eigen::MatrixXd A = pf_pb_matrix(sp, m, sph);
  const Eigen::MatrixXd P = ker_projector(sp, m, xi);
  const Eigen::VectorXd lhs = P * (A * (P * f.coeffs()));
  out.symbol_side = lhs.dot(sp.gram(m) * h.coeffs());
  out.residual = std::abs(out.equator_side - out.symbol_side);
  return out;
}

}  // namespace axray::symtensor
