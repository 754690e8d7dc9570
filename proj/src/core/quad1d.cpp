#include "axray/core/quad1d.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace axray {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the orthogonal
// polynomial recurrence, weights are mu0 * (first eigenvector component)^2.
// For the Gegenbauer weight (1-t^2)^mu the recurrence has a_k = 0 and
//   b_k = k (k + 2 mu) / ((2k + 2 mu + 1)(2k + 2 mu - 1)),
// with mu0 = sqrt(pi) Gamma(mu+1) / Gamma(mu+3/2).
Quad1D golub_welsch_gegenbauer(int n, double mu) {
  if (n < 1) throw std::invalid_argument("quadrature order must be positive");
  if (!(mu > -0.5)) throw std::invalid_argument("weight exponent must exceed -1/2");

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double dk = static_cast<double>(k);
    const double num = dk * (dk + 2.0 * mu);
    const double den = (2.0 * dk + 2.0 * mu + 1.0) * (2.0 * dk + 2.0 * mu - 1.0);
    const double off = std::sqrt(num / den);
    J(k - 1, k) = off;
    J(k, k - 1) = off;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success) throw std::runtime_error("quadrature eigensolve failed");

  const double mu0 = std::sqrt(M_PI) * std::tgamma(mu + 1.0) / std::tgamma(mu + 1.5);

  Quad1D q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    q.weights[i] = mu0 * v0 * v0;
  }
  return q;
}

}  // namespace

Quad1D gauss_legendre(int n) { return golub_welsch_gegenbauer(n, 0.0); }

Quad1D gauss_legendre_ab(int n, double a, double b) {
  Quad1D q = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * q.nodes[i];
    q.weights[i] *= half;
  }
  return q;
}

Quad1D gauss_gegenbauer(int n, double mu) { return golub_welsch_gegenbauer(n, mu); }

}  // namespace axray
