#pragma once

#include <vector>

namespace axray {

struct Quad1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre rule on [-1,1]; exact for polynomials of degree <= 2n-1.
Quad1D gauss_legendre(int n);

// Same rule mapped to [a,b].
Quad1D gauss_legendre_ab(int n, double a, double b);

// Gauss rule for the weight (1-t^2)^mu on [-1,1], mu > -1/2;
// exact for polynomials of degree <= 2n-1 against that weight.
Quad1D gauss_gegenbauer(int n, double mu);

}  // namespace axray
