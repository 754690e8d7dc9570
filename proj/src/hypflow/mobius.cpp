#include "axray/hypflow/mobius.hpp"

#include <cmath>
#include <stdexcept>

namespace axray::hypflow {

Complex mobius_apply(const Mat2& m, Complex z) {
  return (m(0, 0) * z + m(0, 1)) / (m(1, 0) * z + m(1, 1));
}

double hyperbolic_dist(Complex a, Complex b) {
  return std::acosh(1.0 + std::norm(a - b) / (2.0 * a.imag() * b.imag()));
}

Mat2 rotation(double phi) {
  Mat2 r;
  r << std::cos(phi / 2), std::sin(phi / 2), -std::sin(phi / 2), std::cos(phi / 2);
  return r;
}

Mat2 flow_translation(double t) {
  Mat2 a;
  a << std::exp(t / 2), 0.0, 0.0, std::exp(-t / 2);
  return a;
}

Complex half_to_disk(Complex z) { return (z - base_point()) / (z + base_point()); }

Complex frame_angle(const Mat2& f) {
  const double c = f(1, 0), d = f(1, 1);
  const Complex w(d, -c);
  return w * w / (c * c + d * d);
}

double displacement(const Mat2& g) { return hyperbolic_dist(frame_base(g), base_point()); }

double translation_length(const Mat2& g) {
  const double t = std::abs(g(0, 0) + g(1, 1));
  if (t <= 2.0) throw std::invalid_argument("translation_length: matrix is not hyperbolic");
  return 2.0 * std::acosh(t / 2.0);
}

Mat2 axis_frame(const Mat2& g) {
  translation_length(g);  // hyperbolicity guard
  Eigen::EigenSolver<Mat2> es(g);
  Eigen::Vector2d v0 = es.eigenvectors().col(0).real();
  Eigen::Vector2d v1 = es.eigenvectors().col(1).real();
  if (std::abs(es.eigenvalues()(0).real()) < std::abs(es.eigenvalues()(1).real()))
    std::swap(v0, v1);
  Mat2 h;
  h.col(0) = v0;
  h.col(1) = v1;
  double det = h.determinant();
  if (det < 0) {
    h.col(1) *= -1.0;
    det = -det;
  }
  return h / std::sqrt(det);
}

Mat2 unimodular(const Mat2& f) {
  const double det = f.determinant();
  if (!(det > 1e-12)) throw std::invalid_argument("unimodular: determinant must be positive");
  return f / std::sqrt(det);
}

}  // namespace axray::hypflow
