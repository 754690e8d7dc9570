#pragma once

#include <Eigen/Dense>

#include <complex>

namespace axray::hypflow {

using Mat2 = Eigen::Matrix2d;
using Complex = std::complex<double>;

// Base point of the upper half-plane model; frames act on it by Mobius maps.
inline Complex base_point() { return Complex(0.0, 1.0); }

Complex mobius_apply(const Mat2& m, Complex z);

// Distance in the upper half-plane, curvature -1.
double hyperbolic_dist(Complex a, Complex b);

// Rotation about i. The matrix uses half-angle entries, so rotation(phi)
// turns the tangent direction at i by phi.
Mat2 rotation(double phi);

// diag(e^{t/2}, e^{-t/2}); right multiplication moves a frame time t along
// the geodesic flow.
Mat2 flow_translation(double t);

// Cayley map onto the unit disk, i -> 0.
Complex half_to_disk(Complex z);

inline Complex frame_base(const Mat2& f) { return mobius_apply(f, base_point()); }

// e^{i theta} for the frame angle theta (the direction the frame's tangent
// vector points at its base). Well defined on PSL(2,R): the formula is even
// in the sign of the matrix.
Complex frame_angle(const Mat2& f);

// d(g i, i); bounds the translation length of g from above.
double displacement(const Mat2& g);

// 2 arccosh(|tr|/2) for |tr| > 2; throws std::invalid_argument otherwise.
double translation_length(const Mat2& g);

// Frame h with h^{-1} g h = +-diag(e^{l/2}, e^{-l/2}), expanding direction
// first, det h = 1. The geodesic t -> h flow_translation(t) is the axis of g.
// Requires g hyperbolic.
Mat2 axis_frame(const Mat2& g);

// Rescales to det 1; throws std::invalid_argument when det <= 0 or the frame
// is badly conditioned.
Mat2 unimodular(const Mat2& f);

}  // namespace axray::hypflow
