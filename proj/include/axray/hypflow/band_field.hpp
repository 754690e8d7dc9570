#pragma once

#include "axray/core/rng.hpp"
#include "axray/hypflow/fuchsian.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace axray::hypflow {

// Real observable on the unit tangent bundle of the quotient surface,
// evaluated through a det-1 frame. Implementations must accept arbitrary
// frames, not only reduced ones.
struct SurfaceField {
  virtual ~SurfaceField() = default;
  virtual double operator()(const Mat2& frame) const = 0;
};

class CallableSurfaceField : public SurfaceField {
 public:
  explicit CallableSurfaceField(std::function<double(const Mat2&)> f) : f_(std::move(f)) {}
  double operator()(const Mat2& frame) const override { return f_(frame); }

 private:
  std::function<double(const Mat2&)> f_;
};

// Smooth field with vertical Fourier modes up to a fixed band. Each summand
// is a compactly supported bump in the base distance times a trigonometric
// polynomial of the frame angle, summed over the group translates of word
// length <= cutoff inside the bump's reach. Evaluation reduces the frame
// first; when the translate list covers the full displacement ball needed at
// reduced base points (the default geometry does), the truncated sum equals
// the full group sum and the field is exactly invariant.
class BandField : public SurfaceField {
 public:
  // cos_coef has band+1 entries (modes 0..band), sin_coef the same with
  // entry 0 ignored. bump_radius sets the support of each summand.
  BandField(const FuchsianGroup& group, int band, std::vector<double> cos_coef,
            std::vector<double> sin_coef, double bump_radius = 1.2, int word_cutoff = 8);

  // Coefficients uniform in [-amplitude, amplitude].
  static BandField random(const FuchsianGroup& group, int band, Rng& rng,
                          double amplitude = 1.0, double bump_radius = 1.2, int word_cutoff = 8);

  double operator()(const Mat2& frame) const override;

  int band() const { return band_; }
  double bump_radius() const { return bump_radius_; }
  int word_cutoff() const { return cutoff_; }
  size_t n_translates() const { return elems_.size(); }
  // Translates inside the needed ball that the word cutoff dropped; zero
  // means the sum is the full group sum at reduced evaluation points.
  size_t n_dropped_translates() const { return dropped_; }

  // Empirical truncation gap: largest |F - F_smaller_cutoff| over seeded
  // random reduced states, floored at 1e-12. The group-invariance defect of
  // the field is bounded by gaps of this kind.
  double truncation_bound(int n_samples = 256, std::uint64_t seed = 2026) const;

  // max |F(letter * s) - F(s)| over seeded random reduced states and all
  // letters.
  double invariance_defect(int n_samples = 256, std::uint64_t seed = 2026) const;

 private:
  double eval_reduced(const Mat2& frame) const;
  const FuchsianGroup* group_;
  int band_;
  std::vector<double> cos_coef_, sin_coef_;
  double bump_radius_;
  int cutoff_;
  std::vector<Mat2> elems_;
  std::vector<double> disp_;
  size_t dropped_ = 0;
};

// Central finite difference of a field along the geodesic flow.
class FlowDerivativeField : public SurfaceField {
 public:
  explicit FlowDerivativeField(const SurfaceField& base, double dt = 1e-4)
      : base_(&base), dt_(dt) {}
  double operator()(const Mat2& frame) const override {
    return ((*base_)(frame * flow_translation(dt_)) - (*base_)(frame * flow_translation(-dt_))) /
           (2.0 * dt_);
  }

 private:
  const SurfaceField* base_;
  double dt_;
};

// Seeded frames distributed by the Liouville measure: base points rejection
// sampled from the hyperbolic area of the fundamental domain, fiber angle
// uniform.
std::vector<Mat2> liouville_samples(const FuchsianGroup& group, int n, Rng& rng);

}  // namespace axray::hypflow
