#include "axray/hypflow/band_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace axray::hypflow {

namespace {

// C-infinity bump of the squared relative distance, support [0, 1).
double bump_sq(double x2) { return x2 >= 1.0 ? 0.0 : std::exp(1.0 - 1.0 / (1.0 - x2)); }

Mat2 random_reduced_frame(const FuchsianGroup& group, Rng& rng) {
  const Mat2 f = rotation(rng.uniform(0.0, 2 * M_PI)) *
                 flow_translation(rng.uniform(0.0, group.domain_outradius())) *
                 rotation(rng.uniform(0.0, 2 * M_PI));
  return group.reduce(f);
}

}  // namespace

BandField::BandField(const FuchsianGroup& group, int band, std::vector<double> cos_coef,
                     std::vector<double> sin_coef, double bump_radius, int word_cutoff)
    : group_(&group),
      band_(band),
      cos_coef_(std::move(cos_coef)),
      sin_coef_(std::move(sin_coef)),
      bump_radius_(bump_radius),
      cutoff_(word_cutoff) {
  if (band_ < 0) throw std::invalid_argument("BandField: band must be >= 0");
  if (cos_coef_.size() != static_cast<size_t>(band_ + 1) ||
      sin_coef_.size() != static_cast<size_t>(band_ + 1))
    throw std::invalid_argument("BandField: coefficient arrays must have band+1 entries");
  if (!(bump_radius_ > 0.0)) throw std::invalid_argument("BandField: bump radius must be > 0");
  if (cutoff_ < 1) throw std::invalid_argument("BandField: word cutoff must be >= 1");
  // Ball needed for exact invariance at reduced base points: bump reach plus
  // the domain radius, plus one letter so both representatives of a boundary
  // point see the same translates.
  const double needed = bump_radius_ + group.domain_outradius() +
                        group.max_letter_displacement() + 0.3;
  elems_ = orbit_ball(group, needed, cutoff_);
  dropped_ = orbit_ball(group, needed, cutoff_ + 8).size() - elems_.size();
  disp_.reserve(elems_.size());
  for (const Mat2& e : elems_) disp_.push_back(displacement(e));
}

BandField BandField::random(const FuchsianGroup& group, int band, Rng& rng, double amplitude,
                            double bump_radius, int word_cutoff) {
  std::vector<double> cs(static_cast<size_t>(band + 1)), sn(static_cast<size_t>(band + 1));
  for (double& c : cs) c = rng.uniform(-amplitude, amplitude);
  for (double& s : sn) s = rng.uniform(-amplitude, amplitude);
  sn[0] = 0.0;
  return BandField(group, band, std::move(cs), std::move(sn), bump_radius, word_cutoff);
}

double BandField::operator()(const Mat2& frame) const {
  return eval_reduced(group_->reduce(unimodular(frame)));
}

double BandField::eval_reduced(const Mat2& frame) const {
  const double base_d = hyperbolic_dist(frame_base(frame), base_point());
  // A translate contributes only when |disp - base_d| <= bump radius.
  const auto lo = std::lower_bound(disp_.begin(), disp_.end(), base_d - bump_radius_) -
                  disp_.begin();
  const auto hi = std::upper_bound(disp_.begin(), disp_.end(), base_d + bump_radius_) -
                  disp_.begin();
  double sum = 0.0;
  for (auto j = lo; j < hi; ++j) {
    const Mat2 h = elems_[static_cast<size_t>(j)] * frame;
    const double dist = hyperbolic_dist(frame_base(h), base_point());
    const double b = bump_sq(dist * dist / (bump_radius_ * bump_radius_));
    if (b == 0.0) continue;
    const Complex w = frame_angle(h);
    Complex wn(1.0, 0.0);
    double ang = cos_coef_[0];
    for (int n = 1; n <= band_; ++n) {
      wn *= w;
      ang += cos_coef_[static_cast<size_t>(n)] * wn.real() +
             sin_coef_[static_cast<size_t>(n)] * wn.imag();
    }
    sum += b * ang;
  }
  return sum;
}

double BandField::truncation_bound(int n_samples, std::uint64_t seed) const {
  BandField smaller(*group_, band_, cos_coef_, sin_coef_, bump_radius_, std::max(1, cutoff_ - 1));
  Rng rng(derive_stream(seed, "band-truncation"));
  double gap = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Mat2 s = random_reduced_frame(*group_, rng);
    gap = std::max(gap, std::abs(eval_reduced(s) - smaller.eval_reduced(s)));
  }
  return std::max(gap, 1e-12);
}

double BandField::invariance_defect(int n_samples, std::uint64_t seed) const {
  Rng rng(derive_stream(seed, "band-invariance"));
  double defect = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const Mat2 s = random_reduced_frame(*group_, rng);
    const double v = (*this)(s);
    for (int k = 0; k < group_->n_letters(); ++k)
      defect = std::max(defect, std::abs((*this)(Mat2(group_->letter(k) * s)) - v));
  }
  return defect;
}

std::vector<Mat2> liouville_samples(const FuchsianGroup& group, int n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("liouville_samples: n must be >= 0");
  std::vector<Mat2> out;
  out.reserve(static_cast<size_t>(n));
  const double R = group.domain_outradius() + 1e-9;
  const double coshR = std::cosh(R);
  while (static_cast<int>(out.size()) < n) {
    // Hyperbolic-area uniform proposal on the ball of radius R, rejected to
    // the fundamental domain, then a uniform fiber angle.
    const double rho = std::acosh(1.0 + rng.next_double() * (coshR - 1.0));
    const double phi = rng.uniform(0.0, 2 * M_PI);
    const Mat2 base = rotation(phi) * flow_translation(rho);
    if (!group.in_domain(frame_base(base))) continue;
    out.push_back(base * rotation(rng.uniform(0.0, 2 * M_PI)));
  }
  return out;
}

}  // namespace axray::hypflow
