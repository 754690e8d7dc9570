#pragma once

#include <axray/catflow/flow_boxes.hpp>
#include <axray/livsic/dense_orbit.hpp>
#include <axray/livsic/fields.hpp>

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

namespace axray::livsic {

using catflow::FlowBoxCover;

// integral of f along s -> flow(start, s), s in [0, t]; the running primitive
// every construction below telescopes
double integrate_along_orbit(const SuspensionModel& m, const FlowField& f,
                             const SuspensionState& start, double t);

// The generating orbit data: states and running integrals of f sampled on the
// stretch [0, period - 1].  The final length-1 piece only closes the orbit and
// carries no data, which keeps the primitive single-valued.
struct OrbitSamples {
  std::vector<double> t;
  std::vector<SuspensionState> state;
  std::vector<double> value;
  double period = 0.0;
};

OrbitSamples sample_orbit_integral(const SuspensionModel& m, const FlowField& f,
                                   const ShadowResult& orbit, double dt);
OrbitSamples sample_orbit_integral(const SuspensionModel& m, const FlowField& f,
                                   const PeriodicOrbit& orbit, double dt);

struct HolderFit {
  double beta = 0.0;
  double constant = 0.0;
};

// Empirical Hoelder constant of the orbit data at exponent beta: the larger of
// the near-pair quotients (distance <= r0) and the coarse bound range / r0^beta
// that covers every far pair.
double holder_constant(const SuspensionModel& m, const OrbitSamples& data, double r0,
                       double beta);

// Largest exponent on the grid {0.9, 0.8, ..., 0.1} whose constant stays within
// cap; throws std::runtime_error when even 0.1 fails.
HolderFit fit_holder(const SuspensionModel& m, const OrbitSamples& data, double r0,
                     double cap);

// Same two fits measured on the projected section data of a box cover: the
// largest quotient over same-box point pairs in the base metric.  This is the
// metric the section extensions live in; distances along the flow blur
// transversal closeness, so the orbit-metric fit can miss deep anchor passes.
double section_holder_constant(const SuspensionModel& m, const FlowField& f,
                               const OrbitSamples& data, const FlowBoxCover& cover,
                               double beta);
HolderFit fit_section_holder(const SuspensionModel& m, const FlowField& f,
                             const OrbitSamples& data, const FlowBoxCover& cover,
                             double cap);

// Max-form K-Hoelder extension of values given at section points (torus base
// metric): E(p) = max_j vals[j] - k * d(p, pts[j])^beta.  Construction verifies
// the data itself satisfies the bound and rejects violations with the witness
// pair in the exception message.  An empty section extends to zero.
class SectionExtension {
 public:
  SectionExtension() = default;
  SectionExtension(std::vector<Eigen::Vector2d> pts, std::vector<double> vals, double beta,
                   double k);

  bool empty() const { return pts_.empty(); }
  std::size_t size() const { return pts_.size(); }
  double operator()(const Eigen::Vector2d& p) const;

 private:
  std::vector<Eigen::Vector2d> pts_;
  std::vector<double> vals_;
  double beta_ = 1.0;
  double k_ = 0.0;
};

struct CoboundaryParams {
  double box_eps0 = 0.25;          // cover base scale
  double box_wt = 0.35;            // cover sheet thickness
  double sample_dt = 0.02;         // orbit data sampling step
  double r0 = 0.1;                 // near-pair radius of the data fit
  double k_cap = 10.0;             // admissible data Hoelder constant
  double force_beta = 0.0;         // > 0: skip the fit and use this exponent
  double force_k = 0.0;            // > 0: skip the fit and use this constant
  double ext_headroom = 1.5;       // extension constant = headroom * data constant
  int norm_samples = 4096;         // random states behind the norm estimates
  std::uint64_t norm_seed = 0x51E9D1CEull;
  double diag_dt = 0.01;           // resampling step for the on-orbit diagnostic
};

struct CoboundaryNorms {
  double u_sup = 0.0;
  double u_holder = 0.0;  // sampled seminorm estimate at the working exponent
  double h_sup = 0.0;
  double h_holder = 0.0;
  // interpolation bound sqrt(h_sup * (h_sup + h_holder)) at half the exponent
  double h_interp = 0.0;
};

// f = X u + h with h algebraic: u = sum_i theta_i u_i from per-box extensions
// of the orbit primitive, h = -sum_i u_i X theta_i.  u_i(y) pins the section
// value at the box sheet and pulls it along the flow, so X u_i = f exactly
// inside each box and h vanishes on the generating data by construction.
class CoboundaryDecomposition {
 public:
  double u(const SuspensionState& y) const;
  double h(const SuspensionState& y) const;

  double beta() const { return beta_; }
  double data_k() const { return k_data_; }
  double extension_k() const { return k_ext_; }
  const CoboundaryNorms& norms() const { return norms_; }
  // max |h| over the generating stretch, resampled at diag_dt
  double max_h_on_orbit() const { return max_h_orbit_; }
  const FlowBoxCover& cover() const { return cover_; }

  friend CoboundaryDecomposition assemble_coboundary(const SuspensionModel& m,
                                                     std::shared_ptr<const FlowField> f,
                                                     const OrbitSamples& data,
                                                     const FlowBoxCover& cover,
                                                     const CoboundaryParams& params);

 private:
  CoboundaryDecomposition(const SuspensionModel& m, std::shared_ptr<const FlowField> f,
                          FlowBoxCover cover)
      : m_(m), f_(std::move(f)), cover_(std::move(cover)) {}

  SuspensionModel m_;
  std::shared_ptr<const FlowField> f_;
  FlowBoxCover cover_;
  std::vector<SectionExtension> sections_;
  double beta_ = 0.0;
  double k_data_ = 0.0;
  double k_ext_ = 0.0;
  CoboundaryNorms norms_;
  double max_h_orbit_ = 0.0;
};

CoboundaryDecomposition assemble_coboundary(const SuspensionModel& m,
                                            std::shared_ptr<const FlowField> f,
                                            const OrbitSamples& data,
                                            const FlowBoxCover& cover,
                                            const CoboundaryParams& params);

}  // namespace axray::livsic
