#pragma once

#include <axray/catflow/scalar_field.hpp>
#include <axray/catflow/suspension.hpp>

#include <functional>
#include <memory>
#include <vector>

namespace axray::livsic {

using catflow::ScalarField;
using catflow::StateFunc;
using catflow::SuspensionModel;
using catflow::SuspensionState;

// A scalar field together with an exact integral along flow lines.  The
// coboundary pipeline telescopes these integrals, so their accuracy sets the
// floor for every "vanishes on the orbit" claim; fields that admit a closed
// form (trigonometric fields, exact derivatives) provide it directly and
// generic callables fall back to adaptive quadrature.
class FlowField {
 public:
  virtual ~FlowField() = default;
  virtual double operator()(const SuspensionModel& m, const SuspensionState& y) const = 0;
  // integral of the field along s -> flow(y, s) for s in [0, t] (t may be < 0)
  virtual double flow_integral(const SuspensionModel& m, const SuspensionState& y,
                               double t) const = 0;
};

// wraps an arbitrary callable; integrals by adaptive Simpson split at roof
// crossings, absolute tolerance tol
class CallableField final : public FlowField {
 public:
  explicit CallableField(StateFunc f, double tol = 1e-10);
  double operator()(const SuspensionModel& m, const SuspensionState& y) const override;
  double flow_integral(const SuspensionModel& m, const SuspensionState& y,
                       double t) const override;

 private:
  StateFunc f_;
  double tol_;
};

// wraps a trigonometric ScalarField; the height profile integrates exactly
// per fiber, so flow integrals are closed-form up to the profile table
class TrigField final : public FlowField {
 public:
  explicit TrigField(ScalarField f);
  const ScalarField& field() const { return f_; }
  double operator()(const SuspensionModel& m, const SuspensionState& y) const override;
  double flow_integral(const SuspensionModel& m, const SuspensionState& y,
                       double t) const override;

  // integral of the height profile over [s0, h]; monotone, clamped outside
  double cumulative(double h) const;
  // full-fiber profile integral; the same for every fiber since the support
  // sits strictly below the minimal roof
  double fiber_mass() const;

 private:
  ScalarField f_;
  std::vector<double> cum_;
};

// the exact coboundary X w of a known potential: flow integrals telescope to
// w(end) - w(start)
class DerivativeField final : public FlowField {
 public:
  explicit DerivativeField(ScalarField w);
  const ScalarField& potential() const { return w_; }
  double operator()(const SuspensionModel& m, const SuspensionState& y) const override;
  double flow_integral(const SuspensionModel& m, const SuspensionState& y,
                       double t) const override;

 private:
  ScalarField w_;
};

// a + scale * b
class SumField final : public FlowField {
 public:
  SumField(std::shared_ptr<const FlowField> a, std::shared_ptr<const FlowField> b,
           double scale);
  double operator()(const SuspensionModel& m, const SuspensionState& y) const override;
  double flow_integral(const SuspensionModel& m, const SuspensionState& y,
                       double t) const override;

 private:
  std::shared_ptr<const FlowField> a_, b_;
  double scale_;
};

}  // namespace axray::livsic
