#pragma once

#include "axray/hypflow/mobius.hpp"

#include <vector>

namespace axray::hypflow {

// Cocompact surface group acting on the hyperbolic plane. Letters 0..2n-1 are
// the generators followed by their inverses (letter k+n inverts letter k), so
// words are integer strings and the single relator is a letter string that
// multiplies to +-identity. Construction validates det 1 (1e-12), hyperbolic
// letters (|tr| > 2), and the relator defect (1e-9).
class FuchsianGroup {
 public:
  // Genus-2 octagon group: conjugated copies g_k = R(k pi/4) T R(-k pi/4) of
  // the symmetric pairing matrix T = [[1+s, q],[q, 1+s]], s = sqrt 2,
  // q = sqrt(2+2s). Sides of the regular octagon with pi/4 angles are paired
  // through the relator 0 5 2 7 4 1 6 3.
  static FuchsianGroup bolza();

  // Four free generators; inverses are appended as letters 4..7. The octagon
  // relator is validated against the given matrices.
  static FuchsianGroup from_generators(const std::vector<Mat2>& four);

  int n_letters() const { return static_cast<int>(gens_.size()); }
  const Mat2& letter(int k) const { return gens_[static_cast<size_t>(k)]; }
  int inverse_letter(int k) const { return (k + n_letters() / 2) % n_letters(); }
  const std::vector<int>& relator() const { return relator_; }
  double relator_defect() const { return relator_defect_; }

  Mat2 word_matrix(const std::vector<int>& word) const;

  // Dirichlet domain of the base point: vertex list in the unit-disk model,
  // sorted by angle, plus in/out radii of the polygon.
  const std::vector<Complex>& domain_vertices() const { return vertices_; }
  double domain_inradius() const { return inradius_; }
  double domain_outradius() const { return outradius_; }
  double max_letter_displacement() const { return max_letter_disp_; }

  // Point of the closed Dirichlet domain: no letter moves it strictly closer
  // to the base point.
  bool in_domain(Complex z_halfplane, double slack = 1e-12) const;

  // Greedy side-pairing reduction of the frame's base point into the
  // Dirichlet domain. Throws std::runtime_error past the iteration cap.
  Mat2 reduce(const Mat2& frame, int* steps = nullptr) const;

  // Whether a and b name the same point of the quotient: reduces a b^{-1}
  // toward the identity and accepts within tol.
  bool same_coset(const Mat2& a, const Mat2& b, double tol = 1e-9) const;

  static constexpr int kReduceCap = 10000;

 private:
  FuchsianGroup(std::vector<Mat2> gens, std::vector<int> relator);
  std::vector<Mat2> gens_;
  std::vector<int> relator_;
  double relator_defect_ = 0.0;
  std::vector<Complex> vertices_;
  double inradius_ = 0.0, outradius_ = 0.0, max_letter_disp_ = 0.0;
};

// Unit tangent frame of the quotient: det-1 matrix whose base point has been
// reduced into the fundamental domain.
struct UnitTangentState {
  Mat2 frame;
};

// Normalizes det and reduces. Throws on non-positive determinant.
UnitTangentState make_state(const FuchsianGroup& group, const Mat2& frame);

// Right translation by flow_translation(t), reduced back into the domain.
// make_state(flow(s, t1+t2)) and flow(flow(s, t1), t2) agree as cosets.
UnitTangentState geodesic_flow(const FuchsianGroup& group, const UnitTangentState& s, double t);

// Group elements with displacement <= radius and word length <= word_cutoff,
// sorted by displacement (entry order breaks ties). Found by breadth-first
// search over the orbit of the base point with an overshoot ring, so members
// reachable only through slightly larger displacement are not missed.
std::vector<Mat2> orbit_ball(const FuchsianGroup& group, double radius, int word_cutoff);

}  // namespace axray::hypflow
