#pragma once

#include "axray/hypflow/band_field.hpp"
#include "axray/hypflow/fuchsian.hpp"

#include <vector>

namespace axray::hypflow {

// Free-homotopy class of a closed geodesic: cyclically reduced canonical
// word, its matrix, |trace|, and length 2 arccosh(|tr|/2). Every cyclic
// permutation of the word yields the same length.
struct GeodesicClass {
  std::vector<int> word;
  Mat2 matrix;
  double trace;
  double length;
};

struct EnumerateOptions {
  // Keep a class and its orientation reversal as separate entries.
  bool oriented = false;
  int threads = 0;  // 0 = automatic
};

// Tallies of the word sweep behind an enumeration.
struct EnumerationLog {
  long long words_kept = 0;         // hyperbolic words within the length cap
  long long non_hyperbolic = 0;     // |tr| <= 2 words skipped
};

// All distinct classes with length <= length_max represented by cyclically
// reduced words of length <= word_cutoff. Words are deduplicated under
// cyclic permutation, relator rewrites, and (unless oriented) inversion;
// results are sorted by (length, word). The list is saturated once no class
// of the next word length fits under the cap, which the count's monotonicity
// in word_cutoff makes observable.
std::vector<GeodesicClass> enumerate_classes(const FuchsianGroup& group, double length_max,
                                             int word_cutoff, const EnumerateOptions& opts = {},
                                             EnumerationLog* log = nullptr);

// Same class traversed backwards: inverse word and matrix, equal length.
GeodesicClass reversed(const FuchsianGroup& group, const GeodesicClass& c);

// Average of the field over the closed geodesic of the class, (1/l) int_0^l,
// computed by the periodic trapezoid rule with n_quad >= 64 nodes along the
// axis. The value is independent of the conjugacy representative.
double xray_class(const FuchsianGroup& group, const SurfaceField& field, const GeodesicClass& c,
                  int n_quad = 512);

}  // namespace axray::hypflow
