#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "axray/core/rng.hpp"
#include "axray/hypflow/band_field.hpp"
#include "axray/hypflow/classes.hpp"
#include "axray/hypflow/fuchsian.hpp"
#include "axray/hypflow/mobius.hpp"
#include "axray/hypflow/pairing.hpp"
#include "axray/hypflow/resolvent.hpp"

using namespace axray;
using namespace axray::hypflow;

namespace {

const FuchsianGroup& bolza() {
  static FuchsianGroup g = FuchsianGroup::bolza();
  return g;
}

const std::vector<GeodesicClass>& classes_short() {
  static std::vector<GeodesicClass> c = enumerate_classes(bolza(), 6.2, 6, {}, nullptr);
  return c;
}

const std::vector<GeodesicClass>& classes_parry() {
  static std::vector<GeodesicClass> c = enumerate_classes(bolza(), 10.0, 9, {}, nullptr);
  return c;
}

// Zero angular-constant coefficient: the fiber average vanishes, so the field
// has exact zero Liouville mean without Monte Carlo centering.
BandField centered_field(int band, std::uint64_t seed) {
  Rng rng(derive_stream(seed, "parry-field"));
  std::vector<double> cc(static_cast<size_t>(band) + 1), sn(static_cast<size_t>(band) + 1);
  for (int n = 0; n <= band; ++n) {
    cc[static_cast<size_t>(n)] = rng.uniform(-1.0, 1.0);
    sn[static_cast<size_t>(n)] = rng.uniform(-1.0, 1.0);
  }
  cc[0] = 0.0;
  sn[0] = 0.0;
  return BandField(bolza(), band, cc, sn);
}

}  // namespace

TEST_CASE("group construction invariants") {
  const FuchsianGroup& g = bolza();
  CHECK(g.n_letters() == 8);
  for (int k = 0; k < 8; ++k) {
    const Mat2& m = g.letter(k);
    CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
    CHECK(std::abs(m.trace()) > 2.0);  // hyperbolic letters only
    CHECK(((g.letter(k) * g.letter((k + 4) % 8)) - Mat2::Identity()).norm() < 1e-10);
  }
  CHECK(g.relator_defect() < 1e-9);
  // octagon geometry: 8 vertices, inradius below outradius
  CHECK(g.domain_vertices().size() == 8);
  CHECK(g.domain_inradius() == doctest::Approx(1.528571).epsilon(1e-4));
  CHECK(g.domain_outradius() == doctest::Approx(2.448452).epsilon(1e-4));
  CHECK(g.domain_inradius() < g.domain_outradius());
}

TEST_CASE("group constructor rejects bad generators") {
  std::vector<Mat2> gens(4);
  for (auto& m : gens) m = Mat2::Identity() * 2.0;  // det 4
  CHECK_THROWS_AS(FuchsianGroup::from_generators(gens), std::invalid_argument);
  // wrong relator: shuffle one Bolza generator
  std::vector<Mat2> bg(4);
  for (int k = 0; k < 4; ++k) bg[static_cast<size_t>(k)] = bolza().letter(k);
  std::swap(bg[0], bg[1]);
  CHECK_THROWS_AS(FuchsianGroup::from_generators(bg), std::invalid_argument);
}

TEST_CASE("reduction lands in the fundamental domain and fixes cosets") {
  const FuchsianGroup& g = bolza();
  Rng rng(derive_stream(7, "red"));
  for (int trial = 0; trial < 50; ++trial) {
    // random word walk away from the domain
    Mat2 m = Mat2::Identity();
    for (int j = 0; j < 12; ++j) m = m * g.letter(static_cast<int>(rng.below(8)));
    Mat2 frame = m * rotation(rng.uniform(0.0, 2 * std::numbers::pi));
    Mat2 red = g.reduce(frame);
    CHECK(std::abs(red.determinant() - 1.0) < 1e-9);
    CHECK(g.in_domain(mobius_apply(red, base_point()), 1e-9));
    CHECK(g.same_coset(red, frame));
  }
}

TEST_CASE("unit tangent states are reduced det-1 frames") {
  const FuchsianGroup& g = bolza();
  Mat2 raw = g.letter(3) * g.letter(1) * rotation(0.7) * 1.0;
  UnitTangentState s = make_state(g, raw);
  CHECK(std::abs(s.frame.determinant() - 1.0) < 1e-12);
  CHECK(g.in_domain(mobius_apply(s.frame, base_point()), 1e-9));
}

TEST_CASE("geodesic flow group law and axis closing") {
  const FuchsianGroup& g = bolza();
  UnitTangentState s = make_state(g, Mat2(g.letter(2) * rotation(1.1)));
  UnitTangentState s0 = geodesic_flow(g, s, 0.0);
  CHECK((s0.frame - s.frame).norm() < 1e-12);  // t = 0 is the identity
  UnitTangentState a = geodesic_flow(g, geodesic_flow(g, s, 0.8), 1.7);
  UnitTangentState b = geodesic_flow(g, s, 2.5);
  CHECK(g.same_coset(a.frame, b.frame, 1e-9));
  for (size_t i : {3ul, 19ul, 28ul}) {
    const GeodesicClass& c = classes_short()[i];
    UnitTangentState on_axis = make_state(g, axis_frame(c.matrix));
    UnitTangentState back = geodesic_flow(g, on_axis, c.length);
    CHECK(g.same_coset(back.frame, on_axis.frame, 1e-8));
  }
}

TEST_CASE("class enumeration invariants") {
  const auto& cls = classes_short();
  CHECK(cls.size() == 68);
  // shortest classes: the 12 systoles of the octagon surface
  const double systole = 2.0 * std::acosh(1.0 + std::numbers::sqrt2);
  int n_systoles = 0;
  for (const auto& c : cls)
    if (c.length < systole + 1e-9) ++n_systoles;
  CHECK(n_systoles == 12);
  CHECK(cls.front().length == doctest::Approx(systole).epsilon(1e-12));
  for (const auto& c : cls) {
    CHECK(c.trace > 2.0);
    CHECK(c.length > 0.0);
    // fresh representative: recompute the product and its length
    Mat2 m = Mat2::Identity();
    for (int letter : c.word) m = m * bolza().letter(letter);
    CHECK(std::abs(2.0 * std::acosh(std::abs(m.trace()) / 2.0) - c.length) < 1e-10);
    // cyclic permutations have equal length
    std::vector<int> w = c.word;
    std::rotate(w.begin(), w.begin() + 1, w.end());
    Mat2 r = Mat2::Identity();
    for (int letter : w) r = r * bolza().letter(letter);
    CHECK(std::abs(2.0 * std::acosh(std::abs(r.trace()) / 2.0) - c.length) < 1e-10);
  }
  // single letters appear with the direct matrix length
  bool found_letter = false;
  for (const auto& c : cls)
    if (c.word.size() == 1) {
      found_letter = true;
      CHECK(c.length ==
            doctest::Approx(translation_length(bolza().letter(c.word[0]))).epsilon(1e-12));
    }
  CHECK(found_letter);
}

TEST_CASE("enumeration count monotone in cutoff until saturation") {
  const FuchsianGroup& g = bolza();
  size_t n6 = enumerate_classes(g, 6.2, 6, {}, nullptr).size();
  size_t n7 = enumerate_classes(g, 6.2, 7, {}, nullptr).size();
  size_t n8 = enumerate_classes(g, 6.2, 8, {}, nullptr).size();
  CHECK(n6 <= n7);
  CHECK(n7 == n8);  // saturated
  CHECK(n7 == 68);
  // count grows with Lmax
  CHECK(enumerate_classes(g, 8.0, 7, {}, nullptr).size() == 216);
  CHECK(enumerate_classes(g, 8.0, 7, {}, nullptr).size() > n7);
}

TEST_CASE("oriented enumeration doubles inversion-asymmetric classes") {
  EnumerateOptions oriented;
  oriented.oriented = true;
  auto unor = classes_short();
  auto orie = enumerate_classes(bolza(), 6.2, 6, oriented, nullptr);
  CHECK(orie.size() >= unor.size());
  CHECK(orie.size() <= 2 * unor.size());
  // every oriented class has a length twin in the unoriented list
  for (const auto& c : orie) {
    bool twin = false;
    for (const auto& u : unor)
      if (std::abs(u.length - c.length) < 1e-9) twin = true;
    CHECK(twin);
  }
}

TEST_CASE("enumeration rejects bad arguments and logs skips") {
  CHECK_THROWS_AS(enumerate_classes(bolza(), -1.0, 6, {}, nullptr), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_classes(bolza(), 5.0, 0, {}, nullptr), std::invalid_argument);
  EnumerationLog log;
  enumerate_classes(bolza(), 6.2, 6, {}, &log);
  CHECK(log.words_kept > 0);
  CHECK(log.non_hyperbolic == 0);  // honest surface group: no elliptic products
}

TEST_CASE("band field invariance below truncation bound") {
  Rng rng(derive_stream(99, "bf"));
  for (int band : {0, 1, 2, 3}) {
    BandField f = BandField::random(bolza(), band, rng);
    CHECK(f.n_dropped_translates() == 0);  // displacement ball is complete
    double defect = f.invariance_defect(128, 11);
    double bound = f.truncation_bound(128, 11);
    CHECK(defect < bound);
    CHECK(defect < 1e-12);
  }
  CHECK_THROWS_AS(BandField(bolza(), -1, {1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(BandField(bolza(), 1, {1.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("band field respects its vertical band") {
  // rotating the frame by alpha multiplies mode n by e^{i n alpha}; a pure
  // band-m field picks up exactly cos(m alpha) under symmetric combination
  const FuchsianGroup& g = bolza();
  std::vector<double> cc = {0.0, 0.0, 1.0}, sn = {0.0, 0.0, 0.0};
  BandField f(g, 2, cc, sn);
  Mat2 frame = g.reduce(Mat2(g.letter(1) * rotation(0.4)));
  double base = f(frame);
  CHECK(std::abs(base) > 1e-3);
  double alpha = std::numbers::pi / 2;  // half period of mode 2
  double rotated = f(Mat2(frame * rotation(alpha)));
  CHECK(rotated == doctest::Approx(-base).epsilon(1e-9));
  double full = f(Mat2(frame * rotation(2 * alpha)));
  CHECK(full == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("xray of the constant field is one") {
  for (size_t i : {0ul, 7ul, 30ul, 60ul}) {
    CallableSurfaceField one([](const Mat2&) { return 1.0; });
    double v = xray_class(bolza(), one, classes_short()[i], 128);
    CHECK(v == 1.0);
  }
}

TEST_CASE("xray kills flow derivatives") {
  Rng rng(derive_stream(5, "df"));
  BandField w = BandField::random(bolza(), 2, rng);
  FlowDerivativeField dw(w);
  for (size_t i = 0; i < classes_short().size(); i += 7) {
    double v = xray_class(bolza(), dw, classes_short()[i], 512);
    CHECK(std::abs(v) < 1e-6);
  }
}

TEST_CASE("xray is conjugacy invariant") {
  Rng rng(derive_stream(99, "bf"));
  BandField f = BandField::random(bolza(), 2, rng);
  const FuchsianGroup& g = bolza();
  for (size_t i : {3ul, 19ul, 32ul}) {
    GeodesicClass conj = classes_short()[i];
    REQUIRE(std::abs(xray_class(g, f, conj, 256)) > 0.01);  // meaningful class
    double base = xray_class(g, f, conj, 256);
    conj.matrix = g.letter(5) * conj.matrix * g.letter(1);  // g5 . m . g5^{-1}
    CHECK(xray_class(g, f, conj, 256) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("orientation reversal flips odd bands") {
  const FuchsianGroup& g = bolza();
  std::vector<double> cc = {0.0, 0.3, 0.0, 0.9}, sn = {0.0, -0.2, 0.0, 0.4};
  BandField odd(g, 3, cc, sn);  // modes 1 and 3 only
  for (size_t i : {3ul, 19ul, 32ul}) {
    const GeodesicClass& c = classes_short()[i];
    GeodesicClass rev = reversed(g, c);
    CHECK(rev.length == doctest::Approx(c.length).epsilon(1e-12));
    double fwd = xray_class(g, odd, c, 256);
    double bwd = xray_class(g, odd, rev, 256);
    REQUIRE(std::abs(fwd) > 1e-4);
    CHECK(bwd == doctest::Approx(-fwd).epsilon(1e-8));
  }
}

TEST_CASE("xray rejects tiny quadrature") {
  CallableSurfaceField one([](const Mat2&) { return 1.0; });
  CHECK_THROWS_AS(xray_class(bolza(), one, classes_short()[0], 32), std::invalid_argument);
}

TEST_CASE("variance pairing of a constant centers to zero") {
  CallableSurfaceField c([](const Mat2&) { return 4.2; });
  PairingResult r = variance_pairing(bolza(), c, c, 10.0, 512, 3);
  CHECK(r.centered);  // nonzero mean removed
  CHECK(std::abs(r.value) < 1e-9);
  CHECK(std::abs(r.tail) < 1e-9);
  CHECK(r.mean_f1 == doctest::Approx(4.2).epsilon(1e-12));
}

TEST_CASE("variance pairing is positive and symmetric") {
  BandField f = centered_field(2, 1);
  BandField h = centered_field(1, 2);
  PairingResult quad = variance_pairing(bolza(), f, f, 30.0, 2048, 17);
  CHECK(quad.value >= -3.0 * quad.std_error);
  PairingResult ab = variance_pairing(bolza(), f, h, 30.0, 2048, 17);
  PairingResult ba = variance_pairing(bolza(), h, f, 30.0, 2048, 17);
  double se = 3.0 * std::max(ab.std_error, ba.std_error);
  CHECK(std::abs(ab.value - ba.value) < se);
}

TEST_CASE("variance pairing is bilinear on a shared sample set") {
  BandField f1 = centered_field(1, 4);
  BandField f2 = centered_field(2, 5);
  BandField gfield = centered_field(2, 6);
  const double a = 0.7, b = -1.3;
  CallableSurfaceField combo([&](const Mat2& m) { return a * f1(m) + b * f2(m); });
  PairingResult lhs = variance_pairing(bolza(), combo, gfield, 20.0, 1024, 23);
  PairingResult r1 = variance_pairing(bolza(), f1, gfield, 20.0, 1024, 23);
  PairingResult r2 = variance_pairing(bolza(), f2, gfield, 20.0, 1024, 23);
  double target = a * r1.value + b * r2.value;
  double se = 3.0 * (std::abs(a) * r1.std_error + std::abs(b) * r2.std_error + lhs.std_error);
  CHECK(std::abs(lhs.value - target) < se);
}

TEST_CASE("variance pairing validates arguments") {
  CallableSurfaceField one([](const Mat2&) { return 1.0; });
  CHECK_THROWS_AS(variance_pairing(bolza(), one, one, -1.0, 256, 1), std::invalid_argument);
  CHECK_THROWS_AS(variance_pairing(bolza(), one, one, 10.0, 8, 1), std::invalid_argument);
}

TEST_CASE("pairing determinism: same seed, same estimate") {
  BandField f = centered_field(2, 1);
  PairingResult a = variance_pairing(bolza(), f, f, 10.0, 512, 99);
  PairingOptions two_threads;
  two_threads.threads = 2;
  PairingResult b = variance_pairing(bolza(), f, f, 10.0, 512, 99, two_threads);
  CHECK(a.value == b.value);  // shard streams independent of thread count
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("resolvent on constant signal is exactly 1/lambda") {
  std::vector<double> ones(256, 1.0);
  for (double lam : {0.1, 0.5, 1.0, 2.0}) {
    ResolventResult r = resolvent_on_orbit(ones, 4.0, lam);
    CHECK(r.multiplier_value == 1.0 / lam);
    CHECK(std::abs(r.direct_value - 1.0 / lam) < 1e-8);
    CHECK(r.lower_bound == 1.0 / lam);
  }
}

TEST_CASE("resolvent multiplier agrees with direct quadrature") {
  Rng rng(derive_stream(5, "sig"));
  const double ell = 3.5;
  const int n = 1024;
  for (double lam : {0.1, 0.5, 1.0, 2.0}) {
    std::vector<double> sig(n);
    for (int j = 0; j < n; ++j) {
      double t = ell * j / n, v = 0.0;
      Rng coef(derive_stream(static_cast<std::uint64_t>(lam * 10), "modes"));
      for (int m = 0; m <= 8; ++m)
        v += coef.uniform(-1.0, 1.0) * std::cos(2 * std::numbers::pi * m * t / ell) +
             coef.uniform(-1.0, 1.0) * std::sin(2 * std::numbers::pi * m * t / ell);
      sig[static_cast<size_t>(j)] = v;
    }
    ResolventResult r = resolvent_on_orbit(sig, ell, lam);
    CHECK(std::abs(r.multiplier_value - r.direct_value) < 1e-6);
    CHECK(r.multiplier_value >= r.lower_bound);
    CHECK(r.lower_bound ==
          doctest::Approx(std::norm(r.coeffs[0]) / lam).epsilon(1e-12));
  }
}

TEST_CASE("resolvent validates arguments") {
  std::vector<double> ok(64, 1.0), odd(63, 1.0), tiny(2, 1.0);
  CHECK_THROWS_AS(resolvent_on_orbit(ok, 4.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(resolvent_on_orbit(ok, 4.0, -1.0), std::domain_error);
  CHECK_THROWS_AS(resolvent_on_orbit(odd, 4.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(resolvent_on_orbit(tiny, 4.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(resolvent_on_orbit(ok, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("resolvent of an orbit signal cross-checks") {
  Rng rng(derive_stream(99, "bf"));
  BandField f = BandField::random(bolza(), 2, rng);
  const GeodesicClass& c = classes_short()[19];
  std::vector<double> sig = orbit_signal(bolza(), f, c, 1024);
  ResolventResult r = resolvent_on_orbit(sig, c.length, 0.5);
  CHECK(std::abs(r.multiplier_value - r.direct_value) < 1e-6);
  CHECK(r.multiplier_value >= r.lower_bound);
}

TEST_CASE("parry average normalizes the constant field") {
  CallableSurfaceField one([](const Mat2&) { return 1.0; });
  for (double T : {6.0, 8.0, 10.0}) {
    double v = parry_average(bolza(), one, classes_parry(), T);
    CHECK(std::abs(v - 1.0) < 1e-12);
  }
}

TEST_CASE("parry average empty filter raises") {
  CallableSurfaceField one([](const Mat2&) { return 1.0; });
  CHECK_THROWS_AS(parry_average(bolza(), one, classes_parry(), 1.0), std::domain_error);
  CHECK_THROWS_AS(parry_average(bolza(), one, {}, 6.0), std::domain_error);
}

TEST_CASE("parry average is conjugacy invariant") {
  BandField f = centered_field(2, 1);
  const FuchsianGroup& g = bolza();
  std::vector<GeodesicClass> conj = classes_short();
  for (size_t i = 0; i < conj.size(); ++i) {
    int k = static_cast<int>(i % 8);
    conj[i].matrix = g.letter(k) * conj[i].matrix * g.letter((k + 4) % 8);
  }
  double base = parry_average(g, f, classes_short(), 6.2);
  double moved = parry_average(g, f, conj, 6.2);
  CHECK(moved == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("parry average of centered fields shrinks with T") {
  for (int band : {1, 2, 3}) {
    BandField f = centered_field(band, 1);
    double v6 = std::abs(parry_average(bolza(), f, classes_parry(), 6.0));
    double v8 = std::abs(parry_average(bolza(), f, classes_parry(), 8.0));
    double v10 = std::abs(parry_average(bolza(), f, classes_parry(), 10.0));
    CHECK(v8 <= v6);
    CHECK(v10 <= v8);
  }
}

TEST_CASE("mobius helpers") {
  CHECK(std::abs(hyperbolic_dist(base_point(), base_point())) < 1e-15);
  Mat2 r = rotation(0.3);
  CHECK(std::abs(r.determinant() - 1.0) < 1e-15);
  CHECK(displacement(r) < 1e-7);  // rotations fix the base point
  Mat2 f = flow_translation(1.4);
  CHECK(displacement(f) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK_THROWS_AS(translation_length(rotation(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(unimodular(Mat2(Mat2::Zero())), std::invalid_argument);
  // axis frame conjugates the class matrix to the flow translation
  const GeodesicClass& c = classes_short()[3];
  Mat2 a = axis_frame(c.matrix);
  Mat2 t = a.inverse() * c.matrix * a;
  CHECK(std::abs(t(0, 0) - std::exp(c.length / 2)) < 1e-8 * std::exp(c.length / 2));
  CHECK(std::abs(t(0, 1)) < 1e-8);
  CHECK(std::abs(t(1, 0)) < 1e-8);
}
