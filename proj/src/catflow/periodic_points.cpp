#include "axray/catflow/periodic_points.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace axray::catflow {

namespace {

using I64 = std::int64_t;
using I128 = __int128;

I64 checked(I128 v, const char* what) {
  if (v > static_cast<I128>(INT64_MAX) || v < static_cast<I128>(INT64_MIN))
    throw std::overflow_error(what);
  return static_cast<I64>(v);
}

struct IMat {
  I64 a = 1, b = 0, c = 0, d = 1;  // row-major [[a,b],[c,d]]

  friend IMat operator*(const IMat& x, const IMat& y) {
    IMat r;
    r.a = checked(static_cast<I128>(x.a) * y.a + static_cast<I128>(x.b) * y.c, "matrix power overflow");
    r.b = checked(static_cast<I128>(x.a) * y.b + static_cast<I128>(x.b) * y.d, "matrix power overflow");
    r.c = checked(static_cast<I128>(x.c) * y.a + static_cast<I128>(x.d) * y.c, "matrix power overflow");
    r.d = checked(static_cast<I128>(x.c) * y.b + static_cast<I128>(x.d) * y.d, "matrix power overflow");
    return r;
  }
  I128 det() const { return static_cast<I128>(a) * d - static_cast<I128>(b) * c; }
};

IMat from_model(const SuspensionModel& m) {
  IMat M;
  M.a = m.matrix_int()(0, 0);
  M.b = m.matrix_int()(0, 1);
  M.c = m.matrix_int()(1, 0);
  M.d = m.matrix_int()(1, 1);
  return M;
}

IMat ipow(IMat base, int n) {
  IMat r;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

// extended gcd: returns g >= 0 with g = x p + y q
I64 ext_gcd(I64 p, I64 q, I64& x, I64& y) {
  if (q == 0) {
    x = (p >= 0) ? 1 : -1;
    y = 0;
    return std::abs(p);
  }
  I64 x1, y1;
  const I64 g = ext_gcd(q, p % q, x1, y1);
  x = y1;
  y = x1 - (p / q) * y1;
  return g;
}

// Smith normal form D = U M V with U, V unimodular, D = diag(d1, d2), d1 | d2.
void smith_2x2(const IMat& M0, IMat& U, IMat& D, IMat& V) {
  U = IMat{};
  V = IMat{};
  D = M0;
  for (int guard = 0; guard < 64; ++guard) {
    if (D.c != 0) {
      if (D.a != 0 && D.c % D.a == 0) {
        // elementary row operation; the gcd combination would cycle here
        const IMat L{1, 0, -(D.c / D.a), 1};
        D = L * D;
        U = L * U;
      } else {
        I64 x, y;
        const I64 g = ext_gcd(D.a, D.c, x, y);
        const IMat L{x, y, -(D.c / g), D.a / g};
        D = L * D;
        U = L * U;
      }
      continue;
    }
    if (D.b != 0) {
      if (D.a != 0 && D.b % D.a == 0) {
        const IMat R{1, -(D.b / D.a), 0, 1};  // col2 -= q * col1
        D = D * R;
        V = V * R;
      } else {
        I64 x, y;
        const I64 g = ext_gcd(D.a, D.b, x, y);
        // column operation: D <- D * R, first column becomes the gcd combination
        const IMat R{x, -(D.b / g), y, D.a / g};
        D = D * R;
        V = V * R;
      }
      continue;
    }
    // diagonal; enforce divisibility d1 | d2 by folding column 2 into column 1
    if (D.a == 0) {  // swap diagonal entries
      const IMat S{0, 1, 1, 0};
      D = S * D * S;
      U = S * U;
      V = V * S;
      continue;
    }
    if (D.d % D.a != 0) {
      const IMat R{1, 0, 1, 1};  // col0 += col1
      D = D * R;
      V = V * R;
      continue;
    }
    break;
  }
  if (D.b != 0 || D.c != 0) throw std::logic_error("normal form did not converge");
  if (D.a < 0) {
    const IMat L{-1, 0, 0, 1};
    D = L * D;
    U = L * U;
  }
  if (D.d < 0) {
    const IMat L{1, 0, 0, -1};
    D = L * D;
    U = L * U;
  }
}

I64 positive_mod(I128 v, I64 mod) {
  I128 r = v % mod;
  if (r < 0) r += mod;
  return static_cast<I64>(r);
}

RationalPoint reduce_point(I64 nx, I64 ny, I64 den) {
  nx = positive_mod(nx, den);
  ny = positive_mod(ny, den);
  const I64 g = std::gcd(std::gcd(nx, ny), den);
  return RationalPoint{nx / g, ny / g, den / g};
}

// exact image under the base map: (nx, ny, den) -> A (nx, ny) mod den
RationalPoint apply_map(const IMat& A, const RationalPoint& p) {
  const I128 nx = static_cast<I128>(A.a) * p.nx + static_cast<I128>(A.b) * p.ny;
  const I128 ny = static_cast<I128>(A.c) * p.nx + static_cast<I128>(A.d) * p.ny;
  return reduce_point(checked(nx % p.den, "orbit step overflow"),
                      checked(ny % p.den, "orbit step overflow"), p.den);
}

}  // namespace

std::int64_t fixed_point_count(const SuspensionModel& m, int n) {
  if (n < 1 || n > 40) throw std::invalid_argument("iterate count out of range [1,40]");
  IMat M = ipow(from_model(m), n);
  M.a -= 1;
  M.d -= 1;
  I128 det = M.det();
  if (det < 0) det = -det;
  return checked(det, "fixed point count overflow");
}

namespace {

// Streams the solution family of (A^n - I) z = 0 mod 1 over an index window
// [lo, hi) of the d1 x d2 solution grid.
void stream_points(const SuspensionModel& m, int n, I64 lo, I64 hi,
                   const std::function<void(const RationalPoint&)>& fn) {
  if (n < 1 || n > 40) throw std::invalid_argument("iterate count out of range [1,40]");
  IMat M = ipow(from_model(m), n);
  M.a -= 1;
  M.d -= 1;
  if (M.det() == 0) throw std::runtime_error("degenerate iterate");

  IMat U, D, V;
  smith_2x2(M, U, D, V);
  const I64 d1 = D.a, d2 = D.d;
  const I64 count = checked(static_cast<I128>(d1) * d2, "fixed point family too large");
  if (count > 200'000'000) throw std::runtime_error("fixed point family too large");
  lo = std::clamp<I64>(lo, 0, count);
  hi = std::clamp<I64>(hi, lo, count);

  const I64 den = count;
  for (I64 k = lo; k < hi; ++k) {
    const I64 i = k / d2, j = k % d2;
    // solutions z = V (i/d1, j/d2) mod 1
    const I128 nx = static_cast<I128>(V.a) * i * d2 + static_cast<I128>(V.b) * j * d1;
    const I128 ny = static_cast<I128>(V.c) * i * d2 + static_cast<I128>(V.d) * j * d1;
    RationalPoint p = reduce_point(checked(nx % den, "point overflow"),
                                   checked(ny % den, "point overflow"), den);
    // exact residue check: M p = 0 mod den(p)
    const I128 rx = static_cast<I128>(M.a) * p.nx + static_cast<I128>(M.b) * p.ny;
    const I128 ry = static_cast<I128>(M.c) * p.nx + static_cast<I128>(M.d) * p.ny;
    if (rx % p.den != 0 || ry % p.den != 0)
      throw std::logic_error("periodic point failed the exact residue check");
    fn(p);
  }
}

}  // namespace

void for_each_periodic_point(const SuspensionModel& m, int n,
                             const std::function<void(const RationalPoint&)>& fn) {
  stream_points(m, n, 0, INT64_MAX, fn);
}

std::vector<RationalPoint> periodic_points(const SuspensionModel& m, int n) {
  std::vector<RationalPoint> out;
  out.reserve(static_cast<std::size_t>(std::min<I64>(fixed_point_count(m, n), 1 << 22)));
  for_each_periodic_point(m, n, [&](const RationalPoint& p) { out.push_back(p); });
  std::sort(out.begin(), out.end());
  const auto dup = std::unique(out.begin(), out.end());
  if (dup != out.end()) throw std::logic_error("periodic point family has duplicates");
  if (static_cast<I64>(out.size()) != fixed_point_count(m, n))
    throw std::logic_error("periodic point count mismatch");
  return out;
}

SuspensionState PeriodicOrbit::state_at(const SuspensionModel& m, double t) const {
  t = std::fmod(t, period);
  if (t < 0) t += period;
  std::size_t k = 0;
  Eigen::Vector2d base = cycle[0].to_double();
  // walk whole fibers; stays exact in the cycle index
  double room = m.roof(base);
  while (t >= room) {
    t -= room;
    k = (k + 1) % cycle.size();
    base = cycle[k].to_double();
    room = m.roof(base);
  }
  return SuspensionState{base, t};
}

void for_each_orbit(const SuspensionModel& m, double max_period,
                    const std::function<void(const PeriodicOrbit&)>& fn,
                    int shard, int n_shards) {
  if (!(max_period > 0.0)) throw std::invalid_argument("max period must be positive");
  if (n_shards < 1 || shard < 0 || shard >= n_shards)
    throw std::invalid_argument("bad shard spec");
  // a cycle of base length n has period >= n (1 - amp)
  const int n_max = static_cast<int>(max_period / m.min_roof());
  const IMat A = from_model(m);

  std::vector<RationalPoint> cyc;
  for (int n = 1; n <= n_max; ++n) {
    const I64 total = fixed_point_count(m, n);
    const I64 lo = total * shard / n_shards;
    const I64 hi = total * (shard + 1) / n_shards;
    if (lo == hi) continue;
    stream_points(m, n, lo, hi, [&](const RationalPoint& p) {
      // emit an orbit only at its lexicographically least point and only at
      // its minimal base period; no cross-level bookkeeping needed.
      cyc.clear();
      cyc.push_back(p);
      RationalPoint q = apply_map(A, p);
      while (!(q == p)) {
        if (q < p) return;  // not the least point of its cycle
        cyc.push_back(q);
        q = apply_map(A, q);
        if (cyc.size() > static_cast<std::size_t>(n)) return;
      }
      if (cyc.size() != static_cast<std::size_t>(n)) return;  // divisor period

      PeriodicOrbit orb;
      orb.base_period = n;
      double per = 0.0;
      for (const auto& r : cyc) per += m.roof(r.to_double());
      orb.period = per;
      if (orb.period > max_period) return;
      orb.cycle = cyc;
      fn(orb);
    });
  }
}

std::vector<PeriodicOrbit> enumerate_orbits(const SuspensionModel& m, double max_period) {
  std::vector<PeriodicOrbit> out;
  for_each_orbit(m, max_period, [&](const PeriodicOrbit& orb) { out.push_back(orb); });
  std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    if (a.period != b.period) return a.period < b.period;
    return a.cycle[0] < b.cycle[0];
  });
  return out;
}

}  // namespace axray::catflow
