#include "axray/core/rng.hpp"

#include <cmath>

namespace axray {

std::uint64_t Rng::next_u64() {
  // SplitMix64 step.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * next_double(); }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Box-Muller; u1 is kept away from 0 so the log is finite.
  double u1 = 0.0;
  do {
    u1 = next_double();
  } while (u1 <= 0x1.0p-60);
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection to remove modulo bias.
  const std::uint64_t lim = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = 0;
  do {
    x = next_u64();
  } while (x >= lim);
  return x % n;
}

std::uint64_t derive_stream(std::uint64_t seed, std::string_view label) {
  // FNV-1a over the label, then one scramble round so nearby seeds decouple.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Rng mix(seed ^ h);
  return mix.next_u64();
}

}  // namespace axray
