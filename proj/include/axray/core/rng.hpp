#pragma once

#include <cstdint>
#include <string_view>

namespace axray {

// Deterministic generator with identical output on every platform. All sampling
// in the library goes through this type; std:: distributions are avoided because
// their output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0,1), 53-bit resolution.
  double next_double();

  double uniform(double a, double b);

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

// Independent stream for a named subcomponent: mixes a label hash into the seed
// so experiments can split one run seed into decoupled streams.
std::uint64_t derive_stream(std::uint64_t seed, std::string_view label);

}  // namespace axray
