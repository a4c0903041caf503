#pragma once

#include <array>
#include <cstdint>

namespace conleygp {

/// xoshiro256** (Blackman & Vigna) seeded through splitmix64.
///
/// Every draw is defined bit-for-bit by the seed, independent of the
/// platform's standard library: uniforms use the top 53 bits of a draw,
/// normals use Box-Muller on those uniforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream for work unit `unit` under a master seed. Used so
  /// that trials and path batches do not depend on scheduling order.
  static Rng stream(std::uint64_t master_seed, std::uint64_t unit);

  std::uint64_t next();

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal variate.
  double normal();

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace conleygp
