#pragma once

#include <cstdint>
#include <random>

namespace matfact {

/// splitmix64 finalizer applied to base + index; used to give every
/// replication its own independent stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard.
/// The distributions are implemented here instead of using <random>'s,
/// which are implementation-defined: uniforms take the top 53 bits, normals
/// use the Marsaglia polar method and cache the second variate.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Uniform on the open interval (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_open(); }
  double normal();
  /// Chi-square with an integer number of degrees of freedom, as a sum of
  /// squared normals.
  double chi_square(int dof);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace matfact
