#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ucodes {

/// Seeded generator with a named substream.
///
/// Every randomized operation draws from `Rng(seed, "<module>.<purpose>")`, so a
/// single user seed drives all modules while streams stay independent. Draws are
/// built only from raw mt19937_64 output, which the standard fixes bit-for-bit,
/// so results do not depend on the standard library's distribution classes.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// True with probability exactly 2^-ell (ell <= 64).
  bool one_in_pow2(unsigned ell);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, exposed for seed derivation in tests.
std::uint64_t mix_seed(std::uint64_t value);

}  // namespace ucodes
