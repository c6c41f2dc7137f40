#include "ucodes/rng.hpp"

namespace ucodes {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::string_view stream)
    : engine_(mix_seed(mix_seed(seed) ^ fnv1a(stream))) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection keeps the draw unbiased: accept only values above 2^64 mod bound.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

bool Rng::one_in_pow2(unsigned ell) {
  if (ell == 0) return true;
  std::uint64_t r = engine_();
  if (ell >= 64) return r == 0;
  return (r & ((std::uint64_t{1} << ell) - 1)) == 0;
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

}  // namespace ucodes
