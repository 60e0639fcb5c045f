#pragma once

// Portable pseudo-random draws. std::mt19937_64's output sequence is fixed by
// the standard, but the std distributions are not, so bounded draws are done
// here by rejection to keep generated corpora bit-identical across platforms.

#include <cstdint>
#include <random>

#include "padic_orth/rational.hpp"

namespace padic_orth {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), bound >= 1.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform integer in [0, bound) for a big bound.
inline Integer uniform_integer_below(Rng& rng, const Integer& bound) {
  if (bound <= 1) return 0;
  // Draw enough 64-bit limbs, then reject to stay uniform.
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t limbs = (bits + 63) / 64;
  Integer x;
  for (;;) {
    x = 0;
    for (std::size_t i = 0; i < limbs; ++i) {
      x <<= 64;
      const std::uint64_t r = rng();
      x += Integer(static_cast<unsigned long>(r >> 32)) * Integer(4294967296UL) +
           Integer(static_cast<unsigned long>(r & 0xffffffffULL));
    }
    x >>= static_cast<mp_bitcnt_t>(64 * limbs - bits);
    if (x < bound) return x;
  }
}

/// SplitMix64 finalizer; derives independent per-item seeds from one seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace padic_orth
