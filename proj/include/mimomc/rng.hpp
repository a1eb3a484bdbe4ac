// SPDX-License-Identifier: Apache-2.0
//
// mimomc - MIMO radar with matrix completion, simulation toolkit
// ------------------------------------------------------------------------

#pragma once

#include "mimomc/types.hpp"

#include <array>
#include <cstdint>

namespace mimomc {

// The generator is fixed by algorithm so that masks and scenes can be
// reproduced bit-exactly by other implementations:
//
//   state    xoshiro256** (Blackman & Vigna), 4 x 64-bit words
//   seeding  the four words are successive outputs of SplitMix64(seed)
//   uniform  u = (next() >> 11) * 2^-53, in [0, 1)
//   integer  uniform_below(n): rejection of the lowest (2^64 mod n) raw
//            values, then next() % n
//   normal   Box-Muller, u1 = 1 - uniform() in (0, 1], cosine branch only
//            (one normal per two raw draws; no cached second value)

/// SplitMix64 finalizer (the avalanche step of SplitMix64).
std::uint64_t splitmix64_mix(std::uint64_t z);

/// One SplitMix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64_next(std::uint64_t& state);

class Xoshiro256 {
public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  double uniform();
  double uniform(double lo, double hi);
  std::uint64_t uniform_below(std::uint64_t n);
  double normal();
  /// Circular complex Gaussian with E|z|^2 = variance.
  cd complex_normal(double variance = 1.0);

private:
  std::array<std::uint64_t, 4> s_;
};

} // namespace mimomc
