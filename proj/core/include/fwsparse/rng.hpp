#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace fwsparse {

// Deterministic 64-bit generator (SplitMix64). Chosen over <random> engines
// because experiment replay requires bit-identical streams across platforms
// and across worker counts: the state is one counter-like word, any output
// position can be reached in O(1), and the normal transform below is a fixed
// rational approximation instead of an implementation-defined distribution.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in the open interval (0,1): 53-bit mantissa, offset by
  // half an ulp so 0 and 1 are unreachable and the normal quantile is safe.
  double next_unit_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via inverse-CDF sampling; see normal_quantile().
  double next_normal();

  // Uniform integer in [0, bound). Plain modulo: the bias is below
  // bound/2^64, immaterial for the index ranges used here.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Inverse of the standard normal CDF, Wichura's PPND16 rational
// approximation. Measured relative error stays below 3e-15 over the whole
// range reachable from next_unit_open(). Throws RangeError outside (0,1).
double normal_quantile(double p);

// Random access into the stream seeded by `base`: returns the index-th
// output of SplitMix64(base) without generating the preceding ones. Used to
// give every trial (and every thread) its own independent seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// `count` distinct indices drawn uniformly from [0, bound), sorted
// ascending. Fisher-Yates prefix of the identity permutation, so each
// size-count subset has equal probability. Throws RangeError if
// count > bound or either argument is negative.
std::vector<Eigen::Index> sample_distinct_indices(Eigen::Index count,
                                                  Eigen::Index bound,
                                                  SplitMix64& rng);

}  // namespace fwsparse
